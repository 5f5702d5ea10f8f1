# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

import csv
import io
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

from commentaug.core.lexer import comment_counts
from commentaug.core.syntax import syntax_for, UnsupportedLanguage

from .io import CodeDocument
from .tokenizer import DEFAULT_TOKENIZER, Tokenizer

logger = logging.getLogger(__name__)

COLUMNS = ("language", "comment_chars", "total_chars", "density", "samples", "tokens")
TOTAL_ROW = "total"


class ReportFormat(str, Enum):
    TEXT = "text"
    CSV = "csv"


@dataclass
class LanguageRow:
    comment_chars: int = 0
    total_chars: int = 0
    samples: int = 0
    tokens: int = 0

    @property
    def density(self) -> float:
        if not self.total_chars:
            return 0.0
        return self.comment_chars / self.total_chars

    def merge(self, other: "LanguageRow") -> "LanguageRow":
        return LanguageRow(
            comment_chars=self.comment_chars + other.comment_chars,
            total_chars=self.total_chars + other.total_chars,
            samples=self.samples + other.samples,
            tokens=self.tokens + other.tokens,
        )


@dataclass
class CorpusStats:
    rows: Dict[str, LanguageRow] = field(default_factory=dict)
    # (document id, language) of documents excluded as unsupported.
    rejected: List[Tuple[str, str]] = field(default_factory=list)

    def add(self, document: CodeDocument, tokenizer: Tokenizer) -> None:
        try:
            syntax = syntax_for(document.language)
        except UnsupportedLanguage as error:
            logger.warning("%s: %s", document.id, error)
            self.rejected.append((document.id, document.language))
            return
        comment, total = comment_counts(document.content, syntax)
        row = self.rows.setdefault(syntax.language.value, LanguageRow())
        row.comment_chars += comment
        row.total_chars += total
        row.samples += 1
        row.tokens += tokenizer.count(document.content)

    def merge(self, other: "CorpusStats") -> "CorpusStats":
        rows = dict(self.rows)
        for language, row in other.rows.items():
            rows[language] = rows[language].merge(row) if language in rows else row
        return CorpusStats(rows=rows, rejected=self.rejected + other.rejected)

    @property
    def aggregate(self) -> LanguageRow:
        total = LanguageRow()
        for row in self.rows.values():
            total = total.merge(row)
        return total

    @property
    def macro_density(self) -> float:
        if not self.rows:
            return 0.0
        return sum(row.density for row in self.rows.values()) / len(self.rows)

    def sorted_rows(self) -> List[Tuple[str, LanguageRow]]:
        return sorted(self.rows.items())


def corpus_stats(
    documents: Iterable[CodeDocument], tokenizer: Optional[Tokenizer] = None
) -> CorpusStats:
    tokenizer = tokenizer or DEFAULT_TOKENIZER
    stats = CorpusStats()
    for document in documents:
        stats.add(document, tokenizer)
    return stats


##
## Rendering
##


def human_count(value: int) -> str:
    for threshold, suffix in ((10**9, "B"), (10**6, "M"), (10**3, "K")):
        if value >= threshold:
            return f"{value / threshold:.1f}{suffix}"
    return str(value)


def _csv_report(stats: CorpusStats) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(COLUMNS)
    rows = stats.sorted_rows() + [(TOTAL_ROW, stats.aggregate)]
    for name, row in rows:
        writer.writerow(
            (
                name,
                row.comment_chars,
                row.total_chars,
                f"{row.density:.4f}",
                row.samples,
                row.tokens,
            )
        )
    return buffer.getvalue()


def _text_report(stats: CorpusStats) -> str:
    table = [COLUMNS]
    rows = stats.sorted_rows() + [(TOTAL_ROW, stats.aggregate)]
    for name, row in rows:
        table.append(
            (
                name,
                human_count(row.comment_chars),
                human_count(row.total_chars),
                f"{row.density:.4f}",
                human_count(row.samples),
                human_count(row.tokens),
            )
        )
    widths = [max(len(line[i]) for line in table) for i in range(len(COLUMNS))]
    lines = []
    for index, line in enumerate(table):
        cells = [line[0].ljust(widths[0])]
        cells.extend(cell.rjust(width) for cell, width in zip(line[1:], widths[1:]))
        if index == len(table) - 1:
            lines.append("-" * (sum(widths) + 2 * (len(widths) - 1)))
        lines.append("  ".join(cells))
    lines.append(f"macro-average density: {stats.macro_density:.4f}")
    if stats.rejected:
        lines.append(f"unsupported documents skipped: {len(stats.rejected)}")
    return "\n".join(lines) + "\n"


def render_report(stats: CorpusStats, format: ReportFormat = ReportFormat.TEXT) -> str:
    if ReportFormat(format) is ReportFormat.CSV:
        return _csv_report(stats)
    return _text_report(stats)
