# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

import os
import re
import sys
import time
from typing import Any, Dict, IO, List, Optional

import psutil
import pygments
import pygments.formatters
import pygments.lexers
from pygments.token import (
    Comment,
    Error,
    Keyword,
    Name,
    Number,
    Operator,
    String,
    Token,
    Whitespace,
)

from commentaug.core.syntax import syntax_for

from .lib import AugmentedRecord, BACKEND_FAILED, OUTCOMES, RunSummary

##
## Base
##
CA_COLORSCHEME = {
    Token: ("", ""),
    Whitespace: ("gray", "brightblack"),
    Comment: ("green", "brightgreen"),
    Comment.Preproc: ("cyan", "brightcyan"),
    Keyword: ("brightblue", "brightblue"),
    Keyword.Type: ("cyan", "brightcyan"),
    Operator.Word: ("magenta", "brightmagenta"),
    Name.Builtin: ("cyan", "brightcyan"),
    Name.Function: ("yellow", "yellow"),
    Name.Class: ("_yellow_", "_yellow_"),
    Name.Decorator: ("brightblack", "gray"),
    String: ("red", "brightred"),
    String.Doc: ("green", "brightgreen"),
    Number: ("brightblue", "brightblue"),
    Error: ("_brightred_", "_brightred_"),
}

PROGRESS_MARKS = {
    "pass": ".",
    "implicit-eot": "E",
    "markdown-reject": "M",
    "length-reject": "L",
    "too-long": "T",
    BACKEND_FAILED: "F",
}


def colors_enabled(stream: IO[str], force_color: bool = False) -> bool:
    if "NO_COLOR" in os.environ:
        return False
    return force_color or stream.isatty()


def highlight(text: str, language: Any, colored: bool) -> str:
    if not colored:
        return text
    alias = syntax_for(language).pygments_alias
    options = {"startinline": True} if alias == "php" else {}
    return pygments.highlight(
        text,
        pygments.lexers.get_lexer_by_name(alias, **options),
        pygments.formatters.TerminalFormatter(colorscheme=CA_COLORSCHEME),
    )


class BaseFormatter:
    """
    Formatter base class. Receives every augmented record as it is written,
    then the run summary.
    """

    def __init__(
        self, stream: Optional[IO[str]] = None, force_color: bool = False
    ) -> None:
        self.stream = stream or sys.stdout
        self.force_color = force_color
        self.counts: Dict[str, int] = {outcome: 0 for outcome in OUTCOMES}
        self.start_time = psutil.Process(os.getpid()).create_time()
        self.end_time: Optional[float] = None
        self.duration_secs: Optional[float] = None

    def new_record(self, record: AugmentedRecord) -> None:
        """
        Called after each record is written.
        """
        self.counts[record.outcome] += 1

    def finish(self, summary: RunSummary) -> None:
        """
        Called once all records are written.
        """
        self.end_time = time.time()
        self.duration_secs = summary.duration_secs


##
## Mixins
##


class ColorFormatterMixin(BaseFormatter):
    @property
    def colored(self) -> bool:
        return colors_enabled(self.stream, self.force_color)

    def remove_terminal_escape(self, text: str) -> str:
        return re.sub("\033\\[[0-9;]+m", "", text)

    def _format_attrs(self, attrs: str, *values: Any) -> str:
        text = "".join([str(value) for value in values])
        if self.colored:
            return "\033[0m\033[{attrs}m{text}\033[0m".format(attrs=attrs, text=text)
        else:
            return text

    def _print_attrs(self, attrs: str, *values: Any, **kwargs: Any) -> None:
        print(self._format_attrs(attrs, *values), file=self.stream, **kwargs)

    def format_bright(self, *values: Any) -> str:
        return self._format_attrs("1", *values)

    def print_bright(self, *values: Any, **kwargs: Any) -> None:
        self._print_attrs("1", *values, **kwargs)

    def format_dim(self, *values: Any) -> str:
        return self._format_attrs("2", *values)

    def format_green(self, *values: Any) -> str:
        return self._format_attrs("32", *values)

    def print_green(self, *values: Any, **kwargs: Any) -> None:
        self._print_attrs("32", *values, **kwargs)

    def format_red(self, *values: Any) -> str:
        return self._format_attrs("31", *values)

    def print_red(self, *values: Any, **kwargs: Any) -> None:
        self._print_attrs("31", *values, **kwargs)

    def format_yellow(self, *values: Any) -> str:
        return self._format_attrs("33", *values)

    def print_yellow(self, *values: Any, **kwargs: Any) -> None:
        self._print_attrs("33", *values, **kwargs)

    def format_cyan(self, *values: Any) -> str:
        return self._format_attrs("36", *values)

    def print_outcome(self, outcome: str, *values: Any, **kwargs: Any) -> None:
        if outcome == "pass":
            self.print_green(*values, **kwargs)
        elif outcome == BACKEND_FAILED:
            self.print_red(*values, **kwargs)
        else:
            self.print_yellow(*values, **kwargs)


class SummaryMixin(ColorFormatterMixin):
    def _get_summary_lines(self, summary: RunSummary) -> List[str]:
        documents = "documents" if summary.record_count != 1 else "document"
        lines = [
            self.format_bright(
                "Augmented %s %s in %.1fs:"
                % (summary.record_count, documents, summary.duration_secs)
            )
        ]
        for outcome in OUTCOMES:
            count = summary.outcomes[outcome]
            label = f"  {outcome}: "
            if not count:
                lines.append(self.format_dim(label, count))
            elif outcome == "pass":
                lines.append(self.format_green(label, count))
            elif outcome == BACKEND_FAILED:
                lines.append(self.format_red(label, count))
            else:
                lines.append(self.format_yellow(label, count))
        if summary.schema_errors:
            lines.append(self.format_red("  schema errors: ", summary.schema_errors))
        if summary.resumed:
            lines.append(self.format_cyan("  resumed: ", summary.resumed))
        lines.append(
            "  density: {:.4f} -> {:.4f}".format(
                summary.density_before, summary.density_after
            )
        )
        source = summary.token_source.value if summary.token_source else "none"
        lines.append(
            "  tokens: {} generated, {} copied ({})".format(
                summary.lm_tokens, summary.copied_tokens, source
            )
        )
        if summary.rss:
            lines.append(
                self.format_dim("  rss: {:.1f} MiB".format(summary.rss / 2**20))
            )
        if not summary.conserved:
            lines.append(
                self.format_red(
                    "  {} records for {} documents".format(
                        summary.record_count, summary.input_count
                    )
                )
            )
        return lines

    def finish(self, summary: RunSummary) -> None:
        super().finish(summary)
        for line in self._get_summary_lines(summary):
            print(line, file=self.stream)


##
## Formatters
##


class QuietFormatter(BaseFormatter):
    pass


class ProgressFormatter(SummaryMixin):
    """
    One character per record: "." when it passes, a letter naming the
    rejection otherwise.
    """

    def new_record(self, record: AugmentedRecord) -> None:
        super().new_record(record)
        self.print_outcome(
            record.outcome, PROGRESS_MARKS[record.outcome], end="", flush=True
        )

    def finish(self, summary: RunSummary) -> None:
        print("", file=self.stream)
        super().finish(summary)


class DocumentFormatter(SummaryMixin):
    def new_record(self, record: AugmentedRecord) -> None:
        super().new_record(record)
        verdict = str(record.verdict) if record.verdict else BACKEND_FAILED
        detail = (
            record.error
            if record.error
            else "{:.4f} -> {:.4f}".format(record.density_before, record.density_after)
        )
        self.print_outcome(
            record.outcome,
            "  {} [{}]: {}: {}".format(
                record.document.id, record.document.language, verdict, detail
            ),
        )
