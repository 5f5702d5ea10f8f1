# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

"""
Comment/code partition of source text.

Every function here is pure; the per-syntax opener tables are cached so
concurrent workers share them read-only.
"""

import functools
import re
from dataclasses import dataclass
from enum import Enum
from typing import (
    FrozenSet,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Pattern,
    Tuple,
    Union,
)

from .syntax import BlockMarker, CommentSyntax, SpanKind, StringDelim


@dataclass(frozen=True)
class CommentSpan:
    start: int
    end: int
    kind: SpanKind

    def __len__(self) -> int:
        return self.end - self.start


class LineClass(str, Enum):
    CODE = "code"
    COMMENT_ONLY = "comment-only"
    MIXED = "mixed"
    BLANK = "blank"


class PrefixClass(str, Enum):
    COMMENT = "comment"
    CODE = "code"
    NEED_MORE = "need-more"


##
## Tables
##

Marker = Union[str, BlockMarker]


class _Opener(NamedTuple):
    text: str
    rank: int
    delimiter: Union[str, BlockMarker, StringDelim]


class _Region(NamedTuple):
    start: int
    end: int
    is_comment: bool
    kind: Optional[SpanKind]


@functools.lru_cache(maxsize=None)
def _openers(syntax: CommentSyntax) -> Tuple[Tuple[_Opener, ...], Pattern[str]]:
    openers: List[_Opener] = [_Opener(m, 0, m) for m in syntax.line_markers]
    openers.extend(_Opener(b.open, 0, b) for b in syntax.block_markers)
    openers.extend(_Opener(s.open, 1, s) for s in syntax.string_delims)
    # Longest match first; on equal length comments win over literals.
    openers.sort(key=lambda o: (-len(o.text), o.rank))
    first_chars = sorted({o.text[0] for o in openers})
    trigger = re.compile("[" + "".join(re.escape(c) for c in first_chars) + "]")
    return tuple(openers), trigger


@functools.lru_cache(maxsize=None)
def _joining_pairs(syntax: CommentSyntax) -> FrozenSet[str]:
    openers, _ = _openers(syntax)
    return frozenset(o.text[:2] for o in openers if len(o.text) >= 2)


##
## Extents
##


def block_extent(
    text: str, start: int, marker: BlockMarker, nests: bool = False
) -> Tuple[int, bool]:
    """
    Return (end, terminated) for the block comment opened by `marker` at
    `start`. An unterminated block runs to the end of text.
    """
    n = len(text)
    if marker.column_zero:
        k = start + len(marker.open)
        needle = "\n" + marker.close
        while True:
            k = text.find(needle, k)
            if k < 0:
                return n, False
            after = k + len(needle)
            if after >= n or text[after].isspace():
                eol = text.find("\n", after)
                return (n if eol < 0 else eol), True
            k += 1
    j = start + len(marker.open)
    depth = 1
    while j < n:
        if marker.escape is not None and text.startswith(marker.escape, j):
            j += len(marker.escape) + 1
            continue
        if text.startswith(marker.close, j):
            depth -= 1
            j += len(marker.close)
            if depth == 0:
                return j, True
            continue
        if nests and text.startswith(marker.open, j):
            depth += 1
            j += len(marker.open)
            continue
        j += 1
    return n, False


def _string_end(text: str, start: int, delim: StringDelim) -> int:
    n = len(text)
    j = start + len(delim.open)
    while j < n:
        c = text[j]
        if delim.escape is not None and c == delim.escape:
            j += 2
            continue
        if text.startswith(delim.close, j):
            if delim.doubled_close_escape and text.startswith(
                delim.close, j + len(delim.close)
            ):
                j += 2 * len(delim.close)
                continue
            return j + len(delim.close)
        if c == "\n" and not delim.multiline:
            return j
        j += 1
    return n


def _comment_kind(
    text: str, start: int, end: int, base: SpanKind, syntax: CommentSyntax
) -> SpanKind:
    for prefix in syntax.doc_prefixes:
        if not text.startswith(prefix, start):
            continue
        if base is SpanKind.BLOCK and syntax.block_marker(prefix) is not None:
            return SpanKind.DOC
        following = text[start + len(prefix) : start + len(prefix) + 1]
        if following == prefix[-1] or text[start:end] == "/**/":
            continue
        return SpanKind.DOC
    return base


##
## Scanner
##


def _regions(text: str, syntax: CommentSyntax) -> Iterator[_Region]:
    openers, trigger = _openers(syntax)
    n = len(text)
    i = 0
    last_code = -1
    while i < n:
        match = trigger.search(text, i)
        if match is None:
            return
        j = match.start()
        if j > i:
            code = text[i:j].rstrip()
            if code:
                last_code = i + len(code) - 1
        line_start = text.rfind("\n", 0, j) + 1
        region = _match_at(
            text, j, syntax, openers, last_code < line_start, j == line_start
        )
        if region is None:
            last_code = j
            i = j + 1
            continue
        yield region
        if not region.is_comment:
            last_code = region.end - 1
        i = region.end


def _match_at(
    text: str,
    j: int,
    syntax: CommentSyntax,
    openers: Tuple[_Opener, ...],
    statement_position: bool,
    column_zero: bool,
) -> Optional[_Region]:
    n = len(text)
    for opener in openers:
        if not text.startswith(opener.text, j):
            continue
        delimiter = opener.delimiter
        if isinstance(delimiter, str):
            end = text.find("\n", j)
            end = n if end < 0 else end
            kind = _comment_kind(text, j, end, SpanKind.LINE, syntax)
            return _Region(j, end, True, kind)
        if isinstance(delimiter, BlockMarker):
            if delimiter.statement_only and not statement_position:
                continue
            if delimiter.column_zero:
                after = j + len(delimiter.open)
                if not column_zero or (after < n and not text[after].isspace()):
                    continue
            end, _ = block_extent(text, j, delimiter, syntax.nests_blocks)
            kind = _comment_kind(text, j, end, SpanKind.BLOCK, syntax)
            return _Region(j, end, True, kind)
        if delimiter.pattern is not None:
            literal = delimiter.pattern.match(text, j)
            if literal is None:
                continue
            return _Region(j, literal.end(), False, None)
        return _Region(j, _string_end(text, j, delimiter), False, None)
    return None


def scan(text: str, syntax: CommentSyntax) -> List[CommentSpan]:
    """
    Return the comment spans of `text`, sorted and pairwise disjoint. Offsets
    index the str. Marker characters belong to their span; a line comment
    span stops before its newline.
    """
    return [
        CommentSpan(r.start, r.end, r.kind)  # type: ignore
        for r in _regions(text, syntax)
        if r.is_comment
    ]


def interior_lines(text: str, syntax: CommentSyntax) -> FrozenSet[int]:
    """
    Indexes of the lines whose first character lies inside a multi-line
    comment or literal.
    """
    starts = [ls for ls, _ in _line_bounds(text)]
    interior = set()
    index = 0
    for region in _regions(text, syntax):
        while index < len(starts) and starts[index] <= region.start:
            index += 1
        while index < len(starts) and starts[index] < region.end:
            interior.add(index)
            index += 1
    return frozenset(interior)


##
## Lines
##


def _line_bounds(text: str) -> List[Tuple[int, int]]:
    if not text:
        return [(0, 0)]
    bounds = []
    n = len(text)
    start = 0
    while start < n:
        newline = text.find("\n", start)
        if newline < 0:
            bounds.append((start, n))
            break
        bounds.append((start, newline))
        start = newline + 1
    return bounds


def _mask(length: int, spans: List[CommentSpan]) -> bytearray:
    mask = bytearray(length)
    for span in spans:
        mask[span.start : span.end] = b"\x01" * (span.end - span.start)
    return mask


def classify_lines(text: str, syntax: CommentSyntax) -> List[LineClass]:
    mask = _mask(len(text), scan(text, syntax))
    classes = []
    for start, end in _line_bounds(text):
        has_code = has_comment = False
        for k in range(start, end):
            if text[k].isspace():
                continue
            if mask[k]:
                has_comment = True
            else:
                has_code = True
        if has_code and has_comment:
            classes.append(LineClass.MIXED)
        elif has_code:
            classes.append(LineClass.CODE)
        elif has_comment:
            classes.append(LineClass.COMMENT_ONLY)
        else:
            classes.append(LineClass.BLANK)
    return classes


##
## Density
##


def utf8_weight(text: str) -> int:
    """
    UTF-8 byte length of the non-whitespace characters of `text`.
    """
    return len("".join(text.split()).encode("utf-8", "surrogatepass"))


def comment_counts(text: str, syntax: CommentSyntax) -> Tuple[int, int]:
    """
    Return (comment bytes, total bytes), both counting only non-whitespace
    characters.
    """
    comment = sum(utf8_weight(text[s.start : s.end]) for s in scan(text, syntax))
    return comment, utf8_weight(text)


def comment_density(text: str, syntax: CommentSyntax) -> float:
    comment, total = comment_counts(text, syntax)
    if total == 0:
        return 0.0
    return comment / total


def code_weight(text: str, syntax: CommentSyntax) -> int:
    comment, total = comment_counts(text, syntax)
    return total - comment


##
## Stripping
##


def strip_comments(text: str, syntax: CommentSyntax) -> str:
    """
    Remove every comment span. Lines left whitespace-only by the removal are
    dropped and lines that lost an inline comment are right-trimmed. Blank
    lines of the input are kept.
    """
    spans = scan(text, syntax)
    pairs = _joining_pairs(syntax)
    lines = []
    k = 0
    for start, end in _line_bounds(text):
        while k < len(spans) and spans[k].end <= start:
            k += 1
        parts: List[str] = []
        touched = False
        pos = start
        cursor = k
        while cursor < len(spans) and spans[cursor].start <= end:
            span = spans[cursor]
            touched = True
            if span.start > pos:
                _append_code(parts, text[pos : span.start], pairs)
            pos = max(pos, min(span.end, end))
            if span.end <= end:
                cursor += 1
            else:
                break
        k = cursor
        if pos < end:
            _append_code(parts, text[pos:end], pairs)
        line = "".join(parts)
        if touched:
            line = line.rstrip()
            if not line:
                continue
            if _opens_column_zero_block(line, syntax):
                # Code left at the first column must not spell a block opener.
                line = " " + line
        lines.append(line)
    stripped = "\n".join(lines)
    if lines and text.endswith("\n"):
        stripped += "\n"
    return stripped


def _append_code(parts: List[str], code: str, pairs: FrozenSet[str]) -> None:
    # Two code runs rejoined across a removed span must not spell an opener.
    if parts and parts[-1] and (parts[-1][-1] + code[0]) in pairs:
        parts.append(" ")
    parts.append(code)


def _opens_column_zero_block(line: str, syntax: CommentSyntax) -> bool:
    marker = opening_marker(line, syntax)
    return isinstance(marker, BlockMarker) and marker.column_zero


##
## Prefixes
##


def opening_marker(prefix: str, syntax: CommentSyntax) -> Optional[Marker]:
    """
    Return the longest comment marker that `prefix` starts with once leading
    whitespace is skipped, if any.
    """
    stripped = prefix.lstrip()
    at_column_zero = len(stripped) == len(prefix)
    best: Optional[Marker] = None
    best_len = 0
    for marker in syntax.line_markers:
        if stripped.startswith(marker) and len(marker) > best_len:
            best, best_len = marker, len(marker)
    for block in syntax.block_markers:
        if not stripped.startswith(block.open) or len(block.open) <= best_len:
            continue
        if block.column_zero:
            rest = stripped[len(block.open) :]
            if not at_column_zero or (rest and not rest[0].isspace()):
                continue
        best, best_len = block, len(block.open)
    return best


def classify_prefix(
    prefix: str, syntax: CommentSyntax, in_block: bool, complete: bool = False
) -> PrefixClass:
    """
    Decide from the first few characters of a line whether it opens a
    comment. `complete` marks `prefix` as a whole line, which can no longer
    grow into a marker.
    """
    if in_block:
        return PrefixClass.COMMENT
    stripped = prefix.lstrip()
    if not stripped:
        return PrefixClass.NEED_MORE
    if opening_marker(prefix, syntax) is not None:
        return PrefixClass.COMMENT
    if complete:
        return PrefixClass.CODE
    at_column_zero = len(stripped) == len(prefix)
    for block in syntax.block_markers:
        if block.column_zero and not at_column_zero:
            continue
        if block.open.startswith(stripped):
            return PrefixClass.NEED_MORE
    for marker in syntax.line_markers:
        if marker.startswith(stripped):
            return PrefixClass.NEED_MORE
    return PrefixClass.CODE
