# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Pattern, Tuple

##
## Exceptions
##


class UnsupportedLanguage(ValueError):
    """
    Raised when a language outside of the supported table is requested.
    """

    def __init__(self, language: Any) -> None:
        super().__init__(f"Unsupported language: {language!r}")
        self.language = language


##
## Languages
##


class Language(str, Enum):
    C_SHARP = "c-sharp"
    CPP = "cpp"
    GO = "go"
    JAVA = "java"
    JAVASCRIPT = "javascript"
    PHP = "php"
    PYTHON = "python"
    RUBY = "ruby"
    RUST = "rust"
    TYPESCRIPT = "typescript"

    @classmethod
    def parse(cls, value: Any) -> "Language":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            try:
                return cls(value.strip().lower())
            except ValueError:
                pass
        raise UnsupportedLanguage(value)

    @property
    def fence_tag(self) -> str:
        return self.value

    def __str__(self) -> str:
        return self.value


class SpanKind(str, Enum):
    LINE = "line"
    BLOCK = "block"
    DOC = "doc"


##
## Delimiters
##


@dataclass(frozen=True)
class BlockMarker:
    """
    A block comment delimiter pair.

    `statement_only` markers open a comment only when nothing but whitespace
    and earlier comments precede them on their line (Python docstrings).
    `column_zero` markers open and close only at the first column and must be
    followed by whitespace or the end of text; the comment then runs to the end
    of the closing line (Ruby `=begin`/`=end`).
    """

    open: str
    close: str
    escape: Optional[str] = None
    statement_only: bool = False
    column_zero: bool = False


@dataclass(frozen=True)
class StringDelim:
    """
    A string or character literal delimiter.

    When `pattern` is set, the literal exists only where the whole pattern
    matches; otherwise the opening character is plain code.
    """

    open: str
    close: str
    escape: Optional[str] = "\\"
    multiline: bool = False
    doubled_close_escape: bool = False
    pattern: Optional[Pattern[str]] = None


@dataclass(frozen=True)
class CommentSyntax:
    language: Language
    line_markers: Tuple[str, ...]
    block_markers: Tuple[BlockMarker, ...]
    string_delims: Tuple[StringDelim, ...]
    nests_blocks: bool = False
    doc_prefixes: Tuple[str, ...] = ()
    pygments_alias: str = "text"

    @property
    def comment_openers(self) -> Tuple[str, ...]:
        return self.line_markers + tuple(m.open for m in self.block_markers)

    def block_marker(self, open_text: str) -> Optional[BlockMarker]:
        for marker in self.block_markers:
            if marker.open == open_text:
                return marker
        return None


##
## Tables
##

_C_BLOCK = BlockMarker("/*", "*/")
_DOUBLE = StringDelim('"', '"')
_SINGLE = StringDelim("'", "'")
_C_DOC = ("/**", "/*!")

_SYNTAX: Dict[Language, CommentSyntax] = {
    Language.C_SHARP: CommentSyntax(
        language=Language.C_SHARP,
        line_markers=("//",),
        block_markers=(_C_BLOCK,),
        string_delims=(
            StringDelim(
                '@"', '"', escape=None, multiline=True, doubled_close_escape=True
            ),
            _DOUBLE,
            _SINGLE,
        ),
        doc_prefixes=("///", "/**"),
        pygments_alias="csharp",
    ),
    Language.CPP: CommentSyntax(
        language=Language.CPP,
        line_markers=("//",),
        block_markers=(_C_BLOCK,),
        string_delims=(
            _DOUBLE,
            # Digit separators (1'000) are not literals.
            StringDelim("'", "'", pattern=re.compile(r"'(?:\\.|[^\\'\n])+'")),
        ),
        doc_prefixes=("///", "//!") + _C_DOC,
        pygments_alias="cpp",
    ),
    Language.GO: CommentSyntax(
        language=Language.GO,
        line_markers=("//",),
        block_markers=(_C_BLOCK,),
        string_delims=(
            StringDelim("`", "`", escape=None, multiline=True),
            _DOUBLE,
            _SINGLE,
        ),
        pygments_alias="go",
    ),
    Language.JAVA: CommentSyntax(
        language=Language.JAVA,
        line_markers=("//",),
        block_markers=(_C_BLOCK,),
        string_delims=(
            StringDelim('"""', '"""', multiline=True),
            _DOUBLE,
            _SINGLE,
        ),
        doc_prefixes=("/**",),
        pygments_alias="java",
    ),
    Language.JAVASCRIPT: CommentSyntax(
        language=Language.JAVASCRIPT,
        line_markers=("//",),
        block_markers=(_C_BLOCK,),
        string_delims=(StringDelim("`", "`", multiline=True), _DOUBLE, _SINGLE),
        doc_prefixes=("/**",),
        pygments_alias="javascript",
    ),
    Language.PHP: CommentSyntax(
        language=Language.PHP,
        line_markers=("//", "#"),
        block_markers=(_C_BLOCK,),
        string_delims=(
            StringDelim('"', '"', multiline=True),
            StringDelim("'", "'", multiline=True),
            StringDelim("`", "`", multiline=True),
        ),
        doc_prefixes=("/**",),
        pygments_alias="php",
    ),
    Language.PYTHON: CommentSyntax(
        language=Language.PYTHON,
        line_markers=("#",),
        block_markers=(
            BlockMarker("'''", "'''", escape="\\", statement_only=True),
            BlockMarker('"""', '"""', escape="\\", statement_only=True),
        ),
        string_delims=(
            StringDelim("'''", "'''", multiline=True),
            StringDelim('"""', '"""', multiline=True),
            _DOUBLE,
            _SINGLE,
        ),
        doc_prefixes=("'''", '"""'),
        pygments_alias="python",
    ),
    Language.RUBY: CommentSyntax(
        language=Language.RUBY,
        line_markers=("#",),
        block_markers=(BlockMarker("=begin", "=end", column_zero=True),),
        string_delims=(
            StringDelim('"', '"', multiline=True),
            StringDelim("'", "'", multiline=True),
            StringDelim("`", "`", multiline=True),
        ),
        pygments_alias="ruby",
    ),
    Language.RUST: CommentSyntax(
        language=Language.RUST,
        line_markers=("//",),
        block_markers=(_C_BLOCK,),
        string_delims=(
            StringDelim('r#"', '"#', escape=None, multiline=True),
            StringDelim('r"', '"', escape=None, multiline=True),
            StringDelim('"', '"', multiline=True),
            # Lifetimes ('a) are not literals.
            StringDelim(
                "'",
                "'",
                pattern=re.compile(
                    r"'(?:\\u\{[0-9a-fA-F_]{1,6}\}|\\x[0-9a-fA-F]{2}|\\.|[^\\'\n])'"
                ),
            ),
        ),
        nests_blocks=True,
        doc_prefixes=("///", "//!") + _C_DOC,
        pygments_alias="rust",
    ),
    Language.TYPESCRIPT: CommentSyntax(
        language=Language.TYPESCRIPT,
        line_markers=("//",),
        block_markers=(_C_BLOCK,),
        string_delims=(StringDelim("`", "`", multiline=True), _DOUBLE, _SINGLE),
        doc_prefixes=("/**",),
        pygments_alias="typescript",
    ),
}


def syntax_for(language: Any) -> CommentSyntax:
    """
    Return the static comment syntax entry for `language`, which may be a
    Language member or its lower-case name (eg: "c-sharp").
    """
    return _SYNTAX[Language.parse(language)]


def supported_languages() -> Tuple[Language, ...]:
    return tuple(_SYNTAX)
