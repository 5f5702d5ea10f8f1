# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

"""
Seeded generators shared by the property tests.

`random_program` writes small programs out of a grammar of statements, string
literals and comments, recording every comment span as it is written. Those
recorded spans are the reference the lexer is checked against: they come from
how the text was put together, not from reading it back.
"""

import json
import random
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Tuple

from commentaug.backend.mock import ScriptBuilder, ScriptedBackend
from commentaug.core.lexer import CommentSpan
from commentaug.core.matchers import (
    Any as AnyLine,
    OneOf,
    RegexMatches,
    StrStartingWith,
)
from commentaug.core.syntax import Language, SpanKind
from commentaug.corpus.io import CodeDocument
from commentaug.decoder.session import DecoderConfig

WORDS = (
    "alpha",
    "beta",
    "gamma",
    "delta",
    "value",
    "count",
    "index",
    "total",
    "buffer",
    "result",
    "offset",
    "retry",
)
NON_ASCII = ("données", "naïve", "函数", "путь", "größe", "ñandú")

ALL_LANGUAGES = tuple(Language)

_HASH_ONLY = frozenset({Language.PYTHON, Language.RUBY})
_C_LIKE = frozenset(ALL_LANGUAGES) - _HASH_ONLY
_SEMICOLON = frozenset(
    {
        Language.C_SHARP,
        Language.CPP,
        Language.JAVA,
        Language.JAVASCRIPT,
        Language.PHP,
        Language.RUST,
        Language.TYPESCRIPT,
    }
)
_CHAR_LITERALS = frozenset(
    {Language.C_SHARP, Language.CPP, Language.GO, Language.JAVA, Language.RUST}
)
_SINGLE_QUOTED = frozenset(
    {
        Language.JAVASCRIPT,
        Language.PHP,
        Language.PYTHON,
        Language.RUBY,
        Language.TYPESCRIPT,
    }
)
_DOC_LINE = {
    Language.C_SHARP: ("///",),
    Language.CPP: ("///", "//!"),
    Language.RUST: ("///", "//!"),
}
_DOC_BLOCK = {
    Language.C_SHARP: ("/**",),
    Language.CPP: ("/**", "/*!"),
    Language.JAVA: ("/**",),
    Language.JAVASCRIPT: ("/**",),
    Language.PHP: ("/**",),
    Language.RUST: ("/**", "/*!"),
    Language.TYPESCRIPT: ("/**",),
}
_CHARS = ("'a'", "'z'", r"'\n'", r"'\''", r"'\\'", "'\"'", "'/'", "'#'", "'*'")
_RUST_CHARS = (r"'\u{1F600}'", r"'\x41'")


class Program(NamedTuple):
    language: Language
    text: str
    spans: List[CommentSpan]


class _Writer:
    def __init__(self) -> None:
        self.parts: List[str] = []
        self.length = 0
        self.spans: List[CommentSpan] = []

    def code(self, text: str) -> None:
        self.parts.append(text)
        self.length += len(text)

    def comment(self, text: str, kind: SpanKind) -> None:
        self.spans.append(CommentSpan(self.length, self.length + len(text), kind))
        self.code(text)

    @property
    def text(self) -> str:
        return "".join(self.parts)


##
## Pieces
##


def words(rng: random.Random, low: int = 1, high: int = 5) -> str:
    pool = WORDS + NON_ASCII
    return " ".join(rng.choice(pool) for _ in range(rng.randint(low, high)))


def _with_tricky(rng: random.Random, tricky: Tuple[str, ...]) -> str:
    pieces = [rng.choice(WORDS + NON_ASCII) for _ in range(rng.randint(1, 4))]
    for _ in range(rng.randint(0, 2)):
        pieces.insert(rng.randint(0, len(pieces)), rng.choice(tricky))
    return " ".join(pieces)


def _identifier(rng: random.Random, language: Language) -> str:
    name = rng.choice(WORDS)
    if rng.random() < 0.3:
        name += f"_{rng.randint(0, 9)}"
    return "$" + name if language is Language.PHP else name


def _string(rng: random.Random, language: Language) -> str:
    quote = '"'
    if language in _SINGLE_QUOTED and rng.random() < 0.4:
        quote = "'"
    other = "'" if quote == '"' else '"'
    tricky: Tuple[str, ...] = ("//", "/*", "*/", "#", other, "\\" + quote, "\\\\")
    if language is not Language.RUBY:
        tricky += ("`",)
    if rng.random() < 0.1:
        return quote + quote
    return f"{quote} {_with_tricky(rng, tricky)} {quote}"


def _char(rng: random.Random, language: Language) -> str:
    pool = _CHARS + (_RUST_CHARS if language is Language.RUST else ())
    return rng.choice(pool)


def _term(rng: random.Random, language: Language) -> str:
    roll = rng.random()
    if roll < 0.35:
        return _identifier(rng, language)
    if roll < 0.5:
        return str(rng.randint(0, 9999))
    if roll < 0.7:
        return _string(rng, language)
    if roll < 0.8 and language in _CHAR_LITERALS:
        return _char(rng, language)
    if roll < 0.85 and language is Language.RUST:
        return rng.choice(("&'a ", "&'static ")) + _identifier(rng, language)
    args = ", ".join(_identifier(rng, language) for _ in range(rng.randint(0, 3)))
    return f"{rng.choice(WORDS)}({args})"


def _expression(rng: random.Random, language: Language) -> str:
    return " + ".join(_term(rng, language) for _ in range(rng.randint(1, 3)))


def _assignment(rng: random.Random, language: Language, value: str) -> str:
    target = _identifier(rng, language)
    if language is Language.RUST:
        return f"let {target} = {value}"
    if language in (Language.JAVASCRIPT, Language.TYPESCRIPT):
        return f"const {target} = {value}"
    if language is Language.GO:
        return f"{target} := {value}"
    return f"{target} = {value}"


def _end(language: Language) -> str:
    return ";" if language in _SEMICOLON else ""


##
## Comments
##


def line_comment(rng: random.Random, language: Language) -> Tuple[str, SpanKind]:
    tricky = ('"', "'", "`", "/*", "*/", '"""', "=begin", "#", "//")
    markers = {Language.PHP: ("//", "#")}.get(
        language, ("#",) if language in _HASH_ONLY else ("//",)
    )
    marker = rng.choice(markers)
    roll = rng.random()
    if roll < 0.15 and language in _DOC_LINE:
        return f"{rng.choice(_DOC_LINE[language])} {words(rng)}", SpanKind.DOC
    if roll < 0.25:
        return f"{marker}{marker[-1] * 2} {words(rng)}", SpanKind.LINE
    if roll < 0.3:
        return marker, SpanKind.LINE
    return f"{marker} {_with_tricky(rng, tricky)}", SpanKind.LINE


def block_comment(
    rng: random.Random, language: Language, indent: str = ""
) -> Tuple[str, SpanKind]:
    """
    A C-style block comment for `language`, possibly spanning lines.
    """
    tricky = ("//", '"', "'", "`", "#")
    body = f" {_with_tricky(rng, tricky)} "
    if rng.random() < 0.3:
        body = f" {_with_tricky(rng, tricky)}\n{indent} {words(rng)} "
    roll = rng.random()
    if roll < 0.05:
        return "/**/", SpanKind.BLOCK
    if roll < 0.1:
        return f"/***{body}***/", SpanKind.BLOCK
    if roll < 0.3:
        opener = rng.choice(("/**", "/*!"))
        doc = opener in _DOC_BLOCK.get(language, ())
        return f"{opener}{body}*/", SpanKind.DOC if doc else SpanKind.BLOCK
    if roll < 0.4:
        if language is Language.RUST:
            return f"/*{body}/* {words(rng)} */{body}*/", SpanKind.BLOCK
        return f"/*{body}/* {words(rng)} */", SpanKind.BLOCK
    return f"/*{body}*/", SpanKind.BLOCK


def docstring(rng: random.Random, indent: str = "") -> str:
    quote = rng.choice(('"""', "'''"))
    tricky = ("#", "//", "/*")
    if rng.random() < 0.4:
        body = _with_tricky(rng, tricky)
        return f"{quote} {body}\n{indent}{words(rng)}\n{indent}{quote}"
    return f"{quote} {_with_tricky(rng, tricky)} {quote}"


def ruby_block(rng: random.Random) -> str:
    content = (
        "# hash",
        '"unbalanced',
        "'also unbalanced",
        "=endless words",
        "  =end indented",
        "=ending",
        "=begin again",
    )
    lines = ["=begin" + (f" {words(rng)}" if rng.random() < 0.3 else "")]
    for _ in range(rng.randint(0, 3)):
        lines.append(rng.choice(content) if rng.random() < 0.4 else words(rng))
    lines.append("=end" + (f" {words(rng)}" if rng.random() < 0.3 else ""))
    return "\n".join(lines)


##
## Literals spanning lines
##


def _literal_lines(rng: random.Random, extra: Tuple[str, ...] = ()) -> str:
    tricky = (
        "// not a comment",
        "/* not a block",
        "*/",
        "# not a comment",
        "=begin",
        "=end",
    ) + extra
    lines = [
        rng.choice(tricky) if rng.random() < 0.5 else words(rng)
        for _ in range(rng.randint(1, 3))
    ]
    return " " + "\n".join(lines) + " "


_QUOTED = '"quoted"'
_SINGLE_QUOTED_WORD = "'quoted'"
_ESCAPED_BACKTICK = "\\`"
_ESCAPED_QUOTES = '\\"escaped\\"'
_DOUBLED_QUOTES = '""doubled""'
_WINDOWS_PATH = "C:\\dir\\file"


def multiline_literal(rng: random.Random, language: Language) -> Optional[str]:
    if language is Language.CPP:
        return None
    if language is Language.GO:
        return "`" + _literal_lines(rng, (_QUOTED,)) + "`"
    if language in (Language.JAVASCRIPT, Language.TYPESCRIPT):
        return "`" + _literal_lines(rng, (_ESCAPED_BACKTICK, _QUOTED)) + "`"
    if language is Language.PYTHON:
        quote = rng.choice(('"""', "'''"))
        return quote + _literal_lines(rng) + quote
    if language is Language.JAVA:
        return '"""\n' + _literal_lines(rng) + '"""'
    if language is Language.C_SHARP:
        return '@"' + _literal_lines(rng, (_DOUBLED_QUOTES, _WINDOWS_PATH)) + '"'
    if language is Language.RUST:
        roll = rng.random()
        if roll < 0.4:
            return 'r"' + _literal_lines(rng) + '"'
        if roll < 0.7:
            return 'r#"' + _literal_lines(rng, (_QUOTED,)) + '"#'
        return '"' + _literal_lines(rng, (_ESCAPED_QUOTES,)) + '"'
    if rng.random() < 0.5:
        return '"' + _literal_lines(rng, (_SINGLE_QUOTED_WORD,)) + '"'
    return "'" + _literal_lines(rng, (_QUOTED,)) + "'"


##
## Programs
##


def _trailing_comment(rng: random.Random, language: Language, w: _Writer) -> None:
    text, kind = line_comment(rng, language)
    w.code(rng.choice(("", " ", "  ")))
    w.comment(text, kind)


def _code_line(rng: random.Random, language: Language, w: _Writer, indent: str) -> None:
    if language is Language.PYTHON and rng.random() < 0.1:
        w.code(f"{indent}{_string(rng, language)}.join({_identifier(rng, language)})")
    else:
        value = _expression(rng, language)
        w.code(indent + _assignment(rng, language, value) + _end(language))
    if rng.random() < 0.3:
        _trailing_comment(rng, language, w)


def _block_statement(
    rng: random.Random, language: Language, w: _Writer, indent: str
) -> None:
    if language is Language.RUBY:
        w.comment(ruby_block(rng), SpanKind.BLOCK)
        return
    w.code(indent)
    if language is Language.PYTHON:
        w.comment(docstring(rng, indent), SpanKind.DOC)
        if rng.random() < 0.1:
            _trailing_comment(rng, language, w)
        return
    text, kind = block_comment(rng, language, indent)
    w.comment(text, kind)
    if rng.random() < 0.3:
        w.code(" " + _assignment(rng, language, _term(rng, language)) + _end(language))


def _mixed_line(
    rng: random.Random, language: Language, w: _Writer, indent: str
) -> None:
    w.code(indent + _assignment(rng, language, _term(rng, language)) + " ")
    text, kind = block_comment(rng, language, indent)
    w.comment(text, kind)
    w.code(" + " + _term(rng, language) + _end(language))
    if rng.random() < 0.2:
        _trailing_comment(rng, language, w)


def _literal_statement(
    rng: random.Random, language: Language, w: _Writer, indent: str
) -> None:
    literal = multiline_literal(rng, language)
    if literal is None:
        _code_line(rng, language, w, indent)
        return
    w.code(indent + _assignment(rng, language, literal) + _end(language))
    if rng.random() < 0.3:
        _trailing_comment(rng, language, w)


def _statement(rng: random.Random, language: Language, w: _Writer) -> None:
    indent = rng.choice(("", "", "    ", "\t"))
    roll = rng.random()
    if roll < 0.35:
        _code_line(rng, language, w, indent)
    elif roll < 0.5:
        w.code(indent)
        text, kind = line_comment(rng, language)
        w.comment(text, kind)
    elif roll < 0.58:
        pass
    elif roll < 0.72:
        _block_statement(rng, language, w, indent)
    elif roll < 0.86:
        _literal_statement(rng, language, w, indent)
    elif language in _C_LIKE:
        _mixed_line(rng, language, w, indent)
    else:
        _code_line(rng, language, w, indent)


def _unterminated(rng: random.Random, language: Language, w: _Writer) -> None:
    if language is Language.RUBY:
        w.comment(f"=begin\n{words(rng)}", SpanKind.BLOCK)
    elif language is Language.PYTHON:
        w.comment(f'""" {words(rng)}\n{words(rng)}', SpanKind.DOC)
    else:
        w.comment(f"/* {words(rng)}\n{words(rng)}", SpanKind.BLOCK)


def random_program(
    rng: random.Random, language: Language, low: int = 1, high: int = 8
) -> Program:
    w = _Writer()
    count = rng.randint(low, high)
    for index in range(count):
        if index:
            w.code("\n")
        _statement(rng, language, w)
    if rng.random() < 0.05:
        w.code("\n")
        _unterminated(rng, language, w)
    elif rng.random() < 0.6:
        w.code("\n")
    return Program(language, w.text, w.spans)


def random_document(
    rng: random.Random, language: Language, id: str, low: int = 1, high: int = 8
) -> CodeDocument:
    program = random_program(rng, language, low, high)
    return CodeDocument(id=id, language=language.value, content=program.text)


##
## Scripts
##


def comment_text(rng: random.Random, language: Language) -> Tuple[str, bool]:
    """
    A well-formed comment a scripted backend may insert, and whether it is
    indented like the line it precedes.
    """
    roll = rng.random()
    if language is Language.RUBY and roll < 0.3:
        return ruby_block(rng), False
    if language is Language.PYTHON and roll < 0.3:
        return docstring(rng), True
    if language in _C_LIKE and roll < 0.4:
        return block_comment(rng, language)[0], True
    return line_comment(rng, language)[0], True


def unterminated_comment(language: Language) -> str:
    if language is Language.RUBY:
        return "=begin never closed"
    if language is Language.PYTHON:
        return '"""never closed'
    return "/* never closed"


def _matcher(rng: random.Random, lines: List[str]) -> Any:
    roll = rng.random()
    if roll < 0.4:
        return AnyLine()
    if roll < 0.6:
        return RegexMatches(rng.choice(WORDS))
    if roll < 0.8:
        return StrStartingWith(rng.choice(WORDS))
    candidates = [line for line in lines if line.strip()]
    if not candidates:
        return AnyLine()
    return OneOf(rng.sample(candidates, min(len(candidates), 2)))


def random_script(
    rng: random.Random, language: Language, lines: List[str]
) -> ScriptedBackend:
    """
    A scripted backend mixing well-formed comments with code-like text,
    partial markers and comments that never close.
    """
    builder = ScriptBuilder()
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.15:
            rule = builder.on_first_call()
        else:
            rule = builder.before(_matcher(rng, lines), blank=rng.random() < 0.1)
        roll = rng.random()
        if roll < 0.1:
            rule.code(rng.choice(("x = 0", "/ almost", "=beginning", "return 1")))
        elif roll < 0.15:
            rule.nothing()
        elif roll < 0.22:
            rule.comment(
                unterminated_comment(language), indent=language is not Language.RUBY
            )
        else:
            text, indent = comment_text(rng, language)
            rule.comment(text, indent=indent)
    return builder.build()


DECODER_CONFIGS = (
    DecoderConfig(),
    DecoderConfig(probe_len=1, probe_step=1),
    DecoderConfig(probe_len=4, probe_step=2),
    DecoderConfig(probe_len=16, probe_step=16),
)


##
## Files
##


def write_jsonl(path: str, objects: Iterable[Dict[str, Any]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as stream:
        for obj in objects:
            stream.write(json.dumps(obj, ensure_ascii=False))
            stream.write("\n")


def read_jsonl(path: str) -> List[Dict[str, Any]]:
    with open(path, encoding="utf-8") as stream:
        return [json.loads(line) for line in stream if line.strip()]


def write_corpus_file(path: str, documents: Iterable[CodeDocument]) -> None:
    write_jsonl(path, (document.to_json() for document in documents))
