# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

import json
import logging
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import (
    Any,
    Dict,
    IO,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Set,
    Tuple,
    Union,
)

from commentaug.core.lib import TypeCheckError, validate_fields

logger = logging.getLogger(__name__)

CRLF = "crlf"
LINE_ENDING_KEY = "line_ending"
STDIO_PATH = "-"

##
## Exceptions
##


class CorpusIOError(OSError):
    """
    Raised when a corpus or records file can not be opened, read or written.
    """

    def __init__(self, path: str, error: BaseException) -> None:
        super().__init__(f"{path}: {error}")
        self.path = path
        self.error = error


class SchemaError(ValueError):
    """
    A record that failed schema validation. Readers yield these in-stream so
    the remaining records are still processed.
    """

    def __init__(self, line_number: int, reason: str) -> None:
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SchemaError)
            and self.line_number == other.line_number
            and self.reason == other.reason
        )

    def __hash__(self) -> int:
        return hash((self.line_number, self.reason))


##
## Documents
##


@dataclass(frozen=True)
class CodeDocument:
    """
    A corpus document. Content whose lines all end in CRLF is stored with
    `\\n` line endings and `line_ending: crlf` in `meta`; `raw_content` gives
    the original text back.
    """

    id: str
    language: str
    content: str
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.meta.get(LINE_ENDING_KEY) == CRLF:
            return
        newlines = self.content.count("\n")
        if newlines and self.content.count("\r\n") == newlines:
            object.__setattr__(self, "content", self.content.replace("\r\n", "\n"))
            object.__setattr__(self, "meta", {**self.meta, LINE_ENDING_KEY: CRLF})

    @classmethod
    def from_raw(
        cls,
        id: str,
        language: str,
        content: str,
        meta: Optional[Mapping[str, Any]] = None,
    ) -> "CodeDocument":
        """
        Build a document from file text and the `meta` stored next to it,
        undoing `raw_content`.
        """
        meta = dict(meta or {})
        if meta.get(LINE_ENDING_KEY) == CRLF:
            content = content.replace("\r\n", "\n")
        return cls(id=id, language=language, content=content, meta=meta)

    @property
    def raw_content(self) -> str:
        if self.meta.get(LINE_ENDING_KEY) == CRLF:
            return self.content.replace("\n", "\r\n")
        return self.content

    @property
    def lines(self) -> List[str]:
        """
        Lines without their terminators. A trailing newline does not open an
        extra line, but empty content is one blank line.
        """
        lines = self.content.split("\n")
        if len(lines) > 1 and self.content.endswith("\n"):
            lines.pop()
        return lines

    def replace_content(self, content: str) -> "CodeDocument":
        return CodeDocument(
            id=self.id, language=self.language, content=content, meta=self.meta
        )

    def to_json(self) -> Dict[str, Any]:
        obj: Dict[str, Any] = {
            "id": self.id,
            "language": self.language,
            "content": self.raw_content,
        }
        if self.meta:
            obj["meta"] = self.meta
        return obj


REQUIRED_FIELDS = {"id": str, "language": str, "content": str}
OPTIONAL_FIELDS = {"meta": Dict[str, Any]}

##
## Streams
##


@contextmanager
def open_output(path: str, append: bool = False) -> Iterator[IO[str]]:
    if path == STDIO_PATH:
        yield sys.stdout
        return
    try:
        stream = open(path, "a" if append else "w", encoding="utf-8", newline="\n")
    except OSError as error:
        raise CorpusIOError(path, error)
    with stream:
        yield stream


def iter_json_lines(
    path: str,
) -> Iterator[Union[Tuple[int, Dict[str, Any]], SchemaError]]:
    """
    Yield one JSON object per non-blank line of `path`, or a SchemaError for
    lines that are not UTF-8 JSON objects.
    """
    try:
        stream = sys.stdin.buffer if path == STDIO_PATH else open(path, "rb")
    except OSError as error:
        raise CorpusIOError(path, error)
    try:
        for line_number, raw in enumerate(stream, 1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as error:
                yield SchemaError(line_number, f"invalid UTF-8: {error.reason}")
                continue
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as error:
                yield SchemaError(line_number, f"invalid JSON: {error.msg}")
                continue
            if not isinstance(obj, dict):
                yield SchemaError(line_number, "record is not a JSON object")
                continue
            yield line_number, obj
    except OSError as error:
        raise CorpusIOError(path, error)
    finally:
        if stream is not sys.stdin.buffer:
            stream.close()


def read_corpus(path: str) -> Iterator[Union[CodeDocument, SchemaError]]:
    seen: Set[str] = set()
    for item in iter_json_lines(path):
        if isinstance(item, SchemaError):
            yield item
            continue
        line_number, obj = item
        try:
            validate_fields(obj, REQUIRED_FIELDS, OPTIONAL_FIELDS)
        except TypeCheckError as error:
            yield SchemaError(line_number, str(error))
            continue
        if not obj["id"]:
            yield SchemaError(line_number, "id: must not be empty")
            continue
        if obj["id"] in seen:
            yield SchemaError(line_number, f"id: duplicate {obj['id']!r}")
            continue
        seen.add(obj["id"])
        yield CodeDocument.from_raw(
            obj["id"], obj["language"], obj["content"], obj.get("meta")
        )


def read_documents(path: str) -> Iterator[CodeDocument]:
    """
    Like read_corpus, but schema errors are logged and skipped.
    """
    for item in read_corpus(path):
        if isinstance(item, SchemaError):
            logger.warning("%s: skipping record: %s", path, item)
            continue
        yield item


def write_corpus(documents: Iterable[CodeDocument], path: str) -> int:
    written = 0
    with open_output(path) as stream:
        try:
            for document in documents:
                stream.write(json.dumps(document.to_json(), ensure_ascii=False))
                stream.write("\n")
                written += 1
        except OSError as error:
            raise CorpusIOError(path, error)
    return written
