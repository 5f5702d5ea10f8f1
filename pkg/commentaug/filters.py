# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

"""
Implicit and explicit quality filters for generated comments.

Filters return verdicts; only a malformed call (an original without any
code to measure against) raises.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional

from commentaug.core.lexer import code_weight
from commentaug.core.syntax import CommentSyntax, syntax_for
from commentaug.corpus.io import CodeDocument
from commentaug.corpus.tokenizer import DEFAULT_TOKENIZER, Tokenizer
from commentaug.decoder.markdown import build_prompt, MalformedMarkdown, parse_output
from commentaug.decoder.session import GenerationResult, Status

MAX_LENGTH_RATIO = 1.0
DEFAULT_HEADROOM = 0.25


class EmptyOriginal(ValueError):
    """
    Raised when the length filter is asked to compare against an original
    without any non-whitespace code.
    """


class VerdictKind(str, Enum):
    PASS = "pass"
    TOO_LONG = "too-long"
    IMPLICIT_EOT = "implicit-eot"
    MARKDOWN_REJECT = "markdown-reject"
    LENGTH_REJECT = "length-reject"


@dataclass(frozen=True)
class FilterVerdict:
    kind: VerdictKind
    reason: Optional[str] = None
    ratio: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.kind is VerdictKind.PASS

    def __str__(self) -> str:
        if self.reason is not None:
            return f"{self.kind.value}({self.reason})"
        if self.ratio is not None and not self.passed:
            return f"{self.kind.value}({self.ratio:.4f})"
        return self.kind.value


PASS = FilterVerdict(VerdictKind.PASS)


def prefilter_length(
    document: CodeDocument,
    tokenizer: Optional[Tokenizer] = None,
    max_context: int = 16384,
    headroom: float = DEFAULT_HEADROOM,
) -> FilterVerdict:
    """
    TooLong when the prompt plus the share of the context reserved for
    generated comments does not fit in `max_context`.
    """
    if max_context < 1:
        raise ValueError(f"max_context must be >= 1, got {max_context}")
    tokenizer = tokenizer or DEFAULT_TOKENIZER
    reserved = headroom * max_context
    if tokenizer.count(build_prompt(document)) + reserved > max_context:
        return FilterVerdict(VerdictKind.TOO_LONG)
    return PASS


def filter_markdown(raw_output: str, language: Any) -> FilterVerdict:
    try:
        parse_output(raw_output, language)
    except MalformedMarkdown as error:
        return FilterVerdict(VerdictKind.MARKDOWN_REJECT, reason=error.reason.value)
    return PASS


def filter_length(
    generated_body: str, original: str, syntax: CommentSyntax
) -> FilterVerdict:
    """
    Compare the code (comments excluded) of the generated body against the
    original's. Rejects when they differ by more than the original's size.
    """
    original_code = code_weight(original, syntax)
    if original_code == 0:
        raise EmptyOriginal("original has no non-whitespace code")
    ratio = abs(code_weight(generated_body, syntax) - original_code) / original_code
    if ratio > MAX_LENGTH_RATIO:
        return FilterVerdict(VerdictKind.LENGTH_REJECT, ratio=ratio)
    return FilterVerdict(VerdictKind.PASS, ratio=ratio)


def filter_implicit(result: GenerationResult) -> FilterVerdict:
    if result.status is Status.IMPLICIT_EOT:
        return FilterVerdict(VerdictKind.IMPLICIT_EOT)
    return PASS


def apply_all(
    document: CodeDocument,
    result: GenerationResult,
    tokenizer: Optional[Tokenizer] = None,
    max_context: int = 16384,
    headroom: float = DEFAULT_HEADROOM,
) -> FilterVerdict:
    """
    First failing filter in the order TooLong, ImplicitEOT, Markdown, Length.
    Backend failures are errors, not verdicts.
    """
    if result.status is Status.BACKEND_FAILED:
        raise ValueError(f"{document.id}: no verdict for a failed generation")
    verdict = prefilter_length(document, tokenizer, max_context, headroom)
    if not verdict.passed:
        return verdict
    verdict = filter_implicit(result)
    if not verdict.passed:
        return verdict
    verdict = filter_markdown(result.output, document.language)
    if not verdict.passed:
        return verdict
    syntax = syntax_for(document.language)
    if code_weight(document.content, syntax) == 0:
        return PASS
    body = parse_output(result.output, document.language)
    return filter_length(body, document.content, syntax)
