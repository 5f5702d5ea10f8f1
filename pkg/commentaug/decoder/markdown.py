# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

from enum import Enum
from typing import Any, NamedTuple, Optional

from commentaug.core.syntax import Language

INSTRUCTION = "Please add detailed comments to the following code"
FENCE = "```"
EOT = "<|EOT|>"


class MalformedReason(str, Enum):
    MISSING_OPEN_FENCE = "missing_open_fence"
    MISSING_CLOSE_FENCE = "missing_close_fence"
    WRONG_LANGUAGE_TAG = "wrong_language_tag"
    MULTIPLE_BLOCKS = "multiple_blocks"
    PROSE_OUTSIDE = "prose_outside"


class MalformedMarkdown(ValueError):
    def __init__(self, reason: MalformedReason) -> None:
        super().__init__(f"Malformed markdown output: {reason.value}")
        self.reason = reason


class PromptParts(NamedTuple):
    language: Language
    content: str
    output: str


def open_fence(language: Any) -> str:
    return f"{FENCE}{Language.parse(language).fence_tag}\n"


def build_prompt(document: Any) -> str:
    """
    The instruction line followed by the document in a fenced block tagged
    with its language.
    """
    return f"{INSTRUCTION}\n{open_fence(document.language)}{document.content}\n{FENCE}"


def generation_context(document: Any) -> str:
    """
    The text every backend request starts with: the prompt followed by the
    opening fence of the answer. The partial answer is appended to it.
    """
    return f"{build_prompt(document)}\n{open_fence(document.language)}"


def split_prompt(prompt: str) -> Optional[PromptParts]:
    """
    Invert generation_context(document) + output. Returns None for prompts
    of any other shape.
    """
    head = f"{INSTRUCTION}\n{FENCE}"
    if not prompt.startswith(head):
        return None
    newline = prompt.find("\n", len(head))
    if newline < 0:
        return None
    try:
        language = Language.parse(prompt[len(head) : newline])
    except ValueError:
        return None
    separator = f"\n{FENCE}\n{open_fence(language)}"
    body_start = newline + 1
    split = prompt.find(separator, body_start)
    if split < 0:
        return None
    content = prompt[body_start:split]
    return PromptParts(language, content, prompt[split + len(separator) :])


def wrap_output(body: str, language: Any) -> str:
    return f"{open_fence(language)}{body}\n{FENCE}"


def _is_fence(line: str) -> bool:
    return line.startswith(FENCE)


def parse_output(raw: str, language: Any) -> str:
    """
    Return the content of the single fenced block of `raw`, which must be
    tagged with `language` and may only be surrounded by whitespace.
    """
    tag = Language.parse(language).fence_tag
    lines = raw.split("\n")
    opening = next((i for i, line in enumerate(lines) if _is_fence(line)), None)
    if opening is None:
        raise MalformedMarkdown(MalformedReason.MISSING_OPEN_FENCE)
    if lines[opening][len(FENCE) :].strip() != tag:
        raise MalformedMarkdown(MalformedReason.WRONG_LANGUAGE_TAG)
    closing = next(
        (
            i
            for i in range(opening + 1, len(lines))
            if lines[i].rstrip() == FENCE
        ),
        None,
    )
    if closing is None:
        raise MalformedMarkdown(MalformedReason.MISSING_CLOSE_FENCE)
    if any(_is_fence(line) for line in lines[closing + 1 :]):
        raise MalformedMarkdown(MalformedReason.MULTIPLE_BLOCKS)
    outside = lines[:opening] + lines[closing + 1 :]
    if any(line.strip() for line in outside):
        raise MalformedMarkdown(MalformedReason.PROSE_OUTSIDE)
    return "\n".join(lines[opening + 1 : closing])
