# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

"""
Line-by-line constrained comment generation.

At every clean line start the backend is probed for a few tokens. Output
that opens a comment is completed up to the comment's terminator and kept;
anything else is thrown away and the next original line is copied instead.
Original code therefore only ever reaches the output verbatim.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Deque, List, Optional, Tuple

from commentaug.backend.lib import (
    Backend,
    BackendError,
    CompletionRequest,
    CompletionResponse,
    Finish,
    FinishKind,
    TokenSource,
)
from commentaug.core.lexer import (
    block_extent,
    classify_prefix,
    interior_lines,
    opening_marker,
    PrefixClass,
)
from commentaug.core.lib import ConfigError
from commentaug.core.syntax import BlockMarker, syntax_for
from commentaug.corpus.io import CodeDocument
from commentaug.corpus.tokenizer import DEFAULT_TOKENIZER, Tokenizer

from .markdown import EOT, FENCE, generation_context, open_fence, wrap_output

logger = logging.getLogger(__name__)

LINE_STOP = "\n"
FENCE_STOP = "\n" + FENCE
_MAX_FORCED_CLOSES = 256

##
## Configuration and results
##


@dataclass(frozen=True)
class DecoderConfig:
    probe_len: int = 8
    probe_step: int = 1
    segment_budget: int = 512
    max_segments: int = 64
    temperature: float = 0.0
    max_context: int = 16384
    headroom: float = 0.25
    max_new_tokens: int = 8192

    def validate(self) -> "DecoderConfig":
        if self.probe_len < 1 or self.probe_step < 1:
            raise ConfigError("probe_len and probe_step must be >= 1")
        if self.segment_budget < 1 or self.max_segments < 1:
            raise ConfigError("segment_budget and max_segments must be >= 1")
        if self.temperature < 0:
            raise ConfigError("temperature must be >= 0")
        if self.max_context < 1 or not 0 <= self.headroom < 1:
            raise ConfigError("max_context must be >= 1 and headroom in [0, 1)")
        if self.max_new_tokens < 1:
            raise ConfigError("max_new_tokens must be >= 1")
        return self


class Status(str, Enum):
    COMPLETED = "completed"
    IMPLICIT_EOT = "implicit-eot"
    SEGMENT_BUDGET_EXCEEDED = "segment-budget-exceeded"
    BACKEND_FAILED = "backend-failed"


class Mode(str, Enum):
    AT_LINE_START = "at-line-start"
    IN_COMMENT = "in-comment"
    FINISHED = "finished"
    REJECTED_EOT = "rejected-eot"


@dataclass(frozen=True)
class RequestTrace:
    """
    One backend call: tokens of context the backend had not seen before the
    call, and tokens it generated.
    """

    context_tokens: int
    generated_tokens: int


@dataclass(frozen=True)
class GenerationResult:
    status: Status
    output: str
    body: str
    lm_tokens: int
    copied_tokens: int
    requests: Tuple[RequestTrace, ...] = ()
    token_source: TokenSource = TokenSource.ESTIMATED
    error: Optional[BackendError] = field(default=None, compare=False)

    @property
    def completed(self) -> bool:
        return self.status is Status.COMPLETED


class _SegmentBudgetExceeded(Exception):
    def __init__(self, partial: str) -> None:
        super().__init__("comment segment budget exceeded")
        self.partial = partial


##
## Session
##


class GenerationSession:
    def __init__(
        self,
        document: CodeDocument,
        backend: Backend,
        config: Optional[DecoderConfig] = None,
        tokenizer: Optional[Tokenizer] = None,
    ) -> None:
        self.document = document
        self.syntax = syntax_for(document.language)
        self.backend = backend
        self.config = (config or DecoderConfig()).validate()
        self.tokenizer = tokenizer or DEFAULT_TOKENIZER
        lines = document.lines
        self.total_lines = len(lines)
        self.pending: Deque[str] = deque(lines)
        self.emitted: List[str] = []
        self.mode = Mode.AT_LINE_START
        self.lm_tokens = 0
        self.copied_tokens = 0
        self.requests: List[RequestTrace] = []
        self.token_source: Optional[TokenSource] = None
        self._interior = interior_lines(document.content, self.syntax)
        self._context = generation_context(document)
        self._output = ""
        self._unsent = self.tokenizer.count(self._context)
        self._segments_in_gap = 0

    @property
    def next_line(self) -> int:
        return self.total_lines - len(self.pending)

    @property
    def body(self) -> str:
        body = "\n".join(self.emitted)
        if self.document.content.endswith("\n"):
            body += "\n"
        return body

    def run(self) -> GenerationResult:
        try:
            while self.mode is Mode.AT_LINE_START:
                self.step()
        except BackendError as error:
            logger.debug("%s: backend failed: %s", self.document.id, error)
            return self._result(Status.BACKEND_FAILED, "", "", error=error)
        except _SegmentBudgetExceeded as exceeded:
            logger.debug("%s: %s", self.document.id, exceeded)
            output = open_fence(self.document.language) + self._output
            return self._result(
                Status.SEGMENT_BUDGET_EXCEEDED, output + exceeded.partial, ""
            )
        if self.mode is Mode.REJECTED_EOT:
            return self._result(Status.IMPLICIT_EOT, "", "")
        body = self.body
        return self._result(
            Status.COMPLETED, wrap_output(body, self.document.language), body
        )

    def step(self) -> None:
        """
        Advance past one line start: copy an original line, emit one comment
        segment, or finish.
        """
        if self.pending and self.next_line in self._interior:
            self._copy()
            return
        probe, finish, used = self._probe()
        if self.mode is Mode.REJECTED_EOT:
            return
        complete = finish.kind is not FinishKind.LENGTH
        verdict = classify_prefix(probe, self.syntax, False, complete=complete)
        if verdict is PrefixClass.COMMENT:
            self._segments_in_gap += 1
            if self._segments_in_gap > self.config.max_segments:
                raise _SegmentBudgetExceeded(probe)
            self.mode = Mode.IN_COMMENT
            self._comment_segment(probe, finish, used)
            self.mode = Mode.AT_LINE_START
        elif self.pending:
            self._copy()
        else:
            self.mode = Mode.FINISHED

    ## Backend calls

    def _request(
        self, partial: str, stop: Tuple[str, ...], max_tokens: int
    ) -> CompletionResponse:
        request = CompletionRequest(
            prompt=self._context + self._output + partial,
            stop=stop,
            max_tokens=max_tokens,
            temperature=self.config.temperature,
        )
        response = self.backend.complete(request)
        self.requests.append(RequestTrace(self._unsent, response.tokens_generated))
        self._unsent = 0
        self.lm_tokens += response.tokens_generated
        if self.token_source is None:
            self.token_source = response.token_source
        else:
            self.token_source = self.token_source.combine(response.token_source)
        return response

    def _probe(self) -> Tuple[str, Finish, int]:
        first = not self.requests
        text = ""
        used = 0
        while True:
            want = min(self.config.probe_step, self.config.probe_len - used)
            response = self._request(text, (LINE_STOP,), max(1, want))
            text += response.text
            used += max(1, response.tokens_generated)
            finish = response.finish
            maybe_eot = False
            if first:
                head = text.lstrip()
                if head.startswith(EOT):
                    self.mode = Mode.REJECTED_EOT
                    return text, finish, used
                maybe_eot = bool(head) and EOT.startswith(head)
            if finish.kind is not FinishKind.LENGTH or used >= self.config.probe_len:
                return text, finish, used
            if maybe_eot:
                continue
            if classify_prefix(text, self.syntax, False) is not PrefixClass.NEED_MORE:
                return text, finish, used

    ## Output

    def _emit(self, line: str) -> None:
        self.emitted.append(line)
        self._output += line + "\n"

    def _copy(self) -> None:
        line = self.pending.popleft()
        self._emit(line)
        tokens = self.tokenizer.count(line)
        self.copied_tokens += tokens
        self._unsent += tokens
        self._segments_in_gap = 0

    def _synthesize(self, text: str) -> str:
        # Closing markers written by the engine are booked as generated.
        tokens = self.tokenizer.count(text)
        self.lm_tokens += tokens
        self._unsent += tokens
        return text

    ## Comment segments

    def _comment_segment(self, text: str, finish: Finish, used: int) -> None:
        marker = opening_marker(text, self.syntax)
        if isinstance(marker, BlockMarker):
            text = self._block_segment(text, finish, used, marker)
            for line in text.split("\n"):
                self._emit(line)
        else:
            self._emit(self._line_segment(text, finish, used))

    def _line_segment(self, text: str, finish: Finish, used: int) -> str:
        budget = self.config.segment_budget
        while finish.kind is FinishKind.LENGTH:
            if used >= budget:
                raise _SegmentBudgetExceeded(text)
            response = self._request(text, (LINE_STOP,), budget - used)
            if not response.text and not response.tokens_generated:
                break
            text += response.text
            used += response.tokens_generated
            finish = response.finish
        return text

    def _block_segment(
        self, text: str, finish: Finish, used: int, marker: BlockMarker
    ) -> str:
        budget = self.config.segment_budget
        start = len(text) - len(text.lstrip())
        # Column-zero closers only count on a line of their own, so those
        # blocks are read a line at a time.
        close_stop = LINE_STOP if marker.column_zero else marker.close
        stops = (close_stop, FENCE_STOP)
        while True:
            if finish.kind is FinishKind.STOP and finish.stop != FENCE_STOP:
                text += finish.stop or ""
            end, closed = block_extent(text, start, marker, self.syntax.nests_blocks)
            if closed:
                return text[:end]
            if finish.kind is FinishKind.END or finish.stop == FENCE_STOP:
                return self._force_close(text, start, marker)
            if used >= budget:
                raise _SegmentBudgetExceeded(text)
            response = self._request(text, stops, budget - used)
            if text.endswith("\n") and response.text.startswith(FENCE):
                return self._force_close(text, start, marker)
            text += response.text
            used += max(1, response.tokens_generated)
            finish = response.finish

    def _force_close(self, text: str, start: int, marker: BlockMarker) -> str:
        for _ in range(_MAX_FORCED_CLOSES):
            separator = "" if text.endswith("\n") else "\n"
            text += self._synthesize(separator + marker.close)
            end, closed = block_extent(text, start, marker, self.syntax.nests_blocks)
            if closed:
                return text[:end]
        raise _SegmentBudgetExceeded(text)

    def _result(
        self,
        status: Status,
        output: str,
        body: str,
        error: Optional[BackendError] = None,
    ) -> GenerationResult:
        return GenerationResult(
            status=status,
            output=output,
            body=body,
            lm_tokens=self.lm_tokens,
            copied_tokens=self.copied_tokens,
            requests=tuple(self.requests),
            token_source=self.token_source or TokenSource.ESTIMATED,
            error=error,
        )


##
## Entry points
##


def constrained_generate(
    document: CodeDocument,
    backend: Backend,
    config: Optional[DecoderConfig] = None,
    tokenizer: Optional[Tokenizer] = None,
) -> GenerationResult:
    return GenerationSession(document, backend, config, tokenizer).run()


def unconstrained_generate(
    document: CodeDocument,
    backend: Backend,
    config: Optional[DecoderConfig] = None,
    tokenizer: Optional[Tokenizer] = None,
) -> GenerationResult:
    """
    Generate the whole answer in one request, copying nothing. This is the
    baseline the constrained engine is measured against.
    """
    config = (config or DecoderConfig()).validate()
    tokenizer = tokenizer or DEFAULT_TOKENIZER
    context = generation_context(document)
    request = CompletionRequest(
        prompt=context,
        stop=(FENCE_STOP,),
        max_tokens=config.max_new_tokens,
        temperature=config.temperature,
    )
    try:
        response = backend.complete(request)
    except BackendError as error:
        return GenerationResult(Status.BACKEND_FAILED, "", "", 0, 0, error=error)
    trace = (RequestTrace(tokenizer.count(context), response.tokens_generated),)
    common = dict(
        lm_tokens=response.tokens_generated,
        copied_tokens=0,
        requests=trace,
        token_source=response.token_source,
    )
    if response.text.lstrip().startswith(EOT):
        return GenerationResult(Status.IMPLICIT_EOT, "", "", **common)
    if response.finish.kind is FinishKind.STOP:
        body = response.text
        return GenerationResult(
            Status.COMPLETED, wrap_output(body, document.language), body, **common
        )
    output = open_fence(document.language) + response.text
    status = (
        Status.SEGMENT_BUDGET_EXCEEDED
        if response.finish.kind is FinishKind.LENGTH
        else Status.COMPLETED
    )
    return GenerationResult(status, output, "", **common)
