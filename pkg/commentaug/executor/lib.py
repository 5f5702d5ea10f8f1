# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

import json
import logging
import os
import time
from collections import deque
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import (
    Any,
    Callable,
    Deque,
    Dict,
    Iterable,
    Iterator,
    Optional,
    Set,
    Union,
)

import psutil

from commentaug.backend.lib import Backend, TokenSource
from commentaug.core.lexer import comment_counts
from commentaug.core.lib import TypeCheckError, validate_fields
from commentaug.core.syntax import syntax_for, UnsupportedLanguage
from commentaug.corpus.io import (
    CodeDocument,
    CorpusIOError,
    iter_json_lines,
    OPTIONAL_FIELDS,
    open_output,
    read_corpus,
    REQUIRED_FIELDS,
    SchemaError,
    STDIO_PATH,
)
from commentaug.corpus.tokenizer import DEFAULT_TOKENIZER, Tokenizer
from commentaug.decoder.markdown import parse_output
from commentaug.decoder.session import (
    constrained_generate,
    DecoderConfig,
    GenerationResult,
    Status,
    unconstrained_generate,
)
from commentaug.filters import (
    apply_all,
    FilterVerdict,
    prefilter_length,
    VerdictKind,
)

logger = logging.getLogger(__name__)

BACKEND_FAILED = "backend-failed"
OUTCOMES = tuple(kind.value for kind in VerdictKind) + (BACKEND_FAILED,)

##
## Records
##


def _density(comment: int, total: int) -> float:
    return comment / total if total else 0.0


@dataclass(frozen=True)
class AugmentedRecord:
    """
    The outcome of augmenting one document. `verdict` is None only when the
    backend failed, in which case `error` says why. `generated` is the
    commented body of Pass records and None otherwise.
    """

    document: CodeDocument
    verdict: Optional[FilterVerdict]
    generated: Optional[str] = None
    density_before: float = 0.0
    density_after: float = 0.0
    lm_tokens: int = 0
    copied_tokens: int = 0
    token_source: TokenSource = TokenSource.ESTIMATED
    error: Optional[str] = None
    wall_time: Optional[float] = field(default=None, compare=False)

    @property
    def outcome(self) -> str:
        if self.verdict is None:
            return BACKEND_FAILED
        return self.verdict.kind.value

    @property
    def passed(self) -> bool:
        return self.verdict is not None and self.verdict.passed

    def to_json(self, timing: bool = False) -> Dict[str, Any]:
        obj = self.document.to_json()
        obj.update(
            verdict=self.outcome,
            verdict_reason=self.verdict.reason if self.verdict else None,
            length_ratio=self.verdict.ratio if self.verdict else None,
            generated=self.generated,
            density_before=self.density_before,
            density_after=self.density_after,
            lm_tokens=self.lm_tokens,
            copied_tokens=self.copied_tokens,
            token_source=self.token_source.value,
            error=self.error,
        )
        if timing and self.wall_time is not None:
            obj["wall_time"] = round(self.wall_time, 6)
        return obj


RECORD_FIELDS = dict(
    REQUIRED_FIELDS,
    verdict=str,
    density_before=Union[int, float],
    density_after=Union[int, float],
    lm_tokens=int,
    copied_tokens=int,
)
OPTIONAL_RECORD_FIELDS = dict(
    OPTIONAL_FIELDS,
    verdict_reason=Optional[str],
    length_ratio=Optional[Union[int, float]],
    generated=Optional[str],
    token_source=str,
    error=Optional[str],
    wall_time=Union[int, float],
)


def record_from_json(obj: Dict[str, Any]) -> AugmentedRecord:
    validate_fields(obj, RECORD_FIELDS, OPTIONAL_RECORD_FIELDS)
    outcome = obj["verdict"]
    if outcome not in OUTCOMES:
        raise TypeCheckError("verdict", f"unknown verdict {outcome!r}")
    verdict = None
    if outcome != BACKEND_FAILED:
        verdict = FilterVerdict(
            VerdictKind(outcome), obj.get("verdict_reason"), obj.get("length_ratio")
        )
    if (verdict is not None and verdict.passed) != (obj.get("generated") is not None):
        raise TypeCheckError("generated", "present if and only if verdict is pass")
    try:
        token_source = TokenSource(obj.get("token_source", "estimated"))
    except ValueError:
        raise TypeCheckError("token_source", f"unknown {obj['token_source']!r}")
    return AugmentedRecord(
        document=CodeDocument.from_raw(
            obj["id"], obj["language"], obj["content"], obj.get("meta")
        ),
        verdict=verdict,
        generated=obj.get("generated"),
        density_before=obj["density_before"],
        density_after=obj["density_after"],
        lm_tokens=obj["lm_tokens"],
        copied_tokens=obj["copied_tokens"],
        token_source=token_source,
        error=obj.get("error"),
        wall_time=obj.get("wall_time"),
    )


def read_records(path: str) -> Iterator[Union[AugmentedRecord, SchemaError]]:
    for item in iter_json_lines(path):
        if isinstance(item, SchemaError):
            yield item
            continue
        line_number, obj = item
        try:
            yield record_from_json(obj)
        except TypeCheckError as error:
            yield SchemaError(line_number, str(error))


##
## Augmentation
##


def augment_document(
    document: CodeDocument,
    backend: Backend,
    config: Optional[DecoderConfig] = None,
    tokenizer: Optional[Tokenizer] = None,
    unconstrained: bool = False,
) -> AugmentedRecord:
    """
    Generate comments for one document and run every filter over the result.
    Over-long documents are rejected before the backend is called.
    """
    config = config or DecoderConfig()
    tokenizer = tokenizer or DEFAULT_TOKENIZER
    start = time.perf_counter()
    syntax = syntax_for(document.language)
    comment, total = comment_counts(document.content, syntax)
    before = _density(comment, total)

    def record(result: Optional[GenerationResult], **kwargs: Any) -> AugmentedRecord:
        if result is not None:
            kwargs.update(
                lm_tokens=result.lm_tokens,
                copied_tokens=result.copied_tokens,
                token_source=result.token_source,
            )
        kwargs.setdefault("density_after", before)
        return AugmentedRecord(
            document=document,
            density_before=before,
            wall_time=time.perf_counter() - start,
            **kwargs,
        )

    verdict = prefilter_length(document, tokenizer, config.max_context, config.headroom)
    if not verdict.passed:
        return record(None, verdict=verdict)
    generate = unconstrained_generate if unconstrained else constrained_generate
    result = generate(document, backend, config, tokenizer)
    if result.status is Status.BACKEND_FAILED:
        logger.warning("%s: backend failed: %s", document.id, result.error)
        return record(result, verdict=None, error=str(result.error))
    verdict = apply_all(
        document, result, tokenizer, config.max_context, config.headroom
    )
    if not verdict.passed:
        return record(result, verdict=verdict)
    generated = parse_output(result.output, document.language)
    return record(
        result,
        verdict=verdict,
        generated=generated,
        density_after=_density(*comment_counts(generated, syntax)),
    )


def augment_documents(
    documents: Iterable[CodeDocument],
    backend: Backend,
    config: Optional[DecoderConfig] = None,
    workers: int = 1,
    tokenizer: Optional[Tokenizer] = None,
    unconstrained: bool = False,
) -> Iterator[AugmentedRecord]:
    """
    Augment documents on a pool of `workers` threads, yielding records in
    input order. At most a few documents per worker are in flight.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    window = workers * 4
    with ThreadPoolExecutor(max_workers=workers) as pool:
        in_flight: Deque[Future] = deque()
        try:
            for document in documents:
                in_flight.append(
                    pool.submit(
                        augment_document,
                        document,
                        backend,
                        config,
                        tokenizer,
                        unconstrained,
                    )
                )
                while len(in_flight) >= window:
                    yield in_flight.popleft().result()
            while in_flight:
                yield in_flight.popleft().result()
        finally:
            for future in in_flight:
                future.cancel()


@dataclass
class RunSummary:
    input_count: int = 0
    outcomes: Dict[str, int] = field(
        default_factory=lambda: {outcome: 0 for outcome in OUTCOMES}
    )
    schema_errors: int = 0
    resumed: int = 0
    comment_before: int = 0
    total_before: int = 0
    comment_after: int = 0
    total_after: int = 0
    lm_tokens: int = 0
    copied_tokens: int = 0
    token_source: Optional[TokenSource] = None
    duration_secs: float = 0.0
    rss: int = 0

    @property
    def record_count(self) -> int:
        return sum(self.outcomes.values())

    @property
    def conserved(self) -> bool:
        return self.record_count == self.input_count

    @property
    def density_before(self) -> float:
        return _density(self.comment_before, self.total_before)

    @property
    def density_after(self) -> float:
        return _density(self.comment_after, self.total_after)

    def add(self, record: AugmentedRecord) -> None:
        self.outcomes[record.outcome] += 1
        syntax = syntax_for(record.document.language)
        comment, total = comment_counts(record.document.content, syntax)
        self.comment_before += comment
        self.total_before += total
        if record.generated is not None:
            comment, total = comment_counts(record.generated, syntax)
        self.comment_after += comment
        self.total_after += total
        self.lm_tokens += record.lm_tokens
        self.copied_tokens += record.copied_tokens
        if record.lm_tokens or record.copied_tokens:
            self.token_source = (
                record.token_source
                if self.token_source is None
                else self.token_source.combine(record.token_source)
            )


def _done_ids(path: str) -> Set[str]:
    if path == STDIO_PATH or not os.path.exists(path):
        return set()
    done = set()
    for item in iter_json_lines(path):
        if isinstance(item, SchemaError):
            logger.warning("%s: ignoring unreadable record: %s", path, item)
            continue
        _, obj = item
        if isinstance(obj.get("id"), str):
            done.add(obj["id"])
    return done


def augment_corpus(
    in_path: str,
    out_path: str,
    backend: Backend,
    config: Optional[DecoderConfig] = None,
    workers: int = 1,
    tokenizer: Optional[Tokenizer] = None,
    resume: bool = False,
    unconstrained: bool = False,
    timing: bool = False,
    on_record: Optional[Callable[[AugmentedRecord], None]] = None,
) -> RunSummary:
    """
    Augment every document of the corpus at `in_path` and write one record
    per document to `out_path`, in input order.

    With `resume`, documents whose id already has a record in `out_path` are
    skipped and new records are appended. Schema errors and documents in
    unsupported languages are logged, counted and left out.
    """
    summary = RunSummary()
    done = _done_ids(out_path) if resume else set()
    start = time.perf_counter()

    def documents() -> Iterator[CodeDocument]:
        for item in read_corpus(in_path):
            if isinstance(item, SchemaError):
                logger.warning("%s: skipping record: %s", in_path, item)
                summary.schema_errors += 1
                continue
            try:
                syntax_for(item.language)
            except UnsupportedLanguage as error:
                logger.warning("%s: skipping %s: %s", in_path, item.id, error)
                summary.schema_errors += 1
                continue
            if item.id in done:
                summary.resumed += 1
                continue
            summary.input_count += 1
            yield item

    with open_output(out_path, append=resume) as stream:
        records = augment_documents(
            documents(), backend, config, workers, tokenizer, unconstrained
        )
        try:
            for record in records:
                stream.write(
                    json.dumps(record.to_json(timing=timing), ensure_ascii=False)
                )
                stream.write("\n")
                stream.flush()
                summary.add(record)
                if on_record is not None:
                    on_record(record)
        except OSError as error:
            raise CorpusIOError(out_path, error)
    summary.duration_secs = time.perf_counter() - start
    summary.rss = psutil.Process(os.getpid()).memory_info().rss
    logger.info(
        "%s: %d records written, %d schema errors, %d resumed",
        out_path,
        summary.record_count,
        summary.schema_errors,
        summary.resumed,
    )
    return summary
