# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

"""
Speedup of constrained generation over the write-everything baseline.

Each document is generated once both ways; the request traces are then priced
for every (instance_num, batch_size) cell with a simulated latency model, so
cells differ only in the load the model assumes.
"""

import csv
import io
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from commentaug.backend.lib import Backend
from commentaug.core.lib import ConfigError
from commentaug.corpus.io import CodeDocument
from commentaug.corpus.tokenizer import Tokenizer
from commentaug.decoder.session import (
    constrained_generate,
    DecoderConfig,
    RequestTrace,
    Status,
    unconstrained_generate,
)

logger = logging.getLogger(__name__)

DEFAULT_INSTANCE_NUMS = (1, 2, 4, 8, 16, 32, 64, 128)
DEFAULT_BATCH_SIZES = (1, 2, 4, 8, 16, 32, 64, 128)


@dataclass(frozen=True)
class LatencyModel:
    """
    Milliseconds for one request at concurrent load L (instance_num times
    batch_size): a fixed overhead, one decoding step per generated token whose
    cost grows with L, and prefill of the new context tokens.
    """

    step_ms: float = 25.0
    compute_ms: float = 0.02
    overhead_ms: float = 1.0

    def validate(self) -> "LatencyModel":
        if min(self.step_ms, self.compute_ms, self.overhead_ms) < 0:
            raise ConfigError("latency costs must be >= 0")
        if self.step_ms + self.compute_ms == 0:
            raise ConfigError("step_ms and compute_ms can not both be 0")
        return self

    def cost(self, trace: RequestTrace, load: int) -> float:
        per_token = self.compute_ms * load
        return (
            self.overhead_ms
            + max(1, trace.generated_tokens) * (self.step_ms + per_token)
            + trace.context_tokens * per_token
        )

    def total(self, traces: Iterable[RequestTrace], load: int) -> float:
        return sum(self.cost(trace, load) for trace in traces)


@dataclass(frozen=True)
class BenchGrid:
    instance_nums: Tuple[int, ...] = DEFAULT_INSTANCE_NUMS
    batch_sizes: Tuple[int, ...] = DEFAULT_BATCH_SIZES

    def validate(self) -> "BenchGrid":
        values = tuple(self.instance_nums) + tuple(self.batch_sizes)
        if not self.instance_nums or not self.batch_sizes or min(values) < 1:
            raise ConfigError(
                "instance_nums and batch_sizes must be non-empty and >= 1"
            )
        return self


@dataclass
class BenchResult:
    grid: BenchGrid
    latency: LatencyModel
    baseline: List[RequestTrace] = field(default_factory=list)
    constrained: List[RequestTrace] = field(default_factory=list)
    documents: int = 0

    def speedup(self, instance_num: int, batch_size: int) -> float:
        load = instance_num * batch_size
        constrained = self.latency.total(self.constrained, load)
        if not constrained:
            return 1.0
        return self.latency.total(self.baseline, load) / constrained

    @property
    def cells(self) -> Dict[Tuple[int, int], float]:
        return {
            (instance_num, batch_size): self.speedup(instance_num, batch_size)
            for instance_num in self.grid.instance_nums
            for batch_size in self.grid.batch_sizes
        }

    @property
    def predicted_speedup(self) -> float:
        """
        Decoding steps of the baseline over those of the constrained engine:
        the speedup when per-step cost dominates.
        """
        steps = sum(max(1, t.generated_tokens) for t in self.constrained)
        if not steps:
            return 1.0
        return sum(max(1, t.generated_tokens) for t in self.baseline) / steps

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\r\n")
        writer.writerow(["instance_num"] + [str(b) for b in self.grid.batch_sizes])
        cells = self.cells
        for instance_num in self.grid.instance_nums:
            writer.writerow(
                [str(instance_num)]
                + [
                    f"{cells[(instance_num, batch_size)]:.2f}"
                    for batch_size in self.grid.batch_sizes
                ]
            )
        return buffer.getvalue()


def bench_speedup(
    documents: Iterable[CodeDocument],
    backend: Backend,
    grid: Optional[BenchGrid] = None,
    latency: Optional[LatencyModel] = None,
    config: Optional[DecoderConfig] = None,
    tokenizer: Optional[Tokenizer] = None,
) -> BenchResult:
    result = BenchResult(
        grid=(grid or BenchGrid()).validate(),
        latency=(latency or LatencyModel()).validate(),
    )
    for document in documents:
        runs = (
            constrained_generate(document, backend, config, tokenizer),
            unconstrained_generate(document, backend, config, tokenizer),
        )
        if any(run.status is Status.BACKEND_FAILED for run in runs):
            logger.warning("%s: backend failed, left out of the bench", document.id)
            continue
        result.constrained.extend(runs[0].requests)
        result.baseline.extend(runs[1].requests)
        result.documents += 1
    return result


def parse_sizes(value: str) -> Tuple[int, ...]:
    try:
        sizes: Sequence[int] = tuple(int(part) for part in value.split(",") if part)
    except ValueError:
        raise ConfigError(f"expected comma separated integers, got {value!r}")
    if not sizes:
        raise ConfigError("expected at least one size")
    return tuple(sizes)
