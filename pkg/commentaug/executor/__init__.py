# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

from .assemble import assemble, AssemblyCounts, DatasetVariant  # noqa
from .bench import bench_speedup, BenchGrid, BenchResult, LatencyModel  # noqa
from .lib import (  # noqa
    augment_corpus,
    augment_document,
    augment_documents,
    AugmentedRecord,
    read_records,
    RunSummary,
)
