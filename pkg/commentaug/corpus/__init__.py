# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

from .io import (  # noqa
    CodeDocument,
    CorpusIOError,
    read_corpus,
    read_documents,
    SchemaError,
    write_corpus,
)
from .stats import corpus_stats, CorpusStats, render_report, ReportFormat  # noqa
from .tokenizer import DEFAULT_TOKENIZER, Tokenizer, WhitespaceTokenizer  # noqa
