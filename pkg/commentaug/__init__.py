# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

import os
import sys

if sys.version_info < (3, 8):
    raise RuntimeError("Python >=3.8 required.")

from commentaug.backend import build_backend  # noqa
from commentaug.core import comment_density, strip_comments, syntax_for  # noqa
from commentaug.corpus import CodeDocument, corpus_stats, read_corpus  # noqa
from commentaug.decoder import constrained_generate, DecoderConfig  # noqa
from commentaug.filters import apply_all, FilterVerdict  # noqa

with open(os.path.join(os.path.dirname(__file__), "version")) as _version:
    __version__ = _version.read().strip()
