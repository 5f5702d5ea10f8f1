# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

from .markdown import (  # noqa
    build_prompt,
    EOT,
    MalformedMarkdown,
    MalformedReason,
    parse_output,
)
from .session import (  # noqa
    constrained_generate,
    DecoderConfig,
    GenerationResult,
    GenerationSession,
    RequestTrace,
    Status,
    unconstrained_generate,
)
