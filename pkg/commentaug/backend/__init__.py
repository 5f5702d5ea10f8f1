# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

from typing import Optional

from commentaug.corpus.tokenizer import Tokenizer

from .lib import (  # noqa
    Backend,
    BackendConfig,
    BackendError,
    BackendKind,
    BackendStatusError,
    CompletionRequest,
    CompletionResponse,
    Finish,
    FinishKind,
    RateLimited,
    TokenSource,
    TransportError,
)


def build_backend(
    config: BackendConfig, tokenizer: Optional[Tokenizer] = None
) -> Backend:
    # Deferred: .mock imports commentaug.decoder, which imports this package.
    config.validate()
    if BackendKind(config.kind) is BackendKind.HTTP:
        from .http import HttpBackend

        return HttpBackend(config, tokenizer=tokenizer)
    from .mock import load_script, ScriptedBackend

    if not config.script:
        return ScriptedBackend([], tokenizer=tokenizer)
    return load_script(config.script, tokenizer=tokenizer)
