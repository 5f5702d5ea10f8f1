# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

import abc
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from commentaug.core.lib import ConfigError

##
## Exceptions
##


class BackendError(Exception):
    """
    Base class for every failure of a completion backend.
    """


class TransportError(BackendError):
    def __init__(self, message: str, retryable: bool = True) -> None:
        super().__init__(message)
        self.retryable = retryable


class RateLimited(BackendError):
    def __init__(self, retry_after: Optional[float] = None) -> None:
        super().__init__(f"Rate limited (retry after {retry_after}s)")
        self.retry_after = retry_after


class BackendStatusError(BackendError):
    """
    The server answered with a non-retryable status, or a body that does not
    follow the completions wire shape.
    """

    def __init__(self, status: int, body_excerpt: str) -> None:
        super().__init__(f"Backend returned {status}: {body_excerpt}")
        self.status = status
        self.body_excerpt = body_excerpt


def is_retryable(error: BackendError) -> bool:
    if isinstance(error, RateLimited):
        return True
    return isinstance(error, TransportError) and error.retryable


##
## Wire types
##


class FinishKind(str, Enum):
    STOP = "stop"
    LENGTH = "length"
    END = "end"


@dataclass(frozen=True)
class Finish:
    kind: FinishKind
    stop: Optional[str] = None

    @classmethod
    def stopped(cls, stop: str) -> "Finish":
        return cls(FinishKind.STOP, stop)

    def __repr__(self) -> str:
        if self.kind is FinishKind.STOP:
            return f"Stop({self.stop!r})"
        return self.kind.name.capitalize()


LENGTH = Finish(FinishKind.LENGTH)
END = Finish(FinishKind.END)


class TokenSource(str, Enum):
    SERVER = "server"
    ESTIMATED = "estimated"
    MIXED = "mixed"

    def combine(self, other: "TokenSource") -> "TokenSource":
        return self if self is other else TokenSource.MIXED


@dataclass(frozen=True)
class CompletionRequest:
    """
    The first stop string is the terminator the caller waits for; later ones
    end generation early.
    """

    prompt: str
    stop: Tuple[str, ...] = ()
    max_tokens: int = 16
    temperature: float = 0.0

    def __post_init__(self) -> None:
        if self.max_tokens < 1:
            raise ValueError(f"max_tokens must be >= 1, got {self.max_tokens}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if any(not s for s in self.stop):
            raise ValueError("stop strings must not be empty")


@dataclass(frozen=True)
class CompletionResponse:
    text: str
    finish: Finish
    tokens_generated: int
    token_source: TokenSource = TokenSource.ESTIMATED


def apply_stop(text: str, stop: Tuple[str, ...]) -> Tuple[str, Optional[str]]:
    """
    Cut `text` at the earliest occurrence of any stop string. Returns the
    kept text and the stop string matched, if any.
    """
    cut = len(text)
    matched: Optional[str] = None
    for candidate in stop:
        index = text.find(candidate)
        if index < 0:
            continue
        if matched is None or index < cut:
            cut, matched = index, candidate
        elif index == cut and len(candidate) > len(matched):
            matched = candidate
    if matched is None:
        return text, None
    return text[:cut], matched


##
## Backends
##


class BackendKind(str, Enum):
    MOCK = "mock"
    HTTP = "http"


@dataclass(frozen=True)
class BackendConfig:
    kind: BackendKind = BackendKind.MOCK
    endpoint: Optional[str] = None
    model: Optional[str] = None
    api_key_env: Optional[str] = None
    timeout: float = 60.0
    max_retries: int = 3
    backoff: float = 0.5
    script: Optional[str] = None

    def validate(self) -> "BackendConfig":
        kind = BackendKind(self.kind)
        if kind is BackendKind.HTTP and not (self.endpoint and self.model):
            raise ConfigError("http backend requires both endpoint and model")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be >= 0")
        if self.timeout <= 0:
            raise ConfigError("timeout must be > 0")
        return self


class Backend(abc.ABC):
    """
    Segment-level text completion: generate until a stop string, the token
    limit or the model's own end. Implementations are shared by all workers
    and must tolerate concurrent `complete` calls.
    """

    @abc.abstractmethod
    def complete(self, request: CompletionRequest) -> CompletionResponse:
        pass

    def close(self) -> None:
        pass

    def __enter__(self) -> "Backend":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()
