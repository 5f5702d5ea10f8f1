# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

import logging
import os
import time
from typing import Any, Callable, Dict, Optional

import httpx

from commentaug.corpus.tokenizer import DEFAULT_TOKENIZER, Tokenizer

from .lib import (
    apply_stop,
    Backend,
    BackendConfig,
    BackendError,
    BackendStatusError,
    CompletionRequest,
    CompletionResponse,
    END,
    Finish,
    is_retryable,
    LENGTH,
    RateLimited,
    TokenSource,
    TransportError,
)

logger = logging.getLogger(__name__)

COMPLETIONS_PATH = "/v1/completions"
EXCERPT_LENGTH = 200


def _retry_after(response: httpx.Response) -> Optional[float]:
    value = response.headers.get("Retry-After")
    if value is None:
        return None
    try:
        return max(0.0, float(value))
    except ValueError:
        return None


class HttpBackend(Backend):
    """
    Client for OpenAI-compatible `/v1/completions` servers (vLLM, LMDeploy,
    llama.cpp server, ...). The API key is read from the environment variable
    named by the config on every request and never stored or logged.
    """

    def __init__(
        self,
        config: BackendConfig,
        tokenizer: Optional[Tokenizer] = None,
        transport: Optional[httpx.BaseTransport] = None,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        self.config = config.validate()
        self.tokenizer = tokenizer or DEFAULT_TOKENIZER
        self._sleep = sleep
        self._client = httpx.Client(
            base_url=(config.endpoint or "").rstrip("/"),
            timeout=config.timeout,
            transport=transport,
        )

    def __repr__(self) -> str:
        return "<HttpBackend endpoint={!r} model={!r}>".format(
            self.config.endpoint, self.config.model
        )

    def close(self) -> None:
        self._client.close()

    def payload(self, request: CompletionRequest) -> Dict[str, Any]:
        return {
            "model": self.config.model,
            "prompt": request.prompt,
            "max_tokens": request.max_tokens,
            "temperature": request.temperature,
            "stop": list(request.stop),
        }

    def _headers(self) -> Dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.config.api_key_env:
            api_key = os.environ.get(self.config.api_key_env)
            if api_key:
                headers["Authorization"] = f"Bearer {api_key}"
            else:
                logger.warning(
                    "Environment variable %s is not set, sending no API key",
                    self.config.api_key_env,
                )
        return headers

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        attempt = 0
        while True:
            try:
                return self._complete_once(request)
            except BackendError as error:
                if not is_retryable(error) or attempt >= self.config.max_retries:
                    raise
                delay = self._backoff(attempt, error)
                logger.info(
                    "Retrying completion (attempt %d/%d) in %.2fs: %s",
                    attempt + 1,
                    self.config.max_retries,
                    delay,
                    error,
                )
                self._sleep(delay)
                attempt += 1

    def _backoff(self, attempt: int, error: BackendError) -> float:
        if isinstance(error, RateLimited) and error.retry_after is not None:
            return error.retry_after
        return self.config.backoff * (2**attempt)

    def _complete_once(self, request: CompletionRequest) -> CompletionResponse:
        try:
            response = self._client.post(
                COMPLETIONS_PATH, json=self.payload(request), headers=self._headers()
            )
        except httpx.TransportError as error:
            raise TransportError(f"{type(error).__name__}: {error}", retryable=True)
        status = response.status_code
        if status == 429:
            raise RateLimited(_retry_after(response))
        if status >= 500:
            raise TransportError(f"Server error {status}", retryable=True)
        if status >= 400:
            raise BackendStatusError(status, response.text[:EXCERPT_LENGTH])
        try:
            body = response.json()
            choice = body["choices"][0]
            text = choice["text"]
            if not isinstance(text, str):
                raise TypeError("choices[0].text is not a string")
        except (ValueError, KeyError, IndexError, TypeError):
            raise BackendStatusError(status, response.text[:EXCERPT_LENGTH])
        return self._parse(request, body, choice, text)

    def _parse(
        self,
        request: CompletionRequest,
        body: Dict[str, Any],
        choice: Dict[str, Any],
        text: str,
    ) -> CompletionResponse:
        text, matched = apply_stop(text, request.stop)
        reason = choice.get("finish_reason")
        stop_reason = choice.get("stop_reason")
        if matched is not None:
            finish = Finish.stopped(matched)
        elif reason == "length":
            finish = LENGTH
        elif isinstance(stop_reason, str) and stop_reason in request.stop:
            finish = Finish.stopped(stop_reason)
        elif reason == "stop" and "stop_reason" not in choice and request.stop:
            # Servers that omit the matched string stopped on the primary one.
            finish = Finish.stopped(request.stop[0])
        else:
            finish = END
        usage = body.get("usage")
        completion_tokens = (
            usage.get("completion_tokens") if isinstance(usage, dict) else None
        )
        if isinstance(completion_tokens, int) and completion_tokens >= 0:
            return CompletionResponse(
                text, finish, completion_tokens, TokenSource.SERVER
            )
        return CompletionResponse(
            text, finish, self.tokenizer.count(text), TokenSource.ESTIMATED
        )
