# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

import abc
import re

_TOKEN = re.compile(r"\S+")
_LEADING_TOKEN = re.compile(r"\s*\S+")


class Tokenizer(abc.ABC):
    """
    Token accounting used by statistics, length prefiltering and the
    decoder's generated/copied counters.
    """

    name = "abstract"

    @abc.abstractmethod
    def count(self, text: str) -> int:
        pass

    @abc.abstractmethod
    def truncate(self, text: str, max_tokens: int) -> str:
        """
        Return the longest prefix of `text` holding at most `max_tokens`
        tokens.
        """
        pass


class WhitespaceTokenizer(Tokenizer):
    """
    One token per run of non-whitespace characters. A truncated prefix keeps
    the whitespace leading each kept run, so truncating and continuing
    concatenates back to the original text.
    """

    name = "whitespace"

    def count(self, text: str) -> int:
        return sum(1 for _ in _TOKEN.finditer(text))

    def truncate(self, text: str, max_tokens: int) -> str:
        if max_tokens <= 0:
            return ""
        end = 0
        for index, match in enumerate(_LEADING_TOKEN.finditer(text)):
            if index == max_tokens:
                return text[:end]
            end = match.end()
        return text


DEFAULT_TOKENIZER: Tokenizer = WhitespaceTokenizer()
