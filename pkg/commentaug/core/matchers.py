# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

"""
Composable string matchers, used by scripted backends to select the code
lines and documents a rule applies to.
"""

import functools
import re
from typing import Any as AnyType, Callable, Iterable, List, NoReturn


class InvalidPattern(ValueError):
    """
    Raised for malformed regular expressions or matcher specifications.
    """


class AlreadyChainedException(Exception):
    pass


class _AlreadyChainedMatcher:
    """
    Disallow further chaining of matchers with operators.
    """

    def __and__(self, other: object) -> NoReturn:
        raise AlreadyChainedException("Cannot chain more than two matchers")

    def __xor__(self, other: object) -> NoReturn:
        raise AlreadyChainedException("Cannot chain more than two matchers")

    def __invert__(self) -> NoReturn:
        raise AlreadyChainedException("Cannot chain more than two matchers")

    def __or__(self, other: object) -> NoReturn:
        raise AlreadyChainedException("Cannot chain more than two matchers")


class Matcher:
    """
    Compares equal to the strings it accepts. Matchers compose with bitwise
    operators.
    """

    def __and__(self, other: "Matcher") -> "_AndMatcher":
        return _AndMatcher(self, other)

    def __xor__(self, other: "Matcher") -> "_XorMatcher":
        return _XorMatcher(self, other)

    def __invert__(self) -> "_InvMatcher":
        return _InvMatcher(self)

    def __or__(self, other: "Matcher") -> "_OrMatcher":
        return _OrMatcher(self, other)


class _AndMatcher(_AlreadyChainedMatcher):
    def __init__(self, a: AnyType, b: AnyType) -> None:
        self.a = a
        self.b = b

    def __eq__(self, other: AnyType) -> bool:
        return self.a == other and self.b == other

    def __repr__(self) -> str:
        return f"{self.a} & {self.b}"


class _XorMatcher(_AlreadyChainedMatcher):
    def __init__(self, a: AnyType, b: AnyType) -> None:
        self.a = a
        self.b = b

    def __eq__(self, other: AnyType) -> bool:
        return (self.a == other) != (self.b == other)

    def __repr__(self) -> str:
        return f"{self.a} ^ {self.b}"


class _InvMatcher(_AlreadyChainedMatcher):
    def __init__(self, matcher: AnyType) -> None:
        self.matcher = matcher

    def __eq__(self, other: AnyType) -> bool:
        return not (self.matcher == other)

    def __repr__(self) -> str:
        return f"! {self.matcher}"


class _OrMatcher(_AlreadyChainedMatcher):
    def __init__(self, a: AnyType, b: AnyType) -> None:
        self.a = a
        self.b = b

    def __eq__(self, other: AnyType) -> bool:
        return self.a == other or self.b == other

    def __repr__(self) -> str:
        return f"{self.a} | {self.b}"


# strings


class Any(Matcher):
    def __eq__(self, other: AnyType) -> bool:
        return isinstance(other, str)

    def __repr__(self) -> str:
        return "<Any>"


class RegexMatches(Matcher):
    """
    Compares true if the regex matches anywhere in other.
    """

    def __init__(self, pattern: str, flags: int = 0) -> None:
        self.pattern = pattern
        self.flags = flags
        try:
            self.prog = re.compile(pattern, flags)
        except (re.error, TypeError) as error:
            raise InvalidPattern(f"{pattern!r}: {error}")

    def __eq__(self, other: AnyType) -> bool:
        if not isinstance(other, str):
            return False
        return bool(self.prog.search(other))

    def __repr__(self) -> str:
        return "<RegexMatches pattern={}{}>".format(
            repr(self.pattern),
            f" flags={self.flags}" if self.flags != 0 else "",
        )


class _StrMatcher(Matcher):
    def __init__(self, needle: str) -> None:
        if not isinstance(needle, str):
            raise InvalidPattern(
                f"{type(self).__name__}(...) expects a 'str' as argument while "
                f"'{type(needle).__name__}' was provided"
            )
        self.needle = needle

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.needle!r}>"


class StrContaining(_StrMatcher):
    def __eq__(self, other: AnyType) -> bool:
        return isinstance(other, str) and self.needle in other


class StrStartingWith(_StrMatcher):
    def __eq__(self, other: AnyType) -> bool:
        return isinstance(other, str) and other.lstrip().startswith(self.needle)


class StrEndingWith(_StrMatcher):
    def __eq__(self, other: AnyType) -> bool:
        return isinstance(other, str) and other.rstrip().endswith(self.needle)


class OneOf(Matcher):
    def __init__(self, values: Iterable[str]) -> None:
        self.values = frozenset(values)

    def __eq__(self, other: AnyType) -> bool:
        return other in self.values

    def __repr__(self) -> str:
        return f"<OneOf {sorted(self.values)!r}>"


class AnyWithCall(Matcher):
    def __init__(self, call: Callable[[str], bool]) -> None:
        self.call = call

    def __eq__(self, other: AnyType) -> bool:
        return bool(self.call(other))


##
## Specifications
##

_KEYED = {
    "regex": RegexMatches,
    "contains": StrContaining,
    "startswith": StrStartingWith,
    "endswith": StrEndingWith,
}


def matcher_from_spec(spec: AnyType) -> AnyType:
    """
    Build a matcher from its JSON form:

    - "any" or "*": every string.
    - any other string: a regex searched in the string.
    - a list of strings: exact values.
    - {"regex"|"contains"|"startswith"|"endswith": str}
    - {"not": spec}, {"all": [spec, ...]}, {"any_of": [spec, ...]}
    """
    if isinstance(spec, str):
        if spec in ("any", "*"):
            return Any()
        return RegexMatches(spec)
    if isinstance(spec, list):
        if not all(isinstance(value, str) for value in spec):
            raise InvalidPattern(f"Expected a list of strings, got {spec!r}")
        return OneOf(spec)
    if isinstance(spec, dict) and len(spec) == 1:
        ((key, value),) = spec.items()
        if key in _KEYED:
            return _KEYED[key](value)
        if key == "not":
            return _InvMatcher(matcher_from_spec(value))
        if key in ("all", "any_of") and isinstance(value, list) and value:
            parts: List[AnyType] = [matcher_from_spec(v) for v in value]
            combine = _AndMatcher if key == "all" else _OrMatcher
            return functools.reduce(combine, parts)
    raise InvalidPattern(f"Invalid matcher specification: {spec!r}")
