# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

"""
A deterministic completion backend driven by a script of rules.

The mock reads the document and the partial answer back out of each prompt,
works out which original line the answer has reached, and continues the
answer it "intends" to write: the original lines, each preceded by whatever
the first matching rule inserts before it, then the closing fence. Every
response is a pure function of the script and the request.
"""

import functools
import json
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import (
    Any,
    Callable,
    Dict,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from commentaug.core.lib import TypeCheckError, validate_fields
from commentaug.core.matchers import Any as AnyLine, InvalidPattern, matcher_from_spec
from commentaug.corpus.tokenizer import DEFAULT_TOKENIZER, Tokenizer
from commentaug.decoder.markdown import EOT, FENCE, split_prompt

from .lib import (
    apply_stop,
    Backend,
    CompletionRequest,
    CompletionResponse,
    END,
    Finish,
    LENGTH,
    TokenSource,
)


class Action(str, Enum):
    COMMENT = "comment"
    CODE = "code"
    NOTHING = "nothing"
    EOT = "eot"


class Calls(str, Enum):
    ALL = "all"
    FIRST = "first"


DEFAULT_CODE_TEXT = "x = 0"


@dataclass(frozen=True, eq=False)
class Rule:
    """
    Insert `text` before the code lines equal to `match`, in documents equal
    to `document`. `indent` prefixes every inserted line with the indentation
    of the code line. Blank lines are only considered when `blank` is set.
    First-call rules fire on the first request of a document only.
    """

    action: Action
    match: Any = field(default_factory=AnyLine)
    document: Any = field(default_factory=AnyLine)
    text: str = ""
    indent: bool = True
    blank: bool = False
    calls: Calls = Calls.ALL

    def applies_to(self, line: str, content: str) -> bool:
        if not self.blank and not line.strip():
            return False
        return self.match == line and self.document == content

    def render(self, line: str) -> str:
        if self.action is Action.NOTHING:
            return ""
        text = self.text
        if self.action is Action.CODE and not text:
            text = DEFAULT_CODE_TEXT
        prefix = line[: len(line) - len(line.lstrip())] if self.indent else ""
        return "".join(f"{prefix}{part}\n" for part in text.split("\n"))


class _Plan(NamedTuple):
    """
    What a script writes for one document: the text inserted before each
    original line, on later calls and on the first one.
    """

    lines: Tuple[str, ...]
    trailing: bool
    gaps: Tuple[str, ...]
    first_gap: str
    eot: bool


##
## Backend
##


class ScriptedBackend(Backend):
    def __init__(
        self,
        rules: Sequence[Rule],
        tokenizer: Optional[Tokenizer] = None,
        delay: Optional[Callable[[CompletionRequest], float]] = None,
    ) -> None:
        self.rules = tuple(rules)
        self.tokenizer = tokenizer or DEFAULT_TOKENIZER
        self.delay = delay
        self.calls = 0
        self._lock = threading.Lock()
        self._plan = functools.lru_cache(maxsize=256)(self._build_plan)

    def __repr__(self) -> str:
        return f"<ScriptedBackend rules={len(self.rules)}>"

    def complete(self, request: CompletionRequest) -> CompletionResponse:
        with self._lock:
            self.calls += 1
        if self.delay is not None:
            time.sleep(self.delay(request))
        return self.respond(self.continuation(request.prompt), request)

    def respond(
        self, continuation: str, request: CompletionRequest
    ) -> CompletionResponse:
        text, matched = apply_stop(continuation, request.stop)
        generated = text + (matched or "")
        if self.tokenizer.count(generated) > request.max_tokens:
            return CompletionResponse(
                text=self.tokenizer.truncate(text, request.max_tokens),
                finish=LENGTH,
                tokens_generated=request.max_tokens,
                token_source=TokenSource.ESTIMATED,
            )
        return CompletionResponse(
            text=text,
            finish=Finish.stopped(matched) if matched is not None else END,
            tokens_generated=self.tokenizer.count(generated),
            token_source=TokenSource.ESTIMATED,
        )

    def continuation(self, prompt: str) -> str:
        """
        The rest of the answer this script writes, given the partial answer
        carried by `prompt`.
        """
        parts = split_prompt(prompt)
        if parts is None:
            return ""
        plan = self._plan(parts.content)
        output = parts.output
        if not output and plan.eot:
            return EOT
        next_line, tail = _align(plan.lines, output)
        pieces = []
        for index in range(next_line, len(plan.lines)):
            gap = plan.first_gap if not output and index == 0 else plan.gaps[index]
            if index == next_line:
                gap = gap[len(tail) :] if gap.startswith(tail) else ""
            pieces.append(gap)
            pieces.append(plan.lines[index] + "\n")
        if plan.trailing:
            pieces.append("\n")
        pieces.append(FENCE)
        return "".join(pieces)

    def _build_plan(self, content: str) -> _Plan:
        lines = content.split("\n")
        trailing = len(lines) > 1 and content.endswith("\n")
        if trailing:
            lines.pop()
        return _Plan(
            lines=tuple(lines),
            trailing=trailing,
            gaps=tuple(self._gap(line, content, first=False) for line in lines),
            first_gap=self._gap(lines[0], content, first=True),
            eot=any(
                r.action is Action.EOT and r.document == content for r in self.rules
            ),
        )

    def _gap(self, line: str, content: str, first: bool) -> str:
        for rule in self.rules:
            if rule.action is Action.EOT:
                continue
            if rule.calls is Calls.FIRST and not first:
                continue
            if rule.applies_to(line, content):
                return rule.render(line)
        return ""


def _align(lines: Sequence[str], output: str) -> Tuple[int, str]:
    """
    Greedily match the completed lines of `output` against the original
    lines. Returns the index of the next original line and the text written
    since the last matched one.
    """
    completed = output.split("\n")
    partial = completed.pop()
    next_line = 0
    last_matched = -1
    for index, line in enumerate(completed):
        if next_line < len(lines) and line == lines[next_line]:
            next_line += 1
            last_matched = index
    tail = "".join(f"{line}\n" for line in completed[last_matched + 1 :]) + partial
    return next_line, tail


##
## Scripts
##

RULE_FIELDS = {"action": str}
OPTIONAL_RULE_FIELDS = {
    "match": Union[str, List[str], Dict[str, Any]],
    "document": Union[str, List[str], Dict[str, Any]],
    "text": str,
    "indent": bool,
    "blank": bool,
    "calls": str,
}


def rule_from_json(obj: Any) -> Rule:
    if not isinstance(obj, dict):
        raise InvalidPattern(f"Rule must be a JSON object, got {obj!r}")
    try:
        validate_fields(obj, RULE_FIELDS, OPTIONAL_RULE_FIELDS)
        action = Action(obj["action"])
        calls = Calls(obj.get("calls", Calls.ALL.value))
    except (TypeCheckError, ValueError) as error:
        raise InvalidPattern(f"Invalid rule {obj!r}: {error}")
    if action is Action.COMMENT and not obj.get("text"):
        raise InvalidPattern(f"Rule {obj!r} needs a non-empty text")
    return Rule(
        action=action,
        match=matcher_from_spec(obj.get("match", "any")),
        document=matcher_from_spec(obj.get("document", "any")),
        text=obj.get("text", ""),
        indent=obj.get("indent", True),
        blank=obj.get("blank", False),
        calls=Calls.FIRST if action is Action.EOT else calls,
    )


def mock_script(
    rules: Sequence[Union[Rule, Dict[str, Any]]],
    tokenizer: Optional[Tokenizer] = None,
    delay: Optional[Callable[[CompletionRequest], float]] = None,
) -> ScriptedBackend:
    return ScriptedBackend(
        [r if isinstance(r, Rule) else rule_from_json(r) for r in rules],
        tokenizer=tokenizer,
        delay=delay,
    )


def load_script(path: str, tokenizer: Optional[Tokenizer] = None) -> ScriptedBackend:
    try:
        with open(path, encoding="utf-8") as stream:
            rules = json.load(stream)
    except json.JSONDecodeError as error:
        raise InvalidPattern(f"{path}: invalid JSON: {error.msg}")
    if not isinstance(rules, list):
        raise InvalidPattern(f"{path}: a script is a JSON list of rules")
    return mock_script(rules, tokenizer=tokenizer)


class _RuleBuilder:
    def __init__(self, script: "ScriptBuilder", **fields: Any) -> None:
        self._script = script
        self._fields = fields

    def _add(self, action: Action, **fields: Any) -> "ScriptBuilder":
        self._script.rules.append(Rule(action=action, **self._fields, **fields))
        return self._script

    def comment(self, text: str, indent: bool = True) -> "ScriptBuilder":
        if not text:
            raise InvalidPattern("comment(...) needs a non-empty text")
        return self._add(Action.COMMENT, text=text, indent=indent)

    def code(self, text: str = DEFAULT_CODE_TEXT) -> "ScriptBuilder":
        return self._add(Action.CODE, text=text)

    def nothing(self) -> "ScriptBuilder":
        return self._add(Action.NOTHING)

    def eot(self) -> "ScriptBuilder":
        fields = dict(self._fields, calls=Calls.FIRST)
        self._script.rules.append(Rule(action=Action.EOT, **fields))
        return self._script


class ScriptBuilder:
    """
    Fluent construction of scripted backends:

        backend = (
            ScriptBuilder()
            .before(RegexMatches("^def ")).comment("# L")
            .on_first_call(document=StrContaining("junk")).eot()
            .build()
        )
    """

    def __init__(self) -> None:
        self.rules: List[Rule] = []

    def before(
        self, match: Any = None, document: Any = None, blank: bool = False
    ) -> _RuleBuilder:
        return _RuleBuilder(
            self,
            match=match if match is not None else AnyLine(),
            document=document if document is not None else AnyLine(),
            blank=blank,
        )

    def on_first_call(self, document: Any = None) -> _RuleBuilder:
        return _RuleBuilder(
            self,
            document=document if document is not None else AnyLine(),
            calls=Calls.FIRST,
        )

    def build(
        self,
        tokenizer: Optional[Tokenizer] = None,
        delay: Optional[Callable[[CompletionRequest], float]] = None,
    ) -> ScriptedBackend:
        return ScriptedBackend(self.rules, tokenizer=tokenizer, delay=delay)
