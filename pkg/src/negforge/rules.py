"""Ordered rewrite rules that flip sentence polarity.

A rule couples a tree pattern with an action list (move / replace / insert /
lemmatize) and a priority list naming which capture supplies the
unlikelihood token. Rules are tried in file order; the first whose pattern
matches is applied. Already-negative sentences are handled by early
un-negation rules, so the output always contradicts the input.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Iterator

from .conllu import ParsedSentence, Token
from .pattern import CompiledPattern, MatchResult, PatternError, compile_pattern

NOUN_TAGS = ("NOUN", "PROPN")
DEFAULT_RULES_RESOURCE = "default.json"


class RuleLoadError(ValueError):
    """Rule file rejected at load time; message names the offending rule."""


class ApplyError(ValueError):
    """A rule matched but its actions could not be applied."""


@dataclass(eq=False)
class OutToken:
    """One token of a transformed sentence."""

    form: str
    space_after: bool = True
    lemma: str = ""
    upos: str = "X"
    source_index: int | None = None
    source_form: str | None = None

    @classmethod
    def from_token(cls, token: Token) -> "OutToken":
        return cls(
            form=token.form,
            space_after=token.space_after,
            lemma=token.lemma,
            upos=token.upos,
            source_index=token.index,
            source_form=token.form,
        )


@dataclass(frozen=True)
class Action:
    kind: str  # move | replace | insert | lemmatize
    to_move: str | None = None
    to_replace: str | None = None
    token: str | None = None
    rel: str | None = None
    anchor: str | None = None
    position: str | None = None
    target: str = "A"

    def capture_refs(self) -> list[str]:
        refs = []
        if self.kind == "move":
            refs = [self.to_move, self.anchor]
        elif self.kind == "replace":
            refs = [self.to_replace]
        elif self.kind == "insert":
            refs = [self.anchor]
        elif self.kind == "lemmatize":
            refs = [self.target]
        return [r for r in refs if r is not None]


@dataclass(frozen=True)
class NegationRule:
    name: str
    pattern_source: str
    pattern: CompiledPattern = field(compare=False)
    actions: tuple[Action, ...] = ()
    ul_priority: tuple[str, ...] = ()


class RuleSet:
    """Immutable, ordered collection of rules plus provenance of its source bytes."""

    def __init__(self, rules: Iterable[NegationRule], sha256: str = "", source: str = "<memory>"):
        self.rules = tuple(rules)
        self.sha256 = sha256
        self.source = source

    def __iter__(self) -> Iterator[NegationRule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def names(self) -> list[str]:
        return [rule.name for rule in self.rules]


@dataclass(frozen=True)
class NegationOutcome:
    tokens: tuple[OutToken, ...]
    ul_index: int
    rule_name: str

    @property
    def ul_token(self) -> OutToken:
        return self.tokens[self.ul_index]


# ---------------------------------------------------------------------------
# Loading


_ACTION_FIELDS = {
    "move": {"type", "to_move", "anchor", "position"},
    "replace": {"type", "token", "to_replace"},
    "insert": {"type", "token", "rel", "anchor", "position"},
    "lemmatize": {"type", "target"},
}


def _parse_action(raw: dict, rule_name: str) -> Action:
    kind = raw.get("type")
    if kind not in _ACTION_FIELDS:
        raise RuleLoadError(f"rule {rule_name!r}: unknown action type {kind!r}")
    unknown = set(raw) - _ACTION_FIELDS[kind]
    if unknown:
        raise RuleLoadError(f"rule {rule_name!r}: unexpected action fields {sorted(unknown)}")
    if kind == "move":
        action = Action(kind, to_move=raw.get("to_move"), anchor=raw.get("anchor"),
                        position=raw.get("position"))
        if not action.to_move or not action.anchor:
            raise RuleLoadError(f"rule {rule_name!r}: move needs to_move and anchor")
    elif kind == "replace":
        if "token" not in raw or "to_replace" not in raw:
            raise RuleLoadError(f"rule {rule_name!r}: replace needs token and to_replace")
        action = Action(kind, token=raw["token"], to_replace=raw["to_replace"])
    elif kind == "insert":
        if not raw.get("token") or not raw.get("anchor"):
            raise RuleLoadError(f"rule {rule_name!r}: insert needs token and anchor")
        action = Action(kind, token=raw["token"], rel=raw.get("rel", "X"),
                        anchor=raw["anchor"], position=raw.get("position"))
    else:
        action = Action(kind, target=raw.get("target", "A"))
    if kind in ("move", "insert") and action.position not in ("before", "after"):
        raise RuleLoadError(
            f"rule {rule_name!r}: position must be 'before' or 'after', got {action.position!r}"
        )
    return action


def load_ruleset(text: str, source: str = "<string>") -> RuleSet:
    """Parse and validate a JSON rule file (an array of rule objects)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RuleLoadError(f"{source}: not valid JSON: {exc}") from None
    if not isinstance(data, list):
        raise RuleLoadError(f"{source}: expected a JSON array of rules")
    rules = []
    seen_names = set()
    for i, raw in enumerate(data):
        if not isinstance(raw, dict):
            raise RuleLoadError(f"{source}: rule #{i} is not an object")
        name = raw.get("name")
        if not name or not isinstance(name, str):
            raise RuleLoadError(f"{source}: rule #{i} has no name")
        if name in seen_names:
            raise RuleLoadError(f"duplicate rule name {name!r}")
        seen_names.add(name)
        pattern_source = raw.get("pattern")
        if not pattern_source:
            raise RuleLoadError(f"rule {name!r}: missing pattern")
        try:
            pattern = compile_pattern(pattern_source)
        except PatternError as exc:
            raise RuleLoadError(f"rule {name!r}: bad pattern: {exc}") from None
        actions = tuple(_parse_action(a, name) for a in raw.get("actions", []))
        ul_priority = tuple(raw.get("ul_priority", []))
        known = set(pattern.capture_names)
        for action in actions:
            for ref in action.capture_refs():
                if ref not in known:
                    raise RuleLoadError(
                        f"rule {name!r}: action references capture {ref!r} "
                        f"absent from pattern"
                    )
        for ref in ul_priority:
            if ref not in known:
                raise RuleLoadError(
                    f"rule {name!r}: ul_priority names unknown capture {ref!r}"
                )
        rules.append(NegationRule(name, pattern_source, pattern, actions, ul_priority))
    sha = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return RuleSet(rules, sha256=sha, source=source)


def load_ruleset_file(path) -> RuleSet:
    with open(path, encoding="utf-8") as handle:
        return load_ruleset(handle.read(), source=str(path))


def load_default_ruleset() -> RuleSet:
    resource = resources.files("negforge") / "rules" / DEFAULT_RULES_RESOURCE
    return load_ruleset(resource.read_text("utf-8"), source=f"negforge:rules/{DEFAULT_RULES_RESOURCE}")


# ---------------------------------------------------------------------------
# Application


def apply_actions(
    rule: NegationRule, sentence: ParsedSentence, match: MatchResult
) -> list[OutToken]:
    """Run the rule's actions in order on a working copy of the token list."""
    working = [OutToken.from_token(t) for t in sentence.tokens]
    by_capture: dict[str, OutToken] = {}
    for name, idx in match.captures.items():
        by_capture[name] = working[idx - 1]

    def resolve(name: str | None, action: Action) -> OutToken:
        token = by_capture.get(name)
        if token is None:
            raise ApplyError(
                f"rule {rule.name!r}: action {action.kind!r} references capture "
                f"{name!r} which is unbound in this match"
            )
        if id(token) not in _identity(working):
            raise ApplyError(
                f"rule {rule.name!r}: capture {name!r} was deleted by an earlier action"
            )
        return token

    for action in rule.actions:
        if action.kind == "move":
            token = resolve(action.to_move, action)
            anchor = resolve(action.anchor, action)
            _remove(working, token)
            _insert(working, anchor, token, action.position)
        elif action.kind == "replace":
            token = resolve(action.to_replace, action)
            if action.token == "":
                _remove(working, token)
            else:
                token.form = action.token
        elif action.kind == "insert":
            anchor = resolve(action.anchor, action)
            fresh = OutToken(form=action.token, lemma=action.token, upos=action.rel or "X")
            _insert(working, anchor, fresh, action.position)
        elif action.kind == "lemmatize":
            token = resolve(action.target, action)
            token.form = token.lemma
    return working


def _identity(tokens: list[OutToken]):
    return {id(t) for t in tokens}


def _remove(working: list[OutToken], token: OutToken):
    for i, t in enumerate(working):
        if t is token:
            del working[i]
            return
    raise ApplyError("token already removed")


def _insert(working: list[OutToken], anchor: OutToken, token: OutToken, position: str):
    for i, t in enumerate(working):
        if t is anchor:
            working.insert(i if position == "before" else i + 1, token)
            return
    raise ApplyError("anchor token not present")


def _surviving(working: list[OutToken], source_index: int) -> int | None:
    """Position in the working list of the unchanged survivor of a source token."""
    for i, t in enumerate(working):
        if t.source_index == source_index and t.form == t.source_form:
            return i
    return None


def select_rule(
    rules: RuleSet, sentence: ParsedSentence
) -> tuple[NegationRule, MatchResult] | None:
    for rule in rules:
        match = rule.pattern.first_match(sentence)
        if match is not None:
            return rule, match
    return None


def ul_candidates(
    rule: NegationRule, sentence: ParsedSentence, match: MatchResult
) -> Iterator[int]:
    """Source token indices to consider for the unlikelihood slot, best first."""
    seen = set()
    for name in (*rule.ul_priority, "object", "subject"):
        idx = match.captures.get(name)
        if idx is not None and idx not in seen:
            seen.add(idx)
            yield idx
    for token in sentence.tokens:
        if token.upos in NOUN_TAGS and token.index not in seen:
            seen.add(token.index)
            yield token.index
    for token in sentence.tokens:
        if token.upos != "PUNCT" and token.index not in seen:
            yield token.index


def negate(rules: RuleSet, sentence: ParsedSentence) -> NegationOutcome | None:
    """Polarity-flip a sentence with the first matching rule; None when none match.

    The unlikelihood token is the first priority candidate that survives the
    actions with its surface form intact.
    """
    selected = select_rule(rules, sentence)
    if selected is None:
        return None
    rule, match = selected
    working = apply_actions(rule, sentence, match)
    for source_idx in ul_candidates(rule, sentence, match):
        position = _surviving(working, source_idx)
        if position is not None:
            return NegationOutcome(tuple(working), position, rule.name)
    raise ApplyError(
        f"rule {rule.name!r}: no token survives unchanged to serve as the "
        f"unlikelihood token in {sentence.sent_id!r}"
    )


def render(tokens, recapitalize: bool = False) -> str:
    """Join token forms, honoring space_after; no recapitalization by default."""
    parts = []
    items = list(tokens)
    for i, token in enumerate(items):
        parts.append(token.form)
        if token.space_after and i != len(items) - 1:
            parts.append(" ")
    text = "".join(parts)
    if recapitalize and text and text[0].islower():
        text = text[0].upper() + text[1:]
    return text


def coverage_stats(
    rules: RuleSet, corpus: Iterable[ParsedSentence]
) -> tuple[dict[str, int], int]:
    """Per-rule sentence counts (first matching rule wins) plus the unmatched count."""
    counts = {rule.name: 0 for rule in rules}
    unmatched = 0
    for sentence in corpus:
        selected = select_rule(rules, sentence)
        if selected is None:
            unmatched += 1
        else:
            counts[selected[0].name] += 1
    return counts, unmatched
