"""Dependency-tree pattern compiler and matcher.

The pattern dialect covers node constraints in braces, child edges, optional
child edges, parenthesized groups with ``$++`` ordering between siblings, and
named captures with unification:

    {$;tag:/VB.*/}=A >/advmod|cc/ {word:/never|no/}=npi ?>obj {tag:/NN.*/}=object
    {$;cpos:/.*Tense=Past.*/}=A >/nsubj|csubj/=E {}=subject

Node attributes: ``word`` (surface form), ``lemma``, ``tag`` (language-specific
POS), ``pos`` (universal POS), ``cpos`` (universal POS joined with the
serialized feature string, so ``/.*Tense=Past.*/`` selects past-tense forms).
``$`` marks the tree root (head 0). All regexes are whole-string matches.

Edges chain off the node they follow: ``{}=A >x {} >y {}`` constrains two
children of A. A parenthesized target may contain ``$++`` chains; ``a $++ b``
requires a and b to share a head with a strictly before b. ``=name`` directly
after an edge relation names the edge and is otherwise inert.

Optional edges (``?>``) bind their captures whenever some complete match can
bind them, and are left absent otherwise; they never cause match failure.
When several optional edges interact through shared capture names they are
resolved left to right, preferring bound.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .conllu import ParsedSentence, Token

ATTRIBUTES = ("word", "lemma", "tag", "pos", "cpos")


class PatternError(ValueError):
    """Pattern syntax or regex error, with the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"at position {pos}: {message}")
        self.pos = pos


@dataclass(frozen=True)
class NodeConstraint:
    is_root: bool = False
    attrs: tuple[tuple[str, re.Pattern], ...] = ()

    def satisfied_by(self, token: Token) -> bool:
        if self.is_root and token.head != 0:
            return False
        for attr, regex in self.attrs:
            if regex.fullmatch(_attr_value(token, attr)) is None:
                return False
        return True


def _attr_value(token: Token, attr: str) -> str:
    if attr == "word":
        return token.form
    if attr == "lemma":
        return token.lemma
    if attr == "tag":
        return token.xpos
    if attr == "pos":
        return token.upos
    if attr == "cpos":
        return token.cpos
    raise ValueError(f"unknown attribute {attr!r}")


@dataclass
class PatternNode:
    constraint: NodeConstraint
    name: str | None = None
    edges: list["Edge"] = field(default_factory=list)


@dataclass
class Edge:
    optional: bool
    rel_label: str | None  # exact deprel, or
    rel_regex: re.Pattern | None  # whole-string deprel regex
    rel_name: str | None  # '=name' after the relation; inert
    group: list[PatternNode]  # group[i] $++ group[i+1]; group[0] is the child

    def rel_matches(self, deprel: str) -> bool:
        if self.rel_label is not None:
            return deprel == self.rel_label
        return self.rel_regex.fullmatch(deprel) is not None


@dataclass(frozen=True)
class MatchResult:
    """Named-capture bindings of one pattern match (token indices, 1-based)."""

    captures: dict[str, int]
    anchor: int

    def form(self, sentence: ParsedSentence, name: str) -> str:
        return sentence.token(self.captures[name]).form


class CompiledPattern:
    """An immutable compiled pattern; matching is pure and thread-safe."""

    def __init__(self, root: PatternNode, source: str):
        self.root = root
        self.source = source
        self.capture_names = tuple(sorted(self._collect_names(root)))

    @staticmethod
    def _collect_names(node: PatternNode) -> set[str]:
        names = set()
        stack = [node]
        while stack:
            cur = stack.pop()
            if cur.name:
                names.add(cur.name)
            for edge in cur.edges:
                stack.extend(edge.group)
        return names

    def match_all(self, sentence: ParsedSentence) -> list[MatchResult]:
        return match_all(self, sentence)

    def first_match(self, sentence: ParsedSentence) -> MatchResult | None:
        return first_match(self, sentence)


# ---------------------------------------------------------------------------
# Parsing


class _Parser:
    ATTR = re.compile(r"[A-Za-z_]+")
    NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
    LABEL = re.compile(r"[A-Za-z_][A-Za-z0-9_:]*")  # exact deprels may carry ':'

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> PatternError:
        return PatternError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str):
        if self.peek() != char:
            raise self.error(f"expected {char!r}, found {self.peek()!r}")
        self.pos += 1

    def parse_pattern(self) -> PatternNode:
        self.skip_ws()
        node = self.parse_node_expr()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error(f"unexpected trailing input {self.text[self.pos:]!r}")
        return node

    def parse_node_expr(self) -> PatternNode:
        node = self.parse_node()
        while True:
            self.skip_ws()
            if self.peek() == "?" or self.peek() == ">":
                node.edges.append(self.parse_edge())
            else:
                return node

    def parse_node(self) -> PatternNode:
        self.skip_ws()
        self.expect("{")
        is_root = False
        attrs: list[tuple[str, re.Pattern]] = []
        self.skip_ws()
        if self.peek() != "}":
            while True:
                self.skip_ws()
                if self.peek() == "$":
                    self.pos += 1
                    is_root = True
                else:
                    attrs.append(self.parse_attr())
                self.skip_ws()
                if self.peek() == ";":
                    self.pos += 1
                    continue
                break
        self.expect("}")
        name = self.parse_name()
        return PatternNode(NodeConstraint(is_root=is_root, attrs=tuple(attrs)), name)

    def parse_attr(self) -> tuple[str, re.Pattern]:
        match = self.ATTR.match(self.text, self.pos)
        if not match:
            raise self.error("expected attribute name")
        attr = match.group(0)
        if attr not in ATTRIBUTES:
            raise self.error(f"unknown attribute {attr!r} (expected one of {ATTRIBUTES})")
        self.pos = match.end()
        self.skip_ws()
        self.expect(":")
        self.skip_ws()
        return attr, self.parse_regex()

    def parse_regex(self) -> re.Pattern:
        self.expect("/")
        start = self.pos
        chunks = []
        while True:
            if self.pos >= len(self.text):
                raise self.error("unterminated regex")
            char = self.text[self.pos]
            if char == "\\" and self.pos + 1 < len(self.text) and self.text[self.pos + 1] == "/":
                chunks.append("/")
                self.pos += 2
                continue
            if char == "/":
                self.pos += 1
                break
            chunks.append(char)
            self.pos += 1
        source = "".join(chunks)
        try:
            return re.compile(source)
        except re.error as exc:
            raise PatternError(f"bad regular expression {source!r}: {exc}", start) from None

    def parse_name(self) -> str | None:
        self.skip_ws()
        if self.peek() != "=":
            return None
        self.pos += 1
        self.skip_ws()
        match = self.NAME.match(self.text, self.pos)
        if not match:
            raise self.error("expected capture name after '='")
        self.pos = match.end()
        return match.group(0)

    def parse_edge(self) -> Edge:
        optional = False
        if self.peek() == "?":
            optional = True
            self.pos += 1
            self.skip_ws()
        self.expect(">")
        self.skip_ws()
        rel_label = None
        rel_regex = None
        if self.peek() == "/":
            rel_regex = self.parse_regex()
        else:
            match = self.LABEL.match(self.text, self.pos)
            if not match:
                raise self.error("expected relation label or /regex/ after '>'")
            rel_label = match.group(0)
            self.pos = match.end()
        rel_name = self.parse_name()
        self.skip_ws()
        if self.peek() == "(":
            group = self.parse_group()
        else:
            group = [self.parse_node_expr_atom()]
        return Edge(optional, rel_label, rel_regex, rel_name, group)

    def parse_node_expr_atom(self) -> PatternNode:
        # a bare edge target: one node without further chained edges,
        # since unparenthesized edges belong to the governing node
        return self.parse_node()

    def parse_group(self) -> list[PatternNode]:
        self.expect("(")
        members = [self.parse_node_expr()]
        while True:
            self.skip_ws()
            if self.text.startswith("$++", self.pos):
                self.pos += 3
                members.append(self.parse_node_expr())
                continue
            break
        self.expect(")")
        return members


def compile_pattern(pattern_text: str) -> CompiledPattern:
    """Compile pattern text, raising PatternError on any syntax or regex fault."""
    root = _Parser(pattern_text).parse_pattern()
    return CompiledPattern(root, pattern_text)


# ---------------------------------------------------------------------------
# Matching


def match_all(pattern: CompiledPattern, sentence: ParsedSentence) -> list[MatchResult]:
    """All distinct capture assignments, ordered by anchor index then capture indices.

    Backtracking depth-first search. A repeated capture name must bind the
    same token in every slot. Results are deduplicated on (anchor, capture map).
    """
    raw: list[tuple[int, dict[str, int]]] = []
    for token in sentence.tokens:
        for bindings in _match_node(pattern.root, token.index, sentence, {}):
            raw.append((token.index, bindings))

    def sort_key(item):
        anchor, captures = item
        return (anchor, tuple(captures.get(n, 0) for n in pattern.capture_names))

    raw.sort(key=sort_key)
    results = []
    seen = set()
    for anchor, captures in raw:
        key = (anchor, frozenset(captures.items()))
        if key in seen:
            continue
        seen.add(key)
        results.append(MatchResult(captures=captures, anchor=anchor))
    return results


def first_match(pattern: CompiledPattern, sentence: ParsedSentence) -> MatchResult | None:
    results = match_all(pattern, sentence)
    return results[0] if results else None


def _bind_name(bindings: dict[str, int], name: str | None, idx: int) -> dict[str, int] | None:
    if name is None:
        return bindings
    bound = bindings.get(name)
    if bound is None:
        new = dict(bindings)
        new[name] = idx
        return new
    return bindings if bound == idx else None


def _match_node(node: PatternNode, idx: int, sentence, bindings) -> list[dict[str, int]]:
    token = sentence.token(idx)
    if not node.constraint.satisfied_by(token):
        return []
    unified = _bind_name(bindings, node.name, idx)
    if unified is None:
        return []
    return _satisfy_edges(node.edges, 0, idx, sentence, unified)


def _satisfy_edges(edges, i, governor_idx, sentence, bindings) -> list[dict[str, int]]:
    if i == len(edges):
        return [bindings]
    edge = edges[i]
    results: list[dict[str, int]] = []
    for child_idx in sentence.children_of(governor_idx):
        if not edge.rel_matches(sentence.token(child_idx).deprel):
            continue
        for group_bindings in _match_group(edge.group, child_idx, sentence, bindings):
            results.extend(_satisfy_edges(edges, i + 1, governor_idx, sentence, group_bindings))
    if results or not edge.optional:
        return results
    return _satisfy_edges(edges, i + 1, governor_idx, sentence, bindings)


def _match_group(group, head_idx, sentence, bindings) -> list[dict[str, int]]:
    states = [(head_idx, b) for b in _match_node(group[0], head_idx, sentence, bindings)]
    for member in group[1:]:
        next_states = []
        for prev_idx, prev_bindings in states:
            prev_head = sentence.token(prev_idx).head
            for tok in sentence.tokens:
                if tok.head != prev_head or tok.index <= prev_idx:
                    continue
                for new_bindings in _match_node(member, tok.index, sentence, prev_bindings):
                    next_states.append((tok.index, new_bindings))
        states = next_states
    return [b for _, b in states]
