"""RST constituency trees: data model, s-expression reader/writer, validation.

File grammar (UTF-8, ``.rst.sexp``)::

    node  := edu | ns | multi
    edu   := (edu <int> "<text>")
    ns    := (ns <label> (n <node>) (s <node>))     ; (s ..)(n ..) also accepted
    multi := (multi <label> <node> <node>+)

Strings are double-quoted with ``\\"`` and ``\\\\`` as the only escapes and
``;`` starts a comment running to end of line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .exceptions import RstFormatError

__all__ = [
    "Edu",
    "Leaf",
    "NucSat",
    "Multi",
    "RstTree",
    "normalize_label",
    "parse_rst",
    "serialize_rst",
    "validate",
    "read_rst_file",
]


@dataclass(frozen=True)
class Edu:
    id: int
    text: str = ""


@dataclass(frozen=True)
class Leaf:
    edu: Edu


@dataclass(frozen=True)
class NucSat:
    """Mononuclear relation.

    ``nucleus_first`` records text order: True when the nucleus span precedes
    the satellite in the document.
    """

    relation: str
    nucleus: "RstNode"
    satellite: "RstNode"
    nucleus_first: bool = True

    @property
    def children(self):
        if self.nucleus_first:
            return (self.nucleus, self.satellite)
        return (self.satellite, self.nucleus)


@dataclass(frozen=True)
class Multi:
    relation: str
    nuclei: tuple

    @property
    def children(self):
        return self.nuclei


RstNode = Union[Leaf, NucSat, Multi]


def _children(node):
    if isinstance(node, Leaf):
        return ()
    return node.children


def iter_leaves(node) -> Iterator[Leaf]:
    """Leaves in text order (left to right)."""
    stack = [node]
    while stack:
        current = stack.pop()
        if isinstance(current, Leaf):
            yield current
        else:
            stack.extend(reversed(_children(current)))


@dataclass(frozen=True)
class RstTree:
    root: RstNode

    @property
    def edu_count(self) -> int:
        return sum(1 for _ in iter_leaves(self.root))

    @property
    def edus(self) -> list:
        return [leaf.edu for leaf in iter_leaves(self.root)]

    def __iter__(self):
        return iter_leaves(self.root)


_LABEL_RE = re.compile(r"^[^\s()\";]+$")


def normalize_label(label: str) -> str:
    name = label.strip().lower()
    if not name or not _LABEL_RE.match(name):
        raise ValueError(f"invalid relation label {label!r}")
    return name


# -- reader ---------------------------------------------------------------

_OPEN, _CLOSE, _STRING, _ATOM = "(", ")", "string", "atom"


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch == "(":
            tokens.append((_OPEN, "(", i))
            i += 1
        elif ch == ")":
            tokens.append((_CLOSE, ")", i))
            i += 1
        elif ch == '"':
            start = i
            i += 1
            buf = []
            while True:
                if i >= n:
                    raise RstFormatError("unterminated string", start)
                ch = text[i]
                if ch == "\\":
                    if i + 1 >= n or text[i + 1] not in '"\\':
                        raise RstFormatError("invalid escape in string", i)
                    buf.append(text[i + 1])
                    i += 2
                elif ch == '"':
                    i += 1
                    break
                else:
                    buf.append(ch)
                    i += 1
            tokens.append((_STRING, "".join(buf), start))
        else:
            start = i
            while i < n and not text[i].isspace() and text[i] not in '();"':
                i += 1
            tokens.append((_ATOM, text[start:i], start))
    return tokens


class _Reader:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.end = len(text)

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return (None, None, self.end)

    def next(self, kind=None, what=None):
        tok = self.peek()
        if tok[0] is None:
            raise RstFormatError(f"unexpected end of input, expected {what or kind}", self.end)
        if kind is not None and tok[0] != kind:
            raise RstFormatError(f"expected {what or kind}, got {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def node(self):
        self.next(_OPEN, "'('")
        _, keyword, at = self.next(_ATOM, "node keyword")
        if keyword == "edu":
            _, raw_id, id_at = self.next(_ATOM, "EDU id")
            try:
                edu_id = int(raw_id)
            except ValueError:
                raise RstFormatError(f"EDU id must be an integer, got {raw_id!r}", id_at) from None
            _, text, _ = self.next(_STRING, "quoted EDU text")
            self.next(_CLOSE, "')'")
            return Leaf(Edu(edu_id, text))
        if keyword == "ns":
            relation = self.label()
            first_role, first = self.role()
            second_role, second = self.role()
            self.next(_CLOSE, "')'")
            if {first_role, second_role} != {"n", "s"}:
                raise RstFormatError("ns node needs exactly one (n ..) and one (s ..)", at)
            if first_role == "n":
                return NucSat(relation, first, second, nucleus_first=True)
            return NucSat(relation, second, first, nucleus_first=False)
        if keyword == "multi":
            relation = self.label()
            nuclei = []
            while self.peek()[0] == _OPEN:
                nuclei.append(self.node())
            self.next(_CLOSE, "')'")
            if len(nuclei) < 2:
                raise RstFormatError(f"multi node needs at least 2 children, got {len(nuclei)}", at)
            return Multi(relation, tuple(nuclei))
        raise RstFormatError(f"unknown node keyword {keyword!r}", at)

    def label(self):
        _, raw, at = self.next(_ATOM, "relation label")
        try:
            return normalize_label(raw)
        except ValueError as exc:
            raise RstFormatError(str(exc), at) from None

    def role(self):
        self.next(_OPEN, "'(n' or '(s'")
        _, role, at = self.next(_ATOM, "role")
        if role not in ("n", "s"):
            raise RstFormatError(f"expected role 'n' or 's', got {role!r}", at)
        child = self.node()
        self.next(_CLOSE, "')'")
        return role, child


def parse_rst(data) -> RstTree:
    """Parse one tree from ``bytes`` or ``str``; raises :class:`RstFormatError`."""
    if isinstance(data, (bytes, bytearray)):
        try:
            text = bytes(data).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise RstFormatError("input is not valid UTF-8", exc.start) from None
    else:
        text = data
    reader = _Reader(text)
    root = reader.node()
    leftover = reader.peek()
    if leftover[0] is not None:
        raise RstFormatError(f"trailing input {leftover[1]!r}", leftover[2])
    tree = RstTree(root)
    for violation in validate(tree):
        raise RstFormatError(violation)
    return tree


def read_rst_file(path) -> RstTree:
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        return parse_rst(data)
    except RstFormatError as exc:
        raise RstFormatError(f"{path}: {exc}") from None


# -- writer ---------------------------------------------------------------


def _quote(text):
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _emit(node, indent):
    if isinstance(node, Leaf):
        return f"(edu {node.edu.id} {_quote(node.edu.text)})"
    inner = indent + "  "
    if isinstance(node, NucSat):
        parts = [f"(ns {node.relation}"]
        roles = ("n", "s") if node.nucleus_first else ("s", "n")
        for role, child in zip(roles, node.children):
            parts.append(f"\n{inner}({role} {_emit(child, inner + '   ')})")
    else:
        parts = [f"(multi {node.relation}"]
        for child in node.nuclei:
            parts.append(f"\n{inner}{_emit(child, inner)}")
    parts.append(")")
    return "".join(parts)


def serialize_rst(tree: RstTree) -> bytes:
    """Canonical form: children in text order, two-space indentation, no
    trailing newline."""
    return _emit(tree.root, "").encode("utf-8")


# -- validation -----------------------------------------------------------


def validate(tree: RstTree) -> list:
    """Return a list of human-readable invariant violations (empty if valid)."""
    violations = []
    seen = set()
    ids = []
    stack = [tree.root]
    nodes = edges = 0
    while stack:
        node = stack.pop()
        if id(node) in seen:
            violations.append("node reachable more than once (shared subtree or cycle)")
            continue
        seen.add(id(node))
        nodes += 1
        if isinstance(node, Leaf):
            if not isinstance(node.edu, Edu) or not isinstance(node.edu.id, int):
                violations.append(f"malformed leaf {node!r}")
            continue
        if isinstance(node, NucSat):
            kids = [node.nucleus, node.satellite]
        elif isinstance(node, Multi):
            kids = list(node.nuclei)
            if len(kids) < 2:
                violations.append(
                    f"arity: multi node '{node.relation}' has {len(kids)} child(ren), needs >= 2"
                )
        else:
            violations.append(f"unknown node type {type(node).__name__}")
            continue
        if not node.relation or node.relation != node.relation.lower():
            violations.append(f"relation label {node.relation!r} is not normalized")
        edges += len(kids)
        stack.extend(kids)
    if violations:
        return violations
    if nodes != edges + 1:
        violations.append(f"not a tree: {nodes} nodes but {edges} edges")
    ids = [leaf.edu.id for leaf in iter_leaves(tree.root)]
    expected = list(range(1, len(ids) + 1))
    if ids != expected:
        if sorted(ids) == expected:
            violations.append(f"EDU ids {ids} are not in leaf order")
        elif len(set(ids)) != len(ids):
            violations.append(f"EDU ids {ids} contain duplicates")
        else:
            violations.append(f"id-gap: EDU ids {ids} are not exactly 1..{len(ids)}")
    return violations
