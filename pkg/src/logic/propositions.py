"""
Causal propositions and their surface syntax.

Grammar (loosest binding first, '->' associates to the right):

    prop  := disj ('->' prop)?
    disj  := conj ('|' conj)*
    conj  := unary ('&' unary)*
    unary := '~' unary | '(' prop ')' | 'false' | 'true' | NAME '<' NAME | NAME
"""
import re
from dataclasses import dataclass
from typing import Union

from ..utils.errors import ParseError


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Prec:
    """Party `a` strictly precedes party `b`."""
    a: str
    b: str


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class And:
    left: "Proposition"
    right: "Proposition"


@dataclass(frozen=True)
class Or:
    left: "Proposition"
    right: "Proposition"


@dataclass(frozen=True)
class Implies:
    left: "Proposition"
    right: "Proposition"


Proposition = Union[Atom, Prec, Bottom, And, Or, Implies]
BOTTOM = Bottom()


def Not(phi):
    return Implies(phi, BOTTOM)


def is_negation(phi):
    return isinstance(phi, Implies) and isinstance(phi.right, Bottom)


def atoms_of(phi):
    """Atom and Prec leaves of a proposition, in first-occurrence order."""
    found = []

    def walk(node):
        if isinstance(node, (Atom, Prec)):
            if node not in found:
                found.append(node)
        elif isinstance(node, (And, Or, Implies)):
            walk(node.left)
            walk(node.right)

    walk(phi)
    return found


def depth(phi):
    if isinstance(phi, (And, Or, Implies)):
        return 1 + max(depth(phi.left), depth(phi.right))
    return 0


def render_proposition(phi, _parent=0):
    """Canonical text; parses back to the same tree."""
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Prec):
        return f"{phi.a}<{phi.b}"
    if isinstance(phi, Bottom):
        return "false"
    if is_negation(phi):
        return "~" + render_proposition(phi.left, 4)
    level, op = {And: (3, " & "), Or: (2, " | "), Implies: (1, " -> ")}[type(phi)]
    if isinstance(phi, Implies):
        text = render_proposition(phi.left, level + 1) + op + render_proposition(phi.right, level)
    else:
        text = render_proposition(phi.left, level) + op + render_proposition(phi.right, level + 1)
    return f"({text})" if level < _parent else text


_TOKEN = re.compile(r"(->)|([~&|()<])|([A-Za-z_][A-Za-z0-9_]*)")


def _tokenize(text, line=None):
    # Tokens are (kind, value, 1-based column)
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = "name" if m.group(3) else "op"
        tokens.append((kind, m.group(0), pos + 1))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text, line):
        self.tokens = _tokenize(text, line)
        self.i = 0
        self.line = line

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        kind, val, col = self.tokens[self.i]
        if value is not None and val != value:
            shown = val or "end of input"
            raise ParseError(f"expected {value!r} but found {shown!r}", self.line, col)
        self.i += 1
        return kind, val, col

    def prop(self):
        left = self.disj()
        if self.peek()[1] == "->":
            self.take("->")
            return Implies(left, self.prop())
        return left

    def disj(self):
        node = self.conj()
        while self.peek()[1] == "|":
            self.take("|")
            node = Or(node, self.conj())
        return node

    def conj(self):
        node = self.unary()
        while self.peek()[1] == "&":
            self.take("&")
            node = And(node, self.unary())
        return node

    def unary(self):
        kind, val, col = self.peek()
        if val == "~":
            self.take()
            return Not(self.unary())
        if val == "(":
            self.take()
            node = self.prop()
            self.take(")")
            return node
        if kind == "name":
            self.take()
            if val == "false":
                return BOTTOM
            if val == "true":
                return Implies(BOTTOM, BOTTOM)
            if self.peek()[1] == "<":
                self.take("<")
                kind2, other, col2 = self.take()
                if kind2 != "name":
                    raise ParseError(f"expected a party name after '<' but found {other or 'end of input'!r}",
                                     self.line, col2)
                if other == val:
                    raise ParseError(f"order proposition needs two distinct parties, got {val}<{other}",
                                     self.line, col)
                return Prec(val, other)
            return Atom(val)
        shown = val or "end of input"
        raise ParseError(f"unexpected {shown!r}", self.line, col)


def parse_proposition(text, line=None):
    """Parse the CLI surface syntax (`A<B`, `~p`, `p & q`, `p | q`, `p -> q`, `false`)."""
    parser = _Parser(text, line)
    node = parser.prop()
    kind, val, col = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r} after proposition", line, col)
    return node
