"""Parsing, printing, and evaluation of group words.

Grammar (precedence high to low):

    atom  := name | "1" | "(" expr ")" | "[" expr "," expr "]"
    power := atom ("^" (integer | atom))*
    expr  := power ("*" power)*

``a^n`` with integer n is the n-th power; ``a^b`` with a word b is the
conjugate b^-1 * a * b; ``[a,b]`` is the commutator a^-1 * b^-1 * a * b.
The caret chains to the left: ``x^y^2`` is ``(x^y)^2``.  The literal ``1``
is the identity; no other bare integer is a valid atom.

Trees round-trip: parse_word(print_word(t)) == t, with no simplification
performed by either direction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GroupInputError


class WordSyntaxError(ValueError):
    """Malformed word text; ``position`` is the offending character index."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Ident:
    pass


@dataclass(frozen=True)
class Mul:
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Conj:
    base: object
    by: object


@dataclass(frozen=True)
class Comm:
    left: object
    right: object


def _tokenize(text: str):
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
        elif ch.isdigit():
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(("int", text[i:j], i))
            i = j
        elif ch in "*^()[],-":
            toks.append((ch, ch, i))
            i += 1
        else:
            raise WordSyntaxError(f"unexpected character {ch!r}", i)
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind=None):
        tok = self.toks[self.pos]
        if kind is not None and tok[0] != kind:
            raise WordSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def atom(self):
        kind, value, at = self.peek()
        if kind == "name":
            self.take()
            return Gen(value)
        if kind == "int":
            self.take()
            if value != "1":
                raise WordSyntaxError("the only integer atom is the identity 1", at)
            return Ident()
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "[":
            self.take()
            left = self.expr()
            self.take(",")
            right = self.expr()
            self.take("]")
            return Comm(left, right)
        raise WordSyntaxError(f"expected an atom, found {value!r}", at)

    def power(self):
        node = self.atom()
        while self.peek()[0] == "^":
            self.take()
            kind, value, at = self.peek()
            if kind == "-":
                self.take()
                tok = self.take("int")
                node = Pow(node, -int(tok[1]))
            elif kind == "int":
                self.take()
                node = Pow(node, int(value))
            else:
                node = Conj(node, self.atom())
        return node

    def expr(self):
        factors = [self.power()]
        while self.peek()[0] == "*":
            self.take()
            factors.append(self.power())
        if len(factors) == 1:
            return factors[0]
        return Mul(tuple(factors))


def parse_word(text: str):
    """Parse ``text`` into a word tree; raises WordSyntaxError."""
    parser = _Parser(_tokenize(text))
    tree = parser.expr()
    kind, value, at = parser.peek()
    if kind != "end":
        raise WordSyntaxError(f"trailing input {value!r}", at)
    return tree


def _print_atomic(node) -> str:
    """Render with parentheses unless the node already parses as an atom."""
    out = print_word(node)
    if isinstance(node, (Gen, Ident, Comm)):
        return out
    return f"({out})"


def print_word(node) -> str:
    if isinstance(node, Gen):
        return node.name
    if isinstance(node, Ident):
        return "1"
    if isinstance(node, Comm):
        return f"[{print_word(node.left)},{print_word(node.right)}]"
    if isinstance(node, Pow):
        base = print_word(node.base)
        if isinstance(node.base, Mul):
            base = f"({base})"
        return f"{base}^{node.exp}"
    if isinstance(node, Conj):
        base = print_word(node.base)
        if isinstance(node.base, Mul):
            base = f"({base})"
        return f"{base}^{_print_atomic(node.by)}"
    if isinstance(node, Mul):
        parts = []
        for f in node.factors:
            text = print_word(f)
            if isinstance(f, Mul):
                text = f"({text})"
            parts.append(text)
        return "*".join(parts)
    raise TypeError(f"not a word node: {node!r}")


def eval_word(group, node, bindings=None):
    """Evaluate a word tree to a group element.

    ``bindings`` maps generator names to elements; by default the group's
    own generator table is used.
    """
    if bindings is None:
        bindings = dict(group.generators)
    return _eval(group, node, bindings)


def _eval(group, node, bindings):
    if isinstance(node, Gen):
        try:
            return bindings[node.name]
        except KeyError:
            raise GroupInputError(f"unknown generator {node.name!r}") from None
    if isinstance(node, Ident):
        return group.identity()
    if isinstance(node, Mul):
        out = _eval(group, node.factors[0], bindings)
        for f in node.factors[1:]:
            out = group.mul(out, _eval(group, f, bindings))
        return out
    if isinstance(node, Pow):
        return group.pow(_eval(group, node.base, bindings), node.exp)
    if isinstance(node, Conj):
        return group.conj(_eval(group, node.base, bindings), _eval(group, node.by, bindings))
    if isinstance(node, Comm):
        a = _eval(group, node.left, bindings)
        b = _eval(group, node.right, bindings)
        return group.mul(group.mul(group.inv(a), group.inv(b)), group.mul(a, b))
    raise TypeError(f"not a word node: {node!r}")


def run_word(pairs) -> str:
    """Format [(name, exponent), ...] as a word string, e.g. "x^2*y".

    Zero exponents are dropped; an empty product renders as "1".  The
    output always parses back with parse_word.
    """
    parts = []
    for name, exp in pairs:
        if exp == 0:
            continue
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return "*".join(parts) if parts else "1"
