"""Text syntax for bracket monomials and linear combinations of them.

    monomial := NAME | "[" monomial "," monomial "]"
    element  := ["+"|"-"] term (("+"|"-") term)*  |  "0"
    term     := factor ("*" factor)*     (exactly one factor is a monomial)
    factor   := RATIONAL | "i" | "(" scalar ")" | monomial

Whitespace is ignored.  A monomial is returned as a *name tree*: a generator
name (``str``) or a pair of name trees.
"""

from __future__ import annotations

import re

from .exact import I, GaussianRational, format_scalar, imag_part, parse_scalar, real_part, simplify


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.message = message
        self.text = text
        self.pos = pos


_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_NUMBER = re.compile(r"\d+(?:/\d+)?")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    def fail(self, message: str):
        raise ParseError(message, self.text, self.pos)

    def monomial(self):
        ch = self.peek()
        if ch == "[":
            self.pos += 1
            left = self.monomial()
            self.expect(",")
            right = self.monomial()
            self.expect("]")
            return (left, right)
        m = _NAME.match(self.text, self.pos)
        if m is None or m.group() == "i":
            self.fail("expected a generator or '['")
        self.pos = m.end()
        return m.group()

    def factor(self):
        """Return ('m', tree) or ('s', scalar)."""
        ch = self.peek()
        if ch == "[":
            return "m", self.monomial()
        if ch == "(":
            start = self.pos + 1
            end = self.text.find(")", start)
            if end < 0:
                self.fail("unclosed '('")
            try:
                value = parse_scalar(self.text[start:end])
            except ValueError:
                self.pos = start
                self.fail("malformed scalar")
            self.pos = end + 1
            return "s", value
        m = _NUMBER.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return "s", parse_scalar(m.group())
        m = _NAME.match(self.text, self.pos)
        if m and m.group() == "i":
            self.pos = m.end()
            return "s", GaussianRational(0, 1)
        return "m", self.monomial()

    def term(self, sign):
        coeff = sign
        tree = None
        while True:
            start = self.pos
            kind, value = self.factor()
            if kind == "m":
                if tree is not None:
                    self.pos = start
                    self.fail("two monomials in one term")
                tree = value
            else:
                coeff = coeff * value
            if self.peek() != "*":
                break
            self.pos += 1
        if tree is None:
            self.fail("term without a monomial")
        return simplify(coeff), tree


def parse_monomial(text: str):
    """Parse a single bracket monomial into a name tree."""
    sc = _Scanner(text)
    tree = sc.monomial()
    if sc.peek():
        sc.fail("trailing characters")
    return tree


def parse_element(text: str) -> list[tuple[object, object]]:
    """Parse a signed sum of monomials into ``[(coefficient, name_tree), ...]``."""
    sc = _Scanner(text)
    if sc.peek() == "0":
        sc.pos += 1
        if not sc.peek():
            return []
        sc.pos -= 1
    terms = []
    first = True
    while True:
        ch = sc.peek()
        if not ch:
            if first:
                sc.fail("empty expression")
            break
        sign = 1
        if ch in "+-":
            sign = -1 if ch == "-" else 1
            sc.pos += 1
        elif not first:
            sc.fail("expected '+' or '-'")
        terms.append(sc.term(sign))
        first = False
    return terms


def tree_names(tree) -> list[str]:
    if isinstance(tree, str):
        return [tree]
    return tree_names(tree[0]) + tree_names(tree[1])


def format_tree(tree) -> str:
    if isinstance(tree, str):
        return tree
    return f"[{format_tree(tree[0])},{format_tree(tree[1])}]"


def format_terms(terms) -> str:
    """Format ``[(coefficient, monomial_text), ...]`` as a signed sum."""
    parts = []
    for coeff, mono in terms:
        re_, im_ = real_part(coeff), imag_part(coeff)
        negative = (re_ < 0) if re_ else (im_ < 0)
        if re_ and im_:
            negative = False
        mag = -coeff if negative else coeff
        if mag == 1:
            body = mono
        elif not re_ and mag == I:
            body = f"i*{mono}"
        elif re_ and im_:
            body = f"({format_scalar(mag)})*{mono}"
        else:
            body = f"{format_scalar(mag)}*{mono}"
        if not parts:
            parts.append(("-" if negative else "") + body)
        else:
            parts.append(("- " if negative else "+ ") + body)
    return " ".join(parts) if parts else "0"
