"""Text format for all domain values.

Grammar: integer literals, the variables `t` and `u`, operators + - * / ^,
and parentheses.  Rationals are written a/b; `/` is ordinary division, so
`1/144*t^2` means (1/144)*t^2.  Parsing is exact; nothing is ever rounded.

Syntax errors carry the offending position.  Degree-bound and shape errors
are raised separately by the constructors of the target types.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import UNIPOLY_ONE, UNIPOLY_ZERO, BiPoly, RatFn, UniPoly


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class InputFormatError(ValueError):
    """Semantically invalid input (wrong variables, non-polynomial result, ...)."""


# ---------------------------------------------------------------------------
# tokenizer / recursive descent over bivariate rational expressions
# ---------------------------------------------------------------------------

_OPS = set("+-*/^(),=")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(("num", text[i:j], i))
            i = j
        elif ch.isalpha():
            j = i
            while j < len(text) and text[j].isalnum():
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
        elif text[i : i + 2] == "**":
            toks.append(("op", "^", i))
            i += 2
        elif ch in _OPS:
            toks.append(("op", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", "", len(text)))
    return toks


class _BiRat:
    """Unreduced bivariate rational used only while parsing."""

    __slots__ = ("num", "den")

    def __init__(self, num: BiPoly, den: BiPoly):
        self.num, self.den = num, den

    @staticmethod
    def const(c: Fraction) -> "_BiRat":
        return _BiRat(BiPoly([UniPoly.const(c)]), _BI_ONE)

    def __add__(self, o):
        return _BiRat(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, o):
        return _BiRat(self.num * o.den - o.num * self.den, self.den * o.den)

    def __mul__(self, o):
        return _BiRat(self.num * o.num, self.den * o.den)

    def __neg__(self):
        return _BiRat(-self.num, self.den)


_BI_ONE = BiPoly([UNIPOLY_ONE])


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_end(self):
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r}", pos)

    def expr(self) -> _BiRat:
        acc = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if val == "+" else acc - rhs
            else:
                return acc

    def term(self) -> _BiRat:
        acc = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.factor()
                if val == "*":
                    acc = acc * rhs
                else:
                    if rhs.num.is_zero:
                        raise ParseError("division by zero", pos)
                    acc = _BiRat(acc.num * rhs.den, acc.den * rhs.num)
            else:
                return acc

    def factor(self) -> _BiRat:
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            nkind, nval, npos = self.take()
            neg = False
            if nkind == "op" and nval == "-":
                neg = True
                nkind, nval, npos = self.take()
            if nkind != "num":
                raise ParseError("exponent must be an integer", npos)
            n = int(nval)
            num, den = _BI_ONE, _BI_ONE
            for _ in range(n):
                num = num * base.num
                den = den * base.den
            if neg:
                if num.is_zero:
                    raise ParseError("zero to a negative power", npos)
                num, den = den, num
            return _BiRat(num, den)
        return base

    def atom(self) -> _BiRat:
        kind, val, pos = self.take()
        if kind == "num":
            return _BiRat.const(Fraction(int(val)))
        if kind == "name":
            if val == "t":
                return _BiRat(BiPoly([UniPoly.of(0, 1)]), _BI_ONE)
            if val == "u":
                return _BiRat(BiPoly([UNIPOLY_ZERO, UNIPOLY_ONE]), _BI_ONE)
            raise ParseError(f"unknown name {val!r}", pos)
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val, pos = self.take()
            if not (kind == "op" and val == ")"):
                raise ParseError("expected ')'", pos)
            return inner
        raise ParseError(f"unexpected token {val!r}", pos)


def parse_birational(text: str) -> tuple[BiPoly, BiPoly]:
    p = _Parser(text)
    v = p.expr()
    p.expect_end()
    return v.num, v.den


def _require_constant_den(num: BiPoly, den: BiPoly, what: str) -> BiPoly:
    if den.degree_u > 0 or (not den.is_zero and den.coeffs[0].degree > 0):
        raise InputFormatError(f"{what} must be polynomial (no division by t or u)")
    c = den.coeffs[0].coeffs[0]
    return num * BiPoly([UniPoly.const(1 / c)])


def parse_bipoly(text: str) -> BiPoly:
    num, den = parse_birational(text)
    return _require_constant_den(num, den, "expression")


def parse_unipoly(text: str) -> UniPoly:
    b = parse_bipoly(text)
    if b.degree_u > 0:
        raise InputFormatError("expression must not involve u")
    return b.coeff_u(0)


def parse_ratfn(text: str) -> RatFn:
    num, den = parse_birational(text)
    if num.degree_u > 0 or den.degree_u > 0:
        raise InputFormatError("expression must not involve u")
    return RatFn(num.coeff_u(0), den.coeff_u(0) if not den.is_zero else UNIPOLY_ONE)


def parse_conic_rhs(text: str) -> UniPoly:
    """Accept `u = q(t)` or a bare polynomial in t."""
    if "=" in text:
        lhs, rhs = text.split("=", 1)
        if lhs.strip() != "u":
            raise InputFormatError("conic must have the form `u = q(t)`")
        text = rhs
    return parse_unipoly(text)


def parse_curve_rhs(text: str) -> BiPoly:
    """Accept `y^2 = f(t, u)` or a bare polynomial in t, u."""
    if "=" in text:
        lhs, rhs = text.split("=", 1)
        if lhs.replace(" ", "") not in ("y^2", "y**2"):
            raise InputFormatError("curve must have the form `y^2 = f(t, u)`")
        text = rhs
    return parse_bipoly(text)


def parse_section(text: str):
    """Parse `O` (the zero section) or `(x(t), y(t))` into a SectionPoint."""
    from .surface import SectionPoint

    stripped = text.strip()
    if stripped.lower() in ("o", "zero"):
        return SectionPoint.zero()
    if not (stripped.startswith("(") and stripped.endswith(")")):
        raise InputFormatError("section must be `O` or `(x, y)`")
    inner = stripped[1:-1]
    depth = 0
    split_at = None
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            split_at = i
            break
    if split_at is None:
        raise InputFormatError("section must have two coordinates")
    x = parse_ratfn(inner[:split_at])
    y = parse_ratfn(inner[split_at + 1 :])
    return SectionPoint(x, y)


# ---------------------------------------------------------------------------
# printers (round-trip exact with the parser)
# ---------------------------------------------------------------------------


def frac_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _term_text(c: Fraction, var: str, k: int) -> str:
    if k == 0:
        return frac_text(c)
    v = var if k == 1 else f"{var}^{k}"
    if c == 1:
        return v
    if c == -1:
        return f"-{v}"
    return f"{frac_text(c)}*{v}"


def poly_text(p: UniPoly, var: str = "t") -> str:
    if p.is_zero:
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if c == 0:
            continue
        txt = _term_text(c, var, k)
        if not parts:
            parts.append(txt)
        elif txt.startswith("-"):
            parts.append(f"- {txt[1:]}")
        else:
            parts.append(f"+ {txt}")
    return " ".join(parts)


def ratfn_text(r: RatFn) -> str:
    if r.is_polynomial():
        return poly_text(r.num)
    return f"({poly_text(r.num)})/({poly_text(r.den)})"


def bipoly_text(f: BiPoly) -> str:
    if f.is_zero:
        return "0"
    parts = []
    for k in range(f.degree_u, -1, -1):
        c = f.coeff_u(k)
        if c.is_zero:
            continue
        if k == 0:
            txt = poly_text(c) if c.is_constant() else f"({poly_text(c)})"
        else:
            v = "u" if k == 1 else f"u^{k}"
            if c == UNIPOLY_ONE:
                txt = v
            elif c.is_constant():
                txt = f"{frac_text(c.coeffs[0])}*{v}"
            else:
                txt = f"({poly_text(c)})*{v}"
        if not parts:
            parts.append(txt)
        elif txt.startswith("-") and not txt.startswith("-("):
            parts.append(f"- {txt[1:]}")
        else:
            parts.append(f"+ {txt}")
    return " ".join(parts)


def section_text(p) -> str:
    if p.is_zero:
        return "O"
    return f"({ratfn_text(p.x)}, {ratfn_text(p.y)})"
