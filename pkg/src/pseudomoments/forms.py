"""Homogeneous forms in graded-lex monomial bases."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping

from .exactnum import as_rational, format_rational

FORM_IDS = ("motzkin", "robinson", "reznick8", "choilam")


@lru_cache(maxsize=None)
def _basis(n: int, d: int) -> tuple:
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        out.extend((first,) + rest for rest in _basis(n - 1, d - first))
    return tuple(out)


def monomial_basis(n: int, d: int) -> list:
    """Exponent vectors with ``|alpha| = d`` in graded-lex order, x1 > x2 > ..."""
    if n < 1 or d < 0:
        raise ValueError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
    return list(_basis(n, d))


@dataclass(frozen=True)
class FormSpace:
    n: int
    deg: int

    def __post_init__(self):
        if self.n < 1 or self.deg < 0:
            raise ValueError(f"invalid form space ({self.n}, {self.deg})")

    @property
    def dim(self) -> int:
        return comb(self.n - 1 + self.deg, self.n - 1)

    @property
    def basis(self) -> tuple:
        return _basis(self.n, self.deg)

    def index_of(self, alpha) -> int:
        return _index_map(self.n, self.deg)[tuple(alpha)]

    def __contains__(self, alpha) -> bool:
        alpha = tuple(alpha)
        return len(alpha) == self.n and all(a >= 0 for a in alpha) and sum(alpha) == self.deg


@lru_cache(maxsize=None)
def _index_map(n: int, d: int) -> dict:
    return {a: i for i, a in enumerate(_basis(n, d))}


class Form:
    """Sparse homogeneous polynomial with rational coefficients."""

    __slots__ = ("space", "_coeffs")

    def __init__(self, space: FormSpace, coeffs: Mapping):
        clean = {}
        for alpha, c in coeffs.items():
            alpha = tuple(int(a) for a in alpha)
            if alpha not in space:
                raise ValueError(f"exponent {alpha} does not belong to {space}")
            c = as_rational(c)
            if c:
                clean[alpha] = clean.get(alpha, Fraction(0)) + c
        self.space = space
        self._coeffs = {a: c for a, c in sorted(clean.items(), reverse=True) if c}

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def coefficient(self, alpha) -> Fraction:
        return self._coeffs.get(tuple(alpha), Fraction(0))

    def __len__(self):
        return len(self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.space == other.space and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.space, frozenset(self._coeffs.items())))

    def __call__(self, point):
        """Evaluate at a point (exact if the coordinates are exact)."""
        if len(point) != self.space.n:
            raise ValueError("point has wrong dimension")
        total = 0
        for alpha, c in self._coeffs.items():
            term = c
            for x, a in zip(point, alpha):
                term = term * x**a
            total += term
        return total

    def __add__(self, other):
        if self.space != other.space:
            raise ValueError("forms live in different spaces")
        merged = dict(self._coeffs)
        for a, c in other._coeffs.items():
            merged[a] = merged.get(a, 0) + c
        return Form(self.space, merged)

    def __rmul__(self, t):
        t = as_rational(t)
        return Form(self.space, {a: t * c for a, c in self._coeffs.items()})

    def to_literal(self) -> str:
        return format_form(self)

    def __repr__(self):
        return f"Form({self.space.n}, {self.space.deg}, {format_form(self)!r})"


def _f(space, terms) -> Form:
    return Form(space, dict(terms))


def named_form(form_id: str) -> Form:
    """The four classical positive non-SOS forms."""
    if form_id == "motzkin":
        return _f(FormSpace(3, 6), [((4, 2, 0), 1), ((2, 4, 0), 1), ((0, 0, 6), 1), ((2, 2, 2), -3)])
    if form_id == "robinson":
        terms = [((6, 0, 0), 1), ((0, 6, 0), 1), ((0, 0, 6), 1), ((2, 2, 2), 3)]
        for a in [(4, 2, 0), (2, 4, 0), (4, 0, 2), (2, 0, 4), (0, 4, 2), (0, 2, 4)]:
            terms.append((a, -1))
        return _f(FormSpace(3, 6), terms)
    if form_id == "reznick8":
        return _f(
            FormSpace(3, 8),
            [((2, 0, 6), 1), ((0, 2, 6), 1), ((4, 4, 0), 1), ((2, 2, 4), -3)],
        )
    if form_id == "choilam":
        return _f(
            FormSpace(4, 4),
            [
                ((2, 2, 0, 0), 1),
                ((0, 2, 2, 0), 1),
                ((2, 0, 2, 0), 1),
                ((0, 0, 0, 4), 1),
                ((1, 1, 1, 1), -4),
            ],
        )
    raise ValueError(f"unknown form {form_id!r}; expected one of {', '.join(FORM_IDS)}")


def identify_form(p: Form):
    """Name of ``p`` if it is one of the named forms, else None."""
    for fid in FORM_IDS:
        if named_form(fid) == p:
            return fid
    return None


def evaluate_functional(p: Form, y) -> Fraction:
    """``l_y(p) = sum_alpha p_alpha * y_alpha``."""
    space = getattr(y, "space", None)
    if space is not None and space != p.space:
        raise ValueError(f"form lives in {p.space}, moment vector in {space}")
    values = y.values if space is not None else y
    if len(values) != p.space.dim:
        raise ValueError(f"moment vector has length {len(values)}, expected {p.space.dim}")
    idx = _index_map(p.space.n, p.space.deg)
    return sum((c * values[idx[a]] for a, c in p._coeffs.items()), Fraction(0))


_TERM_RE = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_form(text: str, n: int | None = None) -> Form:
    """Parse a literal like ``"x1^4*x2^2 + x1^2*x2^4 + x3^6 - 3*x1^2*x2^2*x3^2"``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty form literal")
    chunks = re.findall(r"[+-]?[^+-]+", s)
    if "".join(chunks) != s:
        raise ValueError(f"cannot parse form literal {text!r}")
    terms = []
    max_var = 0
    for chunk in chunks:
        sign = -1 if chunk[0] == "-" else 1
        body = chunk.lstrip("+-")
        coeff = Fraction(sign)
        exps = {}
        for factor in body.split("*"):
            if not factor:
                raise ValueError(f"empty factor in {chunk!r}")
            m = _TERM_RE.match(factor)
            if m:
                v = int(m.group(1))
                if v < 1:
                    raise ValueError("variables are numbered from x1")
                exps[v] = exps.get(v, 0) + int(m.group(2) or 1)
                max_var = max(max_var, v)
            else:
                coeff *= as_rational(factor)
        terms.append((exps, coeff))
    n = n or max_var
    if max_var > n:
        raise ValueError(f"literal uses x{max_var} but n = {n}")
    degrees = {sum(e.values()) for e, _ in terms}
    if len(degrees) != 1:
        raise ValueError(f"form literal is not homogeneous (degrees {sorted(degrees)})")
    space = FormSpace(n, degrees.pop())
    coeffs = {}
    for exps, c in terms:
        alpha = tuple(exps.get(v, 0) for v in range(1, n + 1))
        coeffs[alpha] = coeffs.get(alpha, 0) + c
    return Form(space, coeffs)


def format_form(p: Form) -> str:
    parts = []
    for alpha, c in p._coeffs.items():
        factors = [
            f"x{v + 1}" if a == 1 else f"x{v + 1}^{a}" for v, a in enumerate(alpha) if a
        ]
        mono = "*".join(factors)
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {s} {b}" for s, b in parts[1:])
