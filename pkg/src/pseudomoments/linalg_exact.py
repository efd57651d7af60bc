"""Exact symmetric-matrix algebra over Q and Q(sqrt 2).

General (possibly rectangular) matrices are plain lists of rows; only
symmetric ones get the :class:`SymMatrix` wrapper.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .exactnum import QuadExt


class SymMatrix:
    """Immutable symmetric matrix with exact entries."""

    __slots__ = ("_rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        for i, r in enumerate(rows):
            if len(r) != n:
                raise ValueError(f"row {i} has length {len(r)}, expected {n}")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"not symmetric at ({i}, {j})")
        self._rows = rows

    @property
    def size(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple:
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def tolist(self) -> list:
        return [list(r) for r in self._rows]

    def principal(self, idx: Sequence[int]) -> SymMatrix:
        return SymMatrix([[self._rows[i][j] for j in idx] for i in idx])

    def trace(self):
        return sum((self._rows[i][i] for i in range(self.size)), 0)

    def __eq__(self, other):
        if isinstance(other, SymMatrix):
            return self._rows == other._rows
        return NotImplemented

    def __hash__(self):
        return hash(self._rows)

    def __add__(self, other):
        return SymMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)]
        )

    def __mul__(self, t):
        return SymMatrix([[t * a for a in r] for r in self._rows])

    __rmul__ = __mul__

    def __repr__(self):
        return f"SymMatrix({self.tolist()!r})"


def _rows_of(A) -> list:
    if isinstance(A, SymMatrix):
        return A.tolist()
    return [list(r) for r in A]


def identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A) -> list:
    rows = _rows_of(A)
    return [list(c) for c in zip(*rows)]


def matmul(A, B) -> list:
    a, bt = _rows_of(A), transpose(B)
    return [[sum((x * y for x, y in zip(r, c)), 0) for c in bt] for r in a]


def matvec(A, v) -> list:
    return [sum((x * y for x, y in zip(r, v)), 0) for r in _rows_of(A)]


def _is_rational_matrix(rows) -> bool:
    return all(
        isinstance(x, (int, Fraction)) and not isinstance(x, bool)
        for r in rows
        for x in r
    )


def _integer_rows(rows) -> list:
    """Scale each row by its denominator lcm; rank is unchanged."""
    out = []
    for r in rows:
        m = lcm(*(Fraction(x).denominator for x in r)) if r else 1
        out.append([int(Fraction(x) * m) for x in r])
    return out


def _bareiss_rank(rows) -> int:
    """Fraction-free elimination with full pivoting; ``rows`` is consumed."""
    if not rows:
        return 0
    integral = all(isinstance(x, int) for r in rows for x in r)
    nr, nc = len(rows), len(rows[0])
    prev = 1
    rank = 0
    for k in range(min(nr, nc)):
        piv = None
        for i in range(k, nr):
            for j in range(k, nc):
                if rows[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        rows[k], rows[i] = rows[i], rows[k]
        if j != k:
            for r in rows:
                r[k], r[j] = r[j], r[k]
        p = rows[k][k]
        for i in range(k + 1, nr):
            rik = rows[i][k]
            row_i, row_k = rows[i], rows[k]
            for j in range(k + 1, nc):
                num = row_i[j] * p - rik * row_k[j]
                row_i[j] = num // prev if integral else num / prev
            row_i[k] = 0
        prev = p
        rank += 1
    return rank


def rank_exact(A) -> int:
    """Rank of a (possibly rectangular) exact matrix."""
    rows = _rows_of(A)
    if _is_rational_matrix(rows):
        rows = _integer_rows(rows)
    return _bareiss_rank(rows)


def det_exact(A):
    """Determinant by fraction-free elimination (partial pivoting)."""
    rows = _rows_of(A)
    n = len(rows)
    if n == 0:
        return 1
    denom = 1
    if _is_rational_matrix(rows):
        for r in rows:
            denom *= lcm(*(Fraction(x).denominator for x in r))
        rows = _integer_rows(rows)
    integral = all(isinstance(x, int) for r in rows for x in r)
    sign, prev = 1, 1
    for k in range(n):
        i = next((i for i in range(k, n) if rows[i][k]), None)
        if i is None:
            return 0
        if i != k:
            rows[k], rows[i] = rows[i], rows[k]
            sign = -sign
        p = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = rows[i][j] * p - rows[i][k] * rows[k][j]
                rows[i][j] = num // prev if integral else num / prev
        prev = p
    d = sign * rows[n - 1][n - 1]
    if denom != 1:
        q = Fraction(d, denom)
        return q.numerator if q.denominator == 1 else q
    return d


def rref(A):
    """Reduced row echelon form over the entry field; returns (R, pivots)."""
    rows = [[x if isinstance(x, QuadExt) else Fraction(x) for x in r] for r in _rows_of(A)]
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(nc):
        i = next((i for i in range(r, nr) if rows[i][c]), None)
        if i is None:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return rows, pivots


def _primitive(v) -> list:
    if not all(isinstance(x, Fraction) for x in v):
        return v
    m = lcm(*(x.denominator for x in v))
    ints = [int(x * m) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints


def kernel_basis(A) -> list:
    """Null-space basis, one vector per free column of the RREF.

    Rational vectors are rescaled to coprime integers with the free
    coordinate positive.
    """
    rows = _rows_of(A)
    if not rows:
        return []
    nc = len(rows[0])
    R, pivots = rref(rows)
    basis = []
    for free in (c for c in range(nc) if c not in pivots):
        v = [Fraction(0)] * nc
        v[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][free]
        basis.append(_primitive(v))
    return basis


@dataclass(frozen=True)
class CharPoly:
    """``det(lambda*I - A)`` with coefficients in descending powers."""

    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def elementary(self, k: int):
        """Sum of the k-by-k principal minors of the matrix."""
        return (-1) ** k * self.coeffs[k]

    def __str__(self):
        n = self.degree
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            p = n - k
            mono = "" if p == 0 else ("λ" if p == 1 else f"λ^{p}")
            if mono and c == 1:
                term = mono
            elif mono and c == -1:
                term = "-" + mono
            else:
                term = f"{c}{mono}"
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ") or "0"


def _faddeev_leverrier(rows, integral: bool) -> list:
    n = len(rows)
    coeffs = [1] + [0] * n
    M = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[k - 1]
        # M_k = A M_{k-1} + c_{k-1} I
        AM = [[sum(rows[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            AM[i][i] = AM[i][i] + c_prev
        M = AM
        tr = sum(sum(rows[i][t] * M[t][i] for t in range(n)) for i in range(n))
        coeffs[k] = -(tr // k) if integral else -tr / k
    return coeffs


def char_poly(A) -> CharPoly:
    """Characteristic polynomial by the Faddeev-LeVerrier recurrence.

    Rational input is scaled to an integer matrix first, which keeps the
    whole recurrence in machine-friendly integers.
    """
    rows = _rows_of(A)
    n = len(rows)
    if _is_rational_matrix(rows):
        s = lcm(*(Fraction(x).denominator for r in rows for x in r)) if n else 1
        B = [[int(Fraction(x) * s) for x in r] for r in rows]
        cb = _faddeev_leverrier(B, integral=True)
        coeffs = []
        for k, c in enumerate(cb):
            q = Fraction(c, s**k)
            coeffs.append(q.numerator if q.denominator == 1 else q)
        return CharPoly(tuple(coeffs))
    return CharPoly(tuple(_faddeev_leverrier(rows, integral=False)))


def is_psd(A) -> bool:
    """Exact PSD test: every elementary symmetric function of the spectrum is >= 0."""
    cp = char_poly(A)
    return all(cp.elementary(k) >= 0 for k in range(1, cp.degree + 1))


def congruence(A, T) -> SymMatrix:
    """``T^T A T`` for an invertible square ``T``."""
    T = _rows_of(T)
    n = A.size if isinstance(A, SymMatrix) else len(A)
    if len(T) != n or any(len(r) != n for r in T):
        raise ValueError("congruence matrix must be square and match A")
    if rank_exact(T) != n:
        raise ValueError("congruence matrix is singular")
    rows = _rows_of(A)
    s = 1
    if _is_rational_matrix(rows) and _is_rational_matrix(T):
        # integer arithmetic throughout, one division per entry at the end
        s = lcm(*(Fraction(x).denominator for r in rows for x in r)) if n else 1
        rows = [[int(Fraction(x) * s) for x in r] for r in rows]
    cols = [[(i, x) for i, x in enumerate(c) if x] for c in zip(*T)]
    AT = [[sum((r[i] * x for i, x in col), 0) for col in cols] for r in rows]
    C = [[sum((x * AT[i][j] for i, x in col), 0) for j in range(n)] for col in cols]
    if s != 1:
        C = [[_reduce(Fraction(x, s)) for x in r] for r in C]
    return SymMatrix(C)


def _reduce(q: Fraction):
    return q.numerator if q.denominator == 1 else q
