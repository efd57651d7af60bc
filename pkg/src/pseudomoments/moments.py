"""Pseudo-moment vectors, moment matrices and the extreme-ray test."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional

from .exactnum import QuadExt, as_rational
from .forms import Form, FormSpace, _index_map, evaluate_functional, identify_form
from .linalg_exact import SymMatrix, is_psd, kernel_basis, matvec, rank_exact


def _scalar(x):
    return x if isinstance(x, QuadExt) else as_rational(x)


class PseudoMomentVector:
    """Dense coordinates ``y_alpha`` of a functional on degree-2d forms."""

    __slots__ = ("space", "values")

    def __init__(self, space: FormSpace, values):
        values = tuple(_scalar(v) for v in values)
        if len(values) != space.dim:
            raise ValueError(f"expected {space.dim} moments for {space}, got {len(values)}")
        self.space = space
        self.values = values

    @classmethod
    def zeros(cls, space: FormSpace) -> PseudoMomentVector:
        return cls(space, [0] * space.dim)

    @classmethod
    def from_dict(cls, space: FormSpace, moments: Mapping) -> PseudoMomentVector:
        vals = [Fraction(0)] * space.dim
        idx = _index_map(space.n, space.deg)
        for alpha, v in moments.items():
            alpha = tuple(alpha)
            if alpha not in idx:
                raise ValueError(f"exponent {alpha} does not belong to {space}")
            vals[idx[alpha]] = _scalar(v)
        return cls(space, vals)

    def to_dict(self) -> dict:
        """Nonzero coordinates keyed by exponent."""
        return {a: v for a, v in zip(self.space.basis, self.values) if v}

    def __getitem__(self, alpha):
        return self.values[self.space.index_of(alpha)]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other):
        if not isinstance(other, PseudoMomentVector):
            return NotImplemented
        return self.space == other.space and self.values == other.values

    def __hash__(self):
        return hash((self.space, self.values))

    def _check(self, other):
        if not isinstance(other, PseudoMomentVector) or other.space != self.space:
            raise ValueError("moment vectors live in different spaces")

    def __add__(self, other):
        self._check(other)
        return PseudoMomentVector(self.space, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        self._check(other)
        return PseudoMomentVector(self.space, [a - b for a, b in zip(self.values, other.values)])

    def __rmul__(self, t):
        return PseudoMomentVector(self.space, [t * v for v in self.values])

    def is_rational(self) -> bool:
        return not any(isinstance(v, QuadExt) and v.surd for v in self.values)

    def __repr__(self):
        return f"PseudoMomentVector({self.space.n}, {self.space.deg}, nnz={len(self.to_dict())})"


def _half_space(space: FormSpace) -> FormSpace:
    if space.deg % 2:
        raise ValueError(f"moment matrices need even degree, got {space.deg}")
    return FormSpace(space.n, space.deg // 2)


@dataclass(frozen=True)
class MomentMatrix:
    matrix: SymMatrix
    row_index: tuple

    @property
    def size(self) -> int:
        return self.matrix.size


@lru_cache(maxsize=None)
def _hankel_index(n: int, deg: int) -> tuple:
    """Position of ``alpha_i + alpha_j`` in the degree-deg basis, for each (i, j)."""
    half = FormSpace(n, deg // 2).basis
    idx = _index_map(n, deg)
    return tuple(
        tuple(idx[tuple(a + b for a, b in zip(ai, aj))] for aj in half) for ai in half
    )


def moment_matrix(y: PseudoMomentVector) -> MomentMatrix:
    """``M_d(y)[i, j] = y[alpha_i + alpha_j]`` over the degree-d basis."""
    half = _half_space(y.space)
    pos = _hankel_index(y.space.n, y.space.deg)
    vals = y.values
    return MomentMatrix(SymMatrix([[vals[k] for k in row] for row in pos]), half.basis)


@lru_cache(maxsize=None)
def _coordinate_matrices(n: int, deg: int) -> tuple:
    pos = _hankel_index(n, deg)
    m = FormSpace(n, deg).dim
    out = []
    for k in range(m):
        out.append(SymMatrix([[int(p == k) for p in row] for row in pos]))
    return tuple(out)


def coordinate_matrices(space: FormSpace) -> list:
    """0/1 matrices ``M_k`` with ``M_d(y) = sum_k y_k M_k``."""
    _half_space(space)
    return list(_coordinate_matrices(space.n, space.deg))


@dataclass(frozen=True)
class ExtremalityWitness:
    kernel: tuple
    stacked: tuple
    rank_b: int
    ambient_dim: int

    @property
    def verdict(self) -> bool:
        return self.rank_b == self.ambient_dim - 1

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel)


def check_extreme(y: PseudoMomentVector) -> ExtremalityWitness:
    """Decide whether ``y`` spans an extreme ray of the pseudo-moment cone.

    With ``U`` a kernel basis of ``M(y)``, the ray is extreme exactly when
    ``B = [vec(M_1 U) ... vec(M_m U)]`` has rank ``m - 1``.
    """
    M = moment_matrix(y).matrix
    if not is_psd(M):
        raise ValueError("moment matrix is not positive semidefinite")
    U = kernel_basis(M)
    mats = coordinate_matrices(y.space)
    columns = []
    for Mk in mats:
        col = []
        for u in U:
            col.extend(matvec(Mk, u))
        columns.append(col)
    m = len(mats)
    n_rows = len(columns[0]) if columns else 0
    B = tuple(tuple(columns[k][r] for k in range(m)) for r in range(n_rows))
    rank_b = rank_exact(B) if n_rows else 0
    return ExtremalityWitness(tuple(tuple(u) for u in U), B, rank_b, m)


@dataclass
class CertificateReport:
    """Outcome of checking a candidate certificate against a form."""

    value: object
    psd: bool
    rank: int
    size: int
    form_id: Optional[str] = None
    block_ranks: Optional[list] = None
    extreme: Optional[bool] = None
    rank_b: Optional[int] = None
    notes: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.psd and self.value < 0


def verify_certificate(p: Form, y: PseudoMomentVector, extreme: bool = False) -> CertificateReport:
    """Check ``M_d(y) >= 0`` and ``l_y(p) < 0``; optionally test extremality."""
    if p.space != y.space:
        raise ValueError(f"form lives in {p.space}, moment vector in {y.space}")
    M = moment_matrix(y).matrix
    report = CertificateReport(
        value=evaluate_functional(p, y),
        psd=is_psd(M),
        rank=rank_exact(M),
        size=M.size,
        form_id=identify_form(p),
    )
    if report.form_id is not None:
        from .symmetry import block_decompose, is_invariant

        if is_invariant(report.form_id, y):
            report.block_ranks = [rank_exact(b) for b in block_decompose(report.form_id, y)]
        else:
            report.notes.append("moment vector is not group invariant; block ranks skipped")
    if extreme:
        if report.psd:
            w = check_extreme(y)
            report.extreme, report.rank_b = w.verdict, w.rank_b
        else:
            report.extreme = False
            report.notes.append("extremality not tested: moment matrix is not PSD")
    return report
