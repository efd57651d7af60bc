"""Signed-permutation symmetry, orbit parameters and block bases of the named forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

from .exactnum import QuadExt, as_rational, format_scalar
from .forms import Form, FormSpace, named_form
from .linalg_exact import char_poly, congruence
from .moments import PseudoMomentVector, moment_matrix


@dataclass(frozen=True)
class SignedPermutation:
    """Substitution ``x_i -> signs[i] * x_{perm[i]}`` (0-based ``perm``)."""

    perm: tuple
    signs: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{self.perm} is not a permutation")
        if len(self.signs) != len(self.perm) or any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1/-1, one per variable")

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> SignedPermutation:
        return cls(tuple(range(n)), (1,) * n)

    def act(self, alpha) -> tuple:
        """Image of the monomial ``x^alpha``: (exponent, sign)."""
        beta = [0] * self.n
        sign = 1
        for i, a in enumerate(alpha):
            beta[self.perm[i]] = a
            if a % 2:
                sign *= self.signs[i]
        return tuple(beta), sign

    def compose(self, other: SignedPermutation) -> SignedPermutation:
        """``self`` after ``other`` as substitutions on monomials."""
        # other sends x_i to s_i x_{p(i)}; self then sends x_{p(i)} to t x_{q(p(i))}
        perm = tuple(self.perm[other.perm[i]] for i in range(self.n))
        signs = tuple(other.signs[i] * self.signs[other.perm[i]] for i in range(self.n))
        return SignedPermutation(perm, signs)

    def inverse(self) -> SignedPermutation:
        perm = [0] * self.n
        signs = [1] * self.n
        for i, j in enumerate(self.perm):
            perm[j] = i
            signs[j] = self.signs[i]
        return SignedPermutation(tuple(perm), tuple(signs))

    def act_on_form(self, p: Form) -> Form:
        out = {}
        for alpha, c in p.coeffs.items():
            beta, s = self.act(alpha)
            out[beta] = out.get(beta, 0) + s * c
        return Form(p.space, out)


def _group(perms, sign_vectors) -> tuple:
    return tuple(SignedPermutation(tuple(p), tuple(s)) for p in perms for s in sign_vectors)


@lru_cache(maxsize=None)
def symmetry_group(form_id: str) -> tuple:
    """All elements of the symmetry group of a named form."""
    all_signs3 = list(product((1, -1), repeat=3))
    if form_id in ("motzkin", "reznick8"):
        return _group([(0, 1, 2), (1, 0, 2)], all_signs3)
    if form_id == "robinson":
        return _group(permutations(range(3)), all_signs3)
    if form_id == "choilam":
        even = [s for s in product((1, -1), repeat=4) if s.count(-1) % 2 == 0]
        return _group([p + (3,) for p in permutations(range(3))], even)
    raise ValueError(f"unknown form {form_id!r}")


def dual_action(g: SignedPermutation, y: PseudoMomentVector) -> PseudoMomentVector:
    """``(g.l)(r) = l(rho(g^{-1}) r)`` in moment coordinates."""
    if g.n != y.space.n:
        raise ValueError("group element and moment vector disagree on n")
    ginv = g.inverse()
    vals = []
    for beta in y.space.basis:
        alpha, s = ginv.act(beta)
        vals.append(s * y[alpha])
    return PseudoMomentVector(y.space, vals)


def reynolds(form_id: str, y: PseudoMomentVector) -> PseudoMomentVector:
    """Group average of ``y``: the projection onto invariant functionals."""
    G = symmetry_group(form_id)
    if G[0].n != y.space.n:
        raise ValueError(f"{form_id} acts on {G[0].n} variables, y has {y.space.n}")
    total = [Fraction(0)] * y.space.dim
    for g in G:
        total = [t + v for t, v in zip(total, dual_action(g, y).values)]
    return PseudoMomentVector(y.space, [t / len(G) for t in total])


def is_invariant(form_id: str, y: PseudoMomentVector) -> bool:
    G = symmetry_group(form_id)
    if G[0].n != y.space.n:
        return False
    return all(dual_action(g, y) == y for g in G)


# orbit name -> exponents carrying that parameter
ORBITS = {
    "motzkin": {
        "a": [(2, 0, 4), (0, 2, 4)],
        "b": [(4, 0, 2), (0, 4, 2)],
        "c": [(2, 2, 2)],
        "d": [(6, 0, 0), (0, 6, 0)],
        "e": [(4, 2, 0), (2, 4, 0)],
        "f": [(0, 0, 6)],
    },
    "robinson": {
        "a": [(6, 0, 0), (0, 6, 0), (0, 0, 6)],
        "b": [(4, 2, 0), (4, 0, 2), (2, 4, 0), (2, 0, 4), (0, 4, 2), (0, 2, 4)],
        "c": [(2, 2, 2)],
    },
    "reznick8": {
        "a": [(8, 0, 0), (0, 8, 0)],
        "b": [(0, 0, 8)],
        "c": [(6, 2, 0), (2, 6, 0)],
        "d": [(6, 0, 2), (0, 6, 2)],
        "e": [(2, 0, 6), (0, 2, 6)],
        "f": [(4, 4, 0)],
        "g": [(4, 0, 4), (0, 4, 4)],
        "h": [(4, 2, 2), (2, 4, 2)],
        "i": [(2, 2, 4)],
    },
    "choilam": {
        "a": [(0, 0, 0, 4)],
        "b": [(4, 0, 0, 0), (0, 4, 0, 0), (0, 0, 4, 0)],
        "c": [(2, 2, 0, 0), (0, 2, 2, 0), (2, 0, 2, 0)],
        "d": [(2, 0, 0, 2), (0, 2, 0, 2), (0, 0, 2, 2)],
        "e": [(1, 1, 1, 1)],
    },
}

PARAM_NAMES = {fid: tuple(orb) for fid, orb in ORBITS.items()}


def form_space(form_id: str) -> FormSpace:
    return named_form(form_id).space


def _param_scalar(x):
    return x if isinstance(x, QuadExt) else as_rational(x)


@dataclass(frozen=True)
class OrbitParams:
    """Orbit values of an invariant functional, e.g. Motzkin ``(a, ..., f)``."""

    form_id: str
    values: tuple

    def __post_init__(self):
        if self.form_id not in ORBITS:
            raise ValueError(f"unknown form {self.form_id!r}")
        names = PARAM_NAMES[self.form_id]
        if len(self.values) != len(names):
            raise ValueError(
                f"{self.form_id} takes {len(names)} orbit parameters "
                f"({', '.join(names)}), got {len(self.values)}"
            )
        object.__setattr__(self, "values", tuple(_param_scalar(v) for v in self.values))

    @classmethod
    def of(cls, form_id: str, *values, **named) -> OrbitParams:
        if named:
            if values:
                raise TypeError("pass orbit values positionally or by name, not both")
            names = PARAM_NAMES.get(form_id)
            if names is None:
                raise ValueError(f"unknown form {form_id!r}")
            missing = [k for k in names if k not in named]
            extra = [k for k in named if k not in names]
            if missing or extra:
                raise ValueError(f"bad orbit names for {form_id}: missing {missing}, unexpected {extra}")
            values = tuple(named[k] for k in names)
        return cls(form_id, tuple(values))

    @property
    def names(self) -> tuple:
        return PARAM_NAMES[self.form_id]

    def as_dict(self) -> dict:
        return dict(zip(self.names, self.values))

    def __getattr__(self, name):
        names = PARAM_NAMES.get(object.__getattribute__(self, "form_id"), ())
        if name in names:
            return self.values[names.index(name)]
        raise AttributeError(name)

    def is_rational(self) -> bool:
        return not any(isinstance(v, QuadExt) and v.surd for v in self.values)

    def __str__(self):
        return f"{self.form_id}(" + ", ".join(format_scalar(v) for v in self.values) + ")"


def orbit_embed(params: OrbitParams) -> PseudoMomentVector:
    """Replicate each orbit value over its exponents; everything else is zero."""
    space = form_space(params.form_id)
    moments = {}
    for name, value in zip(params.names, params.values):
        for alpha in ORBITS[params.form_id][name]:
            moments[alpha] = value
    return PseudoMomentVector.from_dict(space, moments)


def orbit_params_of(form_id: str, y: PseudoMomentVector) -> OrbitParams:
    """Inverse of :func:`orbit_embed` for invariant ``y``."""
    if not is_invariant(form_id, y):
        raise ValueError(f"moment vector is not {form_id}-invariant")
    return OrbitParams(form_id, tuple(y[ORBITS[form_id][k][0]] for k in PARAM_NAMES[form_id]))


def functional_shortcut(params: OrbitParams):
    """Closed-form ``l_y(p)`` in orbit coordinates."""
    v = params.as_dict()
    fid = params.form_id
    if fid == "motzkin":
        return v["f"] - 3 * v["c"] + 2 * v["e"]
    if fid == "robinson":
        return 3 * (v["a"] - 2 * v["b"] + v["c"])
    if fid == "reznick8":
        return v["f"] + 2 * v["e"] - 3 * v["i"]
    return v["a"] + 3 * v["c"] - 4 * v["e"]


@dataclass(frozen=True)
class BlockBasis:
    """Integer congruence ``T`` splitting ``M_d(y)`` into symmetry blocks.

    Column ``j`` of ``T`` is a new basis form written in monomial
    coordinates; ``scale[j]`` is its squared Euclidean norm, so the block
    entries equal ``sqrt(scale[i] * scale[j])`` times the entries in an
    orthonormal basis.
    """

    form_id: str
    congruence: tuple
    block_sizes: tuple
    scale: tuple
    labels: tuple

    def block_slices(self):
        start = 0
        for size in self.block_sizes:
            yield range(start, start + size)
            start += size


def _columns_to_matrix(space: FormSpace, columns) -> tuple:
    n = space.dim
    T = [[0] * len(columns) for _ in range(n)]
    for j, col in enumerate(columns):
        for alpha, c in col.items():
            T[space.index_of(alpha)][j] = c
    return tuple(tuple(r) for r in T)


def _mono(*alpha):
    return {tuple(alpha): 1}


def _combo(*pairs):
    return {tuple(a): c for a, c in pairs}


@lru_cache(maxsize=None)
def block_basis(form_id: str) -> BlockBasis:
    space = FormSpace(form_space(form_id).n, form_space(form_id).deg // 2)
    if form_id == "motzkin":
        # odd in x1 / x2 / x3 / all three
        cols = [
            _mono(1, 0, 2), _mono(3, 0, 0), _mono(1, 2, 0),
            _mono(0, 1, 2), _mono(2, 1, 0), _mono(0, 3, 0),
            _mono(0, 0, 3), _mono(2, 0, 1), _mono(0, 2, 1),
            _mono(1, 1, 1),
        ]
        sizes = (3, 3, 3, 1)
        labels = ("M31", "M32", "M33", "M34")
    elif form_id == "robinson":
        cols = [
            _mono(3, 0, 0), _mono(1, 2, 0), _mono(1, 0, 2),
            _mono(0, 3, 0), _mono(2, 1, 0), _mono(0, 1, 2),
            _mono(0, 0, 3), _mono(2, 0, 1), _mono(0, 2, 1),
            _mono(1, 1, 1),
        ]
        sizes = (3, 3, 3, 1)
        labels = ("M31", "M32", "M33", "M34")
    elif form_id == "reznick8":
        cols = [
            # odd in x1, x2: split into c - f and the 2x2 block M412
            _combo(((3, 1, 0), -1), ((1, 3, 0), 1)),
            _combo(((3, 1, 0), 1), ((1, 3, 0), 1)),
            _mono(1, 1, 2),
            # odd in x1, x3 and odd in x2, x3
            _mono(3, 0, 1), _mono(1, 0, 3), _mono(1, 2, 1),
            _mono(0, 3, 1), _mono(0, 1, 3), _mono(2, 1, 1),
            # even part: antisymmetric M441, symmetric M442
            _combo(((4, 0, 0), 1), ((0, 4, 0), -1)),
            _combo(((2, 0, 2), 1), ((0, 2, 2), -1)),
            _combo(((4, 0, 0), 1), ((0, 4, 0), 1)),
            _mono(0, 0, 4),
            _mono(2, 2, 0),
            _combo(((2, 0, 2), 1), ((0, 2, 2), 1)),
        ]
        sizes = (1, 2, 3, 3, 2, 4)
        labels = ("M411", "M412", "M42", "M43", "M441", "M442")
    elif form_id == "choilam":
        cols = [
            _combo(((2, 0, 0, 0), 1), ((0, 2, 0, 0), 1), ((0, 0, 2, 0), 1)),
            _mono(0, 0, 0, 2),
            _combo(((2, 0, 0, 0), 1), ((0, 2, 0, 0), -1)),
            _combo(((2, 0, 0, 0), 1), ((0, 2, 0, 0), 1), ((0, 0, 2, 0), -2)),
            _mono(1, 1, 0, 0), _mono(0, 0, 1, 1),
            _mono(0, 1, 1, 0), _mono(1, 0, 0, 1),
            _mono(1, 0, 1, 0), _mono(0, 1, 0, 1),
        ]
        sizes = (2, 1, 1, 2, 2, 2)
        labels = ("M21", "b-c", "b-c'", "M22", "M22'", "M22''")
    else:
        raise ValueError(f"unknown form {form_id!r}")
    scale = tuple(sum(c * c for c in col.values()) for col in cols)
    return BlockBasis(form_id, _columns_to_matrix(space, cols), sizes, scale, labels)


def block_decompose(form_id: str, y: PseudoMomentVector) -> list:
    """Diagonal blocks of ``T^T M_d(y) T`` for the form's integer block basis."""
    if not is_invariant(form_id, y):
        raise ValueError(f"moment vector is not invariant under the {form_id} group")
    basis = block_basis(form_id)
    C = congruence(moment_matrix(y).matrix, basis.congruence)
    blocks = []
    owner = {}
    for b, idx in enumerate(basis.block_slices()):
        blocks.append(C.principal(list(idx)))
        for i in idx:
            owner[i] = b
    for i in range(C.size):
        for j in range(C.size):
            if owner[i] != owner[j] and C[i, j]:
                raise AssertionError(f"block basis leaks at ({i}, {j}) for {form_id}")
    return blocks


def block_params(params: OrbitParams) -> list:
    """Shortcut for ``block_decompose`` on an orbit-parameter point."""
    return block_decompose(params.form_id, orbit_embed(params))


def robinson_psd_predicate(a, b, c) -> bool:
    """PSD of the Robinson moment matrix via ``det M31 = (b - c)(ab + ac - 2b^2)``."""
    a, b, c = (as_rational(t) for t in (a, b, c))
    return min(a, b, c) >= 0 and a >= b >= c and a * (b + c) >= 2 * b * b


def block_char_polys(form_id: str, y: PseudoMomentVector) -> list:
    """Characteristic polynomials of the blocks in an orthonormal basis.

    With ``D`` the diagonal of squared column norms, the orthonormal block
    ``D^{-1/2} B D^{-1/2}`` is similar to the rational matrix ``D^{-1} B``.
    """
    scale = block_basis(form_id).scale
    out = []
    for blk, idx in zip(block_decompose(form_id, y), block_basis(form_id).block_slices()):
        s = [scale[i] for i in idx]
        out.append(char_poly([[Fraction(x) / s[r] for x in row] for r, row in enumerate(blk.rows)]))
    return out
