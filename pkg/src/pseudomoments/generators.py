"""Constructive certificate generators for the four named forms.

Every builder validates the caller's pinned values against the bounds of
its algorithm and fills unpinned ones with the binding bound (the ceiling
of it in ``integer_mode``). Bounds that must hold strictly default to the
smallest integer above them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .exactnum import QuadExt, as_rational, format_scalar
from .linalg_exact import is_psd, rank_exact, rref
from .moments import moment_matrix
from .symmetry import OrbitParams, block_decompose, functional_shortcut, orbit_embed


class GeneratorError(ValueError):
    """A seed or pinned value violates a step of the construction."""

    def __init__(self, step, message):
        self.step = step
        super().__init__(f"Step {step}: {message}" if step is not None else message)


def _q(x) -> Optional[Fraction]:
    return None if x is None else as_rational(x)


def _fmt(x) -> str:
    return format_scalar(x)


def _ceil(x: Fraction) -> Fraction:
    return Fraction(math.ceil(x))


def _above(x: Fraction) -> Fraction:
    """Smallest integer strictly greater than ``x``."""
    return Fraction(math.floor(x) + 1)


def _at_least(name, given, bound, step, integer_mode):
    if given is None:
        return _ceil(bound) if integer_mode else bound
    if given < bound:
        raise GeneratorError(step, f"{name} = {_fmt(given)} is below the bound {_fmt(bound)}")
    return given


def _greater_than(name, given, bound, step):
    if given is None:
        return _above(bound)
    if given <= bound:
        raise GeneratorError(step, f"{name} = {_fmt(given)} must exceed {_fmt(bound)}")
    return given


def _positive(step, **values):
    for name, v in values.items():
        if v is None:
            raise GeneratorError(step, f"{name} is required")
        if v <= 0:
            raise GeneratorError(step, f"{name} = {_fmt(v)} must be positive")


# -- Motzkin ---------------------------------------------------------------


def gen_motzkin_general(f=1, c=None, e=None, a=None, b=None, d=None, integer_mode=False) -> OrbitParams:
    """Point of the Motzkin certificate cone with ``f - 3c + 2e <= -1``."""
    f, c, e, a, b, d = map(_q, (f, c, e, a, b, d))
    _positive(0, f=f)
    c = _at_least("c", c, (f + 3) / 3, 1, integer_mode)
    e_max = (3 * c - f - 1) / 2
    if e is None:
        e = Fraction(math.floor(e_max)) if integer_mode else e_max
    if not 0 < e <= e_max:
        raise GeneratorError(1, f"e = {_fmt(e)} must lie in (0, {_fmt(e_max)}]")
    a = _at_least("a", a, (c * c + 1) / e, 2, integer_mode)
    b = _at_least("b", b, max(c, 2 * a * a / f - c), 3, integer_mode)
    d = _at_least("d", d, max(b * b / a, e + e * (b - c) ** 2 / (a * e - c * c)), 4, integer_mode)
    return OrbitParams("motzkin", (a, b, c, d, e, f))


def gen_motzkin_extreme(f, c, e, a) -> OrbitParams:
    """Rank-7 extreme certificate: saturate the M33 Schur complement and det M31."""
    f, c, e, a = map(_q, (f, c, e, a))
    _positive(0, f=f, c=c, e=e)
    if f - 3 * c + 2 * e >= 0:
        raise GeneratorError(0, f"f - 3c + 2e = {_fmt(f - 3 * c + 2 * e)} is not negative")
    _positive(1, a=a)
    if a * e - c * c <= 0:
        raise GeneratorError(1, "need ae - c^2 > 0")
    if a * a / f <= c:
        raise GeneratorError(1, "need a^2/f > c")
    b = 2 * a * a / f - c
    d = e + e * (b - c) ** 2 / (a * e - c * c)
    return OrbitParams("motzkin", (a, b, c, d, e, f))


def gen_motzkin_integer_family() -> list:
    """Integer extreme rays with f = 1, c = e = 2; d is integral iff (a - 2) | 16."""
    out = []
    for a in range(3, 19):
        if 16 % (a - 2) == 0:
            out.append(gen_motzkin_extreme(1, 2, 2, a))
    return out


# -- Robinson --------------------------------------------------------------


def robinson_member(a, b, c) -> bool:
    """Membership of ``(a, b, c)`` in the Robinson certificate cone."""
    a, b, c = map(as_rational, (a, b, c))
    return c >= 0 and a - 2 * b + c < 0 and a >= b >= c and a * (b + c) >= 2 * b * b


def _robinson_int(a: int, b: int, c: int) -> bool:
    return c >= 0 and a - 2 * b + c < 0 and a >= b >= c and a * (b + c) >= 2 * b * b


def robinson_enumerate(a: int) -> list:
    """All integer ``(b, c)`` with ``(a, b, c)`` a certificate, sorted."""
    if a < 1:
        raise ValueError("a must be a positive integer")
    return [(b, c) for b in range(a + 1) for c in range(b + 1) if _robinson_int(a, b, c)]


def robinson_count(a: int) -> int:
    return len(robinson_enumerate(a))


def robinson_minimal_integer(limit: int = 1000) -> list:
    """Integer certificates of minimal ``a + b + c``, in lexicographic order."""
    for s in range(1, limit + 1):
        found = []
        for a in range(s + 1):
            for b in range(s - a + 1):
                c = s - a - b
                if _robinson_int(a, b, c):
                    found.append((a, b, c))
        if found:
            return sorted(found)
    return []


def robinson_extreme(a, b, c) -> OrbitParams:
    """Certificate on the parabola ``a(b + c) = 2b^2`` (rank 7)."""
    a, b, c = map(as_rational, (a, b, c))
    if a * (b + c) != 2 * b * b:
        raise GeneratorError(None, f"a(b+c) = {_fmt(a * (b + c))} differs from 2b^2 = {_fmt(2 * b * b)}")
    if not robinson_member(a, b, c):
        raise GeneratorError(None, f"({_fmt(a)}, {_fmt(b)}, {_fmt(c)}) is not a Robinson certificate")
    return OrbitParams("robinson", (a, b, c))


def robinson_extreme_rays(a_max: int) -> list:
    """Integer points of the parabolic boundary with ``a <= a_max``."""
    out = []
    for a in range(1, a_max + 1):
        for b, c in robinson_enumerate(a):
            if a * (b + c) == 2 * b * b:
                out.append((a, b, c))
    return out


# -- Reznick octic ---------------------------------------------------------


def _corner_bound(block):
    """Least top-left entry making ``block`` PSD, or None if impossible.

    Writing the block as ``[[x, w^T], [w, R]]`` this is ``w^T R^+ w``,
    provided ``R >= 0`` and ``w`` lies in the range of ``R``.
    """
    R = [list(r[1:]) for r in block.rows[1:]]
    w = [r[0] for r in block.rows[1:]]
    if not is_psd(R):
        return None
    aug, pivots = rref([r + [wi] for r, wi in zip(R, w)])
    if len(R) in pivots:
        return None
    z = [Fraction(0)] * len(R)
    for row, pc in zip(aug, pivots):
        z[pc] = row[-1]
    return sum((wi * zi for wi, zi in zip(w, z)), Fraction(0))


def _reznick_a_for_m442(d, c, b, e, f, g, h, i):
    """Least ``a`` with M442 PSD (the integer block has corner ``2(a + f)``)."""
    blocks = block_decompose("reznick8", orbit_embed(OrbitParams("reznick8", (0, b, c, d, e, f, g, h, i))))
    corner = _corner_bound(blocks[5])
    if corner is None:
        return None
    return corner / 2 - f


def _reznick_step0(e, f, h, i, strict_ge=False):
    _positive(0, e=e, f=f, h=h, i=i)
    val = f + 2 * e - 3 * i
    if strict_ge:
        if val >= 0:
            raise GeneratorError(0, f"f + 2e - 3i = {_fmt(val)} is not negative")
    elif val > -1:
        raise GeneratorError(0, f"f + 2e - 3i = {_fmt(val)} exceeds -1")
    if e * h - i * i <= 0:
        raise GeneratorError(0, "need eh - i^2 > 0")


def gen_reznick_general(e, f, h, i, g=None, d=None, c=None, b=None, a=None, integer_mode=False) -> OrbitParams:
    """Point of the octic certificate cone with ``f + 2e - 3i <= -1``.

    The Step 5 bound on ``a`` also includes the exact requirement for the
    4x4 even block: the closed-form terms alone only suffice when ``d`` and
    ``c`` sit on particular terms of their bounds.
    """
    e, f, h, i, g, d, c, b, a = map(_q, (e, f, h, i, g, d, c, b, a))
    _reznick_step0(e, f, h, i)
    g = _at_least("g", g, max(i, (2 * h * h - i * f + 1) / f), 1, integer_mode)
    d = _at_least(
        "d", d,
        max(g * g / e, h * (g - i) ** 2 / (e * h - i * i) + h, g * (g + i) / e - h),
        2, integer_mode,
    )
    c = _at_least("c", c, max(h * (d + h) / (g + i), (2 * h * h - f * i) / i, f), 3, integer_mode)
    s2 = (g + i) * i - 2 * e * h
    s3 = (g + i) * f - 2 * h * h
    b_pinned = b is not None
    b = _at_least("b", b, 2 * e * e / (g + i) + s2 * s2 / ((g + i) * s3), 4, integer_mode)
    if not b_pinned and _reznick_a_for_m442(d, c, b, e, f, g, h, i) is None:
        # on the bound the even block also needs an alignment of c; step inside
        b = _above(b)
    if g == i:
        if d != h:
            raise GeneratorError(5, "g = i forces d = h for the 2x2 even block")
        a441 = f
    else:
        a441 = (d - h) ** 2 / (g - i) + f
    a442 = _reznick_a_for_m442(d, c, b, e, f, g, h, i)
    if a442 is None:
        raise GeneratorError(5, "even 4x4 block cannot be made PSD by raising a")
    a = _at_least("a", a, max(a441, (d + h) ** 2 / (g + i) - f, a442), 5, integer_mode)
    return OrbitParams("reznick8", (a, b, c, d, e, f, g, h, i))


@dataclass(frozen=True)
class ReznickExtreme:
    params: OrbitParams
    steps: frozenset
    block_ranks: tuple  # (M41, M42, M43, M441, M442)
    rank: int
    intermediates: dict = field(default_factory=dict)


def predicted_reznick_ranks(steps: Iterable[int]) -> tuple:
    steps = set(steps)
    m42 = 2 if 1 in steps else 3
    return (3, m42, m42, 1 if 2 in steps else 2, 3 if 3 in steps else 4)


def _reznick_block_tuple(params: OrbitParams) -> tuple:
    r = [rank_exact(blk) for blk in block_decompose("reznick8", orbit_embed(params))]
    return (r[0] + r[1], r[2], r[3], r[4], r[5])


def gen_reznick_extreme(e, f, h, i, g, steps=(1, 2, 3), d=None, a=None, b=None, c=None) -> ReznickExtreme:
    """Low-rank octic certificate saturating the requested boundary equalities.

    Step 1 fixes ``d`` (rank M42 = M43 = 2), Step 2 fixes ``a`` (rank
    M441 = 1), Step 3 fixes ``b`` and, through the alignment condition,
    ``c`` (rank M442 = 3). Parameters outside the requested steps are
    strictly inside their bounds; an unsaturated ``c`` defaults to the
    alignment value when that keeps M41 definite.
    """
    steps = frozenset(int(s) for s in steps)
    if not steps <= {1, 2, 3}:
        raise GeneratorError(None, f"steps must be a subset of {{1, 2, 3}}, got {sorted(steps)}")
    e, f, h, i, g, d, a, b, c = map(_q, (e, f, h, i, g, d, a, b, c))
    _reznick_step0(e, f, h, i, strict_ge=True)
    _positive(0, g=g)
    if g <= i:
        raise GeneratorError(0, f"need g > i, got g = {_fmt(g)}, i = {_fmt(i)}")
    s3 = (g + i) * f - 2 * h * h
    if s3 <= 0:
        raise GeneratorError(0, f"s3 = (g+i)f - 2h^2 = {_fmt(s3)} must be positive")
    s2 = (g + i) * i - 2 * e * h

    d_eq = h + h * (g - i) ** 2 / (e * h - i * i)
    if 1 in steps:
        if d is not None and d != d_eq:
            raise GeneratorError(1, f"d is fixed to {_fmt(d_eq)}")
        d = d_eq
    else:
        d = _greater_than("d", d, max(g * g / e, d_eq, g * (g + i) / e - h), 1)

    b_eq = 2 * e * e / (g + i) + s2 * s2 / ((g + i) * s3)
    if 3 in steps:
        if b is not None and b != b_eq:
            raise GeneratorError(3, f"b is fixed to {_fmt(b_eq)}")
        b = b_eq
        if s2 == 0:
            raise GeneratorError(4, "s2 = 0: the alignment step is undefined")
        c_eq = h * (d + h) / (g + i) + (s3 / s2) * (g - e * (d + h) / (g + i))
        if c is not None and c != c_eq:
            raise GeneratorError(4, f"c is fixed to {_fmt(c_eq)}")
        c = c_eq
        if not (c > f and (c + f) * i > 2 * h * h):
            raise GeneratorError(4, f"c = {_fmt(c)} leaves M41 singular or indefinite")
    else:
        b = _greater_than("b", b, b_eq, 3)
        c_bound = max(h * (d + h) / (g + i), (2 * h * h - f * i) / i, f)
        if c is None and s2:
            # the alignment value keeps the even-block bound on a low
            c_al = h * (d + h) / (g + i) + (s3 / s2) * (g - e * (d + h) / (g + i))
            if c_al > f and (c_al + f) * i > 2 * h * h:
                c = c_al
        if c is None:
            c = _above(c_bound)
        elif not (c > f and (c + f) * i > 2 * h * h):
            raise GeneratorError(4, f"c = {_fmt(c)} leaves M41 singular or indefinite")

    a442 = _reznick_a_for_m442(d, c, b, e, f, g, h, i)
    if a442 is None:
        raise GeneratorError(4, "even 4x4 block cannot be made PSD; adjust b or c")
    a_eq = f + (d - h) ** 2 / (g - i)
    if 2 in steps:
        if a is not None and a != a_eq:
            raise GeneratorError(2, f"a is fixed to {_fmt(a_eq)}")
        a = a_eq
        if a <= a442:
            raise GeneratorError(2, f"a = {_fmt(a)} does not clear the even-block bound {_fmt(a442)}")
    else:
        a = _greater_than("a", a, max(a_eq, a442), 2)

    params = OrbitParams("reznick8", (a, b, c, d, e, f, g, h, i))
    predicted = predicted_reznick_ranks(steps)
    actual = _reznick_block_tuple(params)
    if actual != predicted:
        raise GeneratorError(None, f"block ranks {actual} differ from the predicted {predicted}")
    return ReznickExtreme(params, steps, predicted, sum(predicted), {"s2": s2, "s3": s3})


# -- Choi-Lam --------------------------------------------------------------


def choilam_member(a, b, c, d, e) -> bool:
    a, b, c, d, e = map(as_rational, (a, b, c, d, e))
    return (
        min(a, b, c, d) >= 0
        and a + 3 * c - 4 * e < 0
        and b >= c
        and (b + 2 * c) * a >= 3 * d * d
        and c * d >= e * e
    )


def gen_choilam_general(c, f, e=None, g=None, b=None, integer_mode=False) -> OrbitParams:
    """Choi-Lam certificate with separation value ``-f``.

    ``e`` must exceed ``(3c + f)/4`` strictly: equality gives ``a = 0``,
    which no PSD point with ``d > 0`` allows.
    """
    c, f, e, g, b = map(_q, (c, f, e, g, b))
    _positive(0, c=c, f=f)
    e = _greater_than("e", e, (3 * c + f) / 4, 0)
    a = 4 * e - 3 * c - f
    if g is None:
        g = (_ceil(e * e / c) - e * e / c) if integer_mode else Fraction(0)
    elif g < 0:
        raise GeneratorError(1, f"g = {_fmt(g)} must be nonnegative")
    d = e * e / c + g
    b = _at_least("b", b, max(c, 3 * d * d / a - 2 * c), 2, integer_mode)
    return OrbitParams("choilam", (a, b, c, d, e))


def gen_choilam_extreme(u, v, b=None) -> OrbitParams:
    """Rank-6 Choi-Lam certificate with ``cd = e^2`` and ``(b + 2c)a = 3d^2``."""
    u, v, b = map(_q, (u, v, b))
    _positive(0, u=u, v=v)
    if 4 * v <= 3 * u:
        raise GeneratorError(0, "need 4v > 3u")
    c, d, e = u * u, v * v, u * v
    bound = max(c, 3 * v**4 / (u * (4 * v - 3 * u)) - 2 * u * u)
    if b is None:
        b = _above(bound)
    elif b < bound:
        raise GeneratorError(2, f"b = {_fmt(b)} is below the bound {_fmt(bound)}")
    a = 3 * d * d / (b + 2 * c)
    value = a + 3 * c - 4 * e
    if value >= 0:
        raise GeneratorError(3, f"separation a + 3c - 4e = {_fmt(value)} is not strictly negative")
    return OrbitParams("choilam", (a, b, c, d, e))


def choilam_rank(params: OrbitParams) -> int:
    """Rank of M_2(y) from the closed-form classification ``2 + r1 + 3 r2``."""
    if params.form_id != "choilam":
        raise ValueError("not a Choi-Lam parameter set")
    a, b, c, d, e = params.values
    if not choilam_member(a, b, c, d, e):
        raise ValueError(f"{params} is not in the Choi-Lam certificate cone")
    r1 = 1 if (b + 2 * c) * a == 3 * d * d else 2
    r2 = 1 if e * e == c * d else 2
    return 2 + r1 + 3 * r2


# -- convex decompositions -------------------------------------------------


@dataclass
class DecompositionReport:
    residuals: dict
    endpoint_psd: list
    endpoint_ranks: list
    endpoint_values: list
    expected_rank: Optional[int]
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures


def decompose_check(target: OrbitParams, endpoints, weights, expected_rank: Optional[int] = 6) -> DecompositionReport:
    """Check that ``target`` is the stated convex combination of certificates.

    Endpoints may carry Q(sqrt 2) values; every check is exact.
    """
    weights = [as_rational(w) for w in weights]
    if len(weights) != len(endpoints):
        raise ValueError("need one weight per endpoint")
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be positive")
    if sum(weights) != 1:
        raise ValueError("weights do not sum to 1")
    for ep in endpoints:
        if ep.form_id != target.form_id:
            raise ValueError(f"endpoint form {ep.form_id} differs from target {target.form_id}")

    residuals = {}
    for k, name in enumerate(target.names):
        mix = sum((w * ep.values[k] for w, ep in zip(weights, endpoints)), Fraction(0))
        diff = mix - target.values[k]
        if isinstance(diff, QuadExt) and not diff.surd:
            diff = diff.rat
        residuals[name] = diff
    failures = [f"combination differs from target on {k}" for k, r in residuals.items() if r]

    # the orbit map is linear, but recheck on full moment vectors as well
    y = orbit_embed(target)
    mix = None
    for w, ep in zip(weights, endpoints):
        term = w * orbit_embed(ep)
        mix = term if mix is None else mix + term
    if not failures and tuple(mix.values) != tuple(y.values):
        failures.append("moment vectors of the combination differ from the target")

    psd, ranks, values = [], [], []
    for k, ep in enumerate(endpoints):
        M = moment_matrix(orbit_embed(ep)).matrix
        psd.append(is_psd(M))
        ranks.append(rank_exact(M))
        values.append(functional_shortcut(ep))
        if not psd[-1]:
            failures.append(f"endpoint {k} is not PSD")
        if expected_rank is not None and ranks[-1] != expected_rank:
            failures.append(f"endpoint {k} has rank {ranks[-1]}, expected {expected_rank}")
        if not values[-1] < 0:
            failures.append(f"endpoint {k} has nonnegative value {_fmt(values[-1])}")
    return DecompositionReport(residuals, psd, ranks, values, expected_rank, failures)
