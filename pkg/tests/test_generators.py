import random
from fractions import Fraction

import pytest

import seeds
from pseudomoments import generators as gen
from pseudomoments.exactnum import QuadExt
from pseudomoments.forms import named_form
from pseudomoments.linalg_exact import rank_exact
from pseudomoments.moments import check_extreme, moment_matrix, verify_certificate
from pseudomoments.symmetry import OrbitParams, orbit_embed

N_SEEDS = 200


def _verify(params, extreme=False):
    return verify_certificate(named_form(params.form_id), orbit_embed(params), extreme=extreme)


def _vals(p):
    return tuple(p.values)


# -- Motzkin


def test_motzkin_general_examples():
    assert _verify(gen.gen_motzkin_general(1, 2, 2, 3, 17, 228)).rank == 10
    assert _verify(gen.gen_motzkin_general(1, 2, 2, 3, 16, 199)).rank == 9
    rep = _verify(gen.gen_motzkin_general(1))
    assert rep.valid and rep.value <= -1
    assert _vals(gen.gen_motzkin_general(integer_mode=True)) == (3, 16, 2, 198, 2, 1)


@pytest.mark.parametrize(
    "kw, step",
    [({"c": 1}, 1), ({"c": 2, "e": 3}, 1), ({"c": 2, "e": 2, "a": 2}, 2), ({"c": 2, "e": 2, "a": 3, "b": 15}, 3),
     ({"c": 2, "e": 2, "a": 3, "b": 16, "d": 197}, 4), ({"f": 0}, 0)],
)
def test_motzkin_general_violations_name_the_step(kw, step):
    with pytest.raises(gen.GeneratorError) as info:
        gen.gen_motzkin_general(**kw)
    assert info.value.step == step
    assert str(info.value).startswith(f"Step {step}:")


def test_motzkin_extreme_examples():
    assert _vals(gen.gen_motzkin_extreme(1, 2, 2, 3)) == (3, 16, 2, 198, 2, 1)
    p = gen.gen_motzkin_extreme(1, 2, 2, 4)
    assert (p.b, p.d) == (30, 394)
    p = gen.gen_motzkin_extreme(1, 2, 2, 18)
    assert (p.b, p.d) == (646, 25923)
    with pytest.raises(gen.GeneratorError):
        gen.gen_motzkin_extreme(1, 2, 3, 3)  # f - 3c + 2e = 1
    with pytest.raises(gen.GeneratorError):
        gen.gen_motzkin_extreme(1, 2, 2, 2)  # ae = c^2


def test_motzkin_integer_family():
    fam = gen.gen_motzkin_integer_family()
    assert [p.a for p in fam] == [3, 4, 6, 10, 18]
    assert _vals(fam[2]) == (6, 70, 2, 1158, 2, 1)
    assert _vals(fam[3]) == (10, 198, 2, 4804, 2, 1)
    for p in fam:
        assert p.b == 2 * p.a**2 - 2 and p.d == 2 + Fraction((2 * p.a**2 - 4) ** 2, p.a - 2)
    # a = 5 gives a non-integral d
    assert gen.gen_motzkin_extreme(1, 2, 2, 5).d.denominator != 1


def test_motzkin_general_random_seeds():
    rng = random.Random(2024)
    for _ in range(N_SEEDS):
        rep = _verify(seeds.motzkin_general(rng))
        assert rep.psd and rep.value <= -1
        assert rep.rank in (7, 8, 9, 10)


def test_motzkin_extreme_random_seeds():
    rng = random.Random(2025)
    for _ in range(N_SEEDS):
        rep = _verify(seeds.motzkin_extreme(rng), extreme=True)
        assert rep.valid and rep.rank == 7 and rep.extreme


# -- Robinson


def test_robinson_member_examples():
    assert gen.robinson_member(1, Fraction(2, 3), Fraction(1, 4))
    assert not gen.robinson_member(1, 1, 1)
    assert gen.robinson_member(8, 6, 3)


def test_robinson_member_agrees_with_psd_and_value():
    from pseudomoments.linalg_exact import is_psd

    for a in range(0, 11):
        for b in range(0, 11):
            for c in range(0, 11):
                y = orbit_embed(OrbitParams("robinson", (a, b, c)))
                expect = is_psd(moment_matrix(y).matrix) and 3 * (a - 2 * b + c) < 0
                assert gen.robinson_member(a, b, c) == expect, (a, b, c)


def test_robinson_enumeration():
    assert [gen.robinson_count(a) for a in range(1, 12)] == [0] * 7 + [1, 2, 2, 3]
    assert gen.robinson_enumerate(8) == [(6, 3)]
    assert gen.robinson_enumerate(11) == [(7, 2), (8, 4), (9, 6)]
    with pytest.raises(ValueError):
        gen.robinson_enumerate(0)


def test_robinson_enumeration_brute_force_fractional_check():
    # independent membership test through exact PSD of the embedded matrix
    from pseudomoments.linalg_exact import is_psd

    for a in (9, 10, 12):
        brute = [
            (b, c) for b in range(a + 1) for c in range(b + 1)
            if a - 2 * b + c < 0 and is_psd(moment_matrix(orbit_embed(OrbitParams("robinson", (a, b, c)))).matrix)
        ]
        assert brute == gen.robinson_enumerate(a)


def test_robinson_minimal():
    best = gen.robinson_minimal_integer()
    assert best == [(8, 6, 3), (9, 6, 2)]
    for t in best:
        assert 3 * (t[0] - 2 * t[1] + t[2]) == -3
    assert not any(
        gen.robinson_member(a, b, 16 - a - b) for a in range(17) for b in range(17 - a)
    )


def test_robinson_extreme():
    for t in [(8, 6, 3), (9, 6, 2), (16, 12, 6), (18, 12, 4), (24, 18, 9)]:
        rep = _verify(gen.robinson_extreme(*t), extreme=True)
        assert rep.valid and rep.rank == 7 and rep.block_ranks == [2, 2, 2, 1] and rep.extreme
    with pytest.raises(gen.GeneratorError):
        gen.robinson_extreme(9, 6, 3)
    rays = gen.robinson_extreme_rays(24)
    assert rays[:2] == [(8, 6, 3), (9, 6, 2)] and (24, 18, 9) in rays


def test_robinson_growth():
    assert abs(gen.robinson_count(200) * 24 / 200**2 - 1) < 0.15


# -- Reznick octic


@pytest.mark.parametrize(
    "row, rank",
    [((2392, 25, 40, 166, 3, 2, 14, 4, 3), 15), ((1159, 50, 33, 107, 4, 3, 13, 5, 4), 14), ((1194, 50, 33, 107, 4, 3, 13, 5, 4), 15)],
)
def test_reznick_general_pinned_rows(row, rank):
    a, b, c, d, e, f, g, h, i = row
    p = gen.gen_reznick_general(e, f, h, i, g, d, c, b, a)
    assert _vals(p) == row
    rep = _verify(p)
    assert rep.valid and rep.rank == rank


def test_reznick_general_rejects_rank11_row_at_step3():
    with pytest.raises(gen.GeneratorError) as info:
        gen.gen_reznick_general(6, 2, 5, 5, 21, 261, 50, 97, 4098)
    assert info.value.step == 3


def test_reznick_general_step0():
    with pytest.raises(gen.GeneratorError) as info:
        gen.gen_reznick_general(1, 1, 1, 1)
    assert info.value.step == 0


def test_reznick_general_random_seeds():
    rng = random.Random(8)
    for _ in range(N_SEEDS):
        rep = _verify(seeds.reznick_general(rng))
        assert rep.psd and rep.value <= -1


def test_reznick_extreme_rank11():
    r = gen.gen_reznick_extreme(6, 2, 5, 5, 21, steps={1, 2, 3})
    assert _vals(r.params) == (4098, 97, 50, 261, 6, 2, 21, 5, 5)
    assert r.intermediates == {"s2": 70, "s3": 2}
    assert r.block_ranks == (3, 2, 2, 1, 3) and r.rank == 11
    rep = _verify(r.params, extreme=True)
    assert rep.valid and rep.rank == 11 and rep.extreme


def test_reznick_extreme_table_rows():
    r = gen.gen_reznick_extreme(5, 4, 6, 5, 15, steps={1}, a=1445, b=14, c=40)
    assert r.params.d == 126 and r.rank == 13 and _verify(r.params).rank == 13
    r = gen.gen_reznick_extreme(5, 4, 6, 5, 15, steps={1, 2}, b=14, c=40)
    assert r.params.a == 1444 and r.rank == 12 and _verify(r.params).rank == 12


@pytest.mark.parametrize(
    "steps, total",
    [((), 15), ((1,), 13), ((2,), 14), ((3,), 14), ((1, 2), 12), ((1, 3), 12), ((2, 3), 13), ((1, 2, 3), 11)],
)
def test_reznick_predicted_ranks(steps, total):
    assert sum(gen.predicted_reznick_ranks(steps)) == total


def test_reznick_extreme_errors():
    with pytest.raises(gen.GeneratorError):
        gen.gen_reznick_extreme(6, 2, 5, 5, 5)  # g = i
    with pytest.raises(gen.GeneratorError):
        gen.gen_reznick_extreme(6, 2, 5, 5, 21, steps={1}, d=260)
    with pytest.raises(gen.GeneratorError):
        gen.gen_reznick_extreme(6, 2, 5, 5, 21, steps={4})
    # s2 = (g+i)i - 2eh vanishes: e=5, h=5, i=5, g=5 is excluded (g > i), so use g+i = 2eh/i
    with pytest.raises(gen.GeneratorError) as info:
        gen.gen_reznick_extreme(5, 3, 4, 4, 6, steps={3})
    assert info.value.step in (0, 4)


def test_reznick_extreme_random_seeds():
    rng = random.Random(99)
    built = 0
    for _ in range(5 * N_SEEDS):
        r = seeds.reznick_extreme(rng)
        if r is None:
            continue
        rep = _verify(r.params)
        assert rep.valid
        assert tuple(rep.block_ranks[:1]) and rep.rank == r.rank
        built += 1
        if built == N_SEEDS:
            break
    assert built == N_SEEDS


# -- Choi-Lam


def test_choilam_general_examples():
    p = gen.gen_choilam_general(2, 1, 2, 1, 24)
    assert _vals(p) == (1, 24, 2, 3, 2)
    rep = _verify(p)
    assert rep.value == -1 and rep.rank == 10
    assert _verify(gen.gen_choilam_general(2, 1, 2, 1, 23)).rank == 9
    with pytest.raises(gen.GeneratorError):
        gen.gen_choilam_general(0, 1)
    with pytest.raises(gen.GeneratorError):
        gen.gen_choilam_general(2, 1, e=Fraction(7, 4))  # e = (3c+f)/4 forces a = 0


def test_choilam_extreme_examples():
    p = gen.gen_choilam_extreme(1, 1, 2)
    assert _vals(p) == (Fraction(3, 4), 2, 1, 1, 1)
    rep = _verify(p, extreme=True)
    assert rep.value == Fraction(-1, 4) and rep.rank == 6 and rep.extreme
    with pytest.raises(gen.GeneratorError) as info:
        gen.gen_choilam_extreme(1, 1, 1)
    assert info.value.step == 3
    with pytest.raises(gen.GeneratorError):
        gen.gen_choilam_extreme(4, 3)  # 4v = 3u


def test_choilam_rank_examples():
    for t, r in [((1, 23, 2, 3, 2), 9), ((2, 8, 3, 3, 3), 7), ((4, 10, 1, 4, 2), 6)]:
        assert gen.choilam_rank(OrbitParams("choilam", t)) == r
    with pytest.raises(ValueError):
        gen.choilam_rank(OrbitParams("choilam", (1, 1, 1, 1, 1)))


def test_choilam_general_random_seeds():
    rng = random.Random(31)
    for _ in range(N_SEEDS):
        p = seeds.choilam_general(rng)
        rep = _verify(p)
        assert rep.valid and rep.rank in (6, 7, 9, 10)
        assert gen.choilam_rank(p) == rep.rank


def test_choilam_extreme_random_seeds():
    rng = random.Random(32)
    for _ in range(N_SEEDS):
        p = seeds.choilam_extreme(rng)
        rep = _verify(p)
        assert rep.valid and rep.rank == 6 == gen.choilam_rank(p)


# -- decompositions

R2 = QuadExt(0, 1)


def _first_decomposition():
    target = OrbitParams("choilam", (1, 23, 2, 3, 2))
    e1 = OrbitParams("choilam", (1, 23 - Fraction(8, 3) * R2, 2 + Fraction(4, 3) * R2, 3, 2 + R2))
    e2 = OrbitParams("choilam", (1, 23 + Fraction(8, 3) * R2, 2 - Fraction(4, 3) * R2, 3, 2 - R2))
    return target, [e1, e2]


def test_decompose_first():
    target, eps = _first_decomposition()
    rep = gen.decompose_check(target, eps, [Fraction(1, 2)] * 2)
    assert rep.passed and rep.endpoint_ranks == [6, 6] and rep.endpoint_values == [-1, -1]


def test_decompose_second_and_swapped():
    target = OrbitParams("choilam", (4, 11, 1, 4, 2))
    eps = [OrbitParams("choilam", (Fraction(8, 3), 16, 1, 4, 2)), OrbitParams("choilam", (Fraction(24, 5), 8, 1, 4, 2))]
    rep = gen.decompose_check(target, eps, [Fraction(3, 8), Fraction(5, 8)])
    assert rep.passed and rep.endpoint_ranks == [6, 6] and all(v < 0 for v in rep.endpoint_values)
    bad = gen.decompose_check(target, eps, [Fraction(5, 8), Fraction(3, 8)])
    assert not bad.passed
    assert bad.residuals["a"] == Fraction(5, 8) * Fraction(8, 3) + Fraction(3, 8) * Fraction(24, 5) - 4
    assert bad.residuals["a"] == Fraction(-8, 15)


def test_decompose_errors_and_failures():
    target, eps = _first_decomposition()
    with pytest.raises(ValueError, match="weights do not sum to 1"):
        gen.decompose_check(target, eps, [Fraction(1, 3), Fraction(1, 3)])
    with pytest.raises(ValueError):
        gen.decompose_check(target, eps, [1])
    with pytest.raises(ValueError):
        gen.decompose_check(OrbitParams("motzkin", (3, 16, 2, 198, 2, 1)), eps, [Fraction(1, 2)] * 2)
    # the target itself is rank 9, so as a single endpoint the rank check fails
    rep = gen.decompose_check(target, [target], [1])
    assert not rep.passed and any("rank 9" in f for f in rep.failures)
