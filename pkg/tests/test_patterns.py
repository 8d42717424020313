import numpy as np
import pytest
from hypothesis import given, strategies as st

from strata_lab import linalg
from strata_lab.field import GF, QQ
from strata_lab.morphism import TEMPLATES, apply_equivalence, random_equivalence, random_morphism
from strata_lab.patterns import (
    X0_PATTERNS,
    X2_FORMS,
    X4_PATTERNS,
    field_sqrt,
    pencil_rank_le1,
    probe_pattern,
    upoly_gcd,
    upoly_roots,
    x0_pattern_free,
    x2_form_free,
    x2_phi2_by_enumeration,
    x4_condition,
    x4_pattern_free,
)

DECIDERS = {"X0": (x0_pattern_free, X0_PATTERNS), "X2": (x2_form_free, X2_FORMS),
            "X4": (x4_pattern_free, X4_PATTERNS)}


def planted(label, cells, seed, field):
    """An injective member with ``cells`` zero, moved by a random group element."""
    rng = np.random.default_rng(seed)
    while True:
        phi = random_morphism(TEMPLATES[label], rng, field, zero_cells=cells)
        if not phi.det.is_zero():
            return apply_equivalence(random_equivalence(phi, rng), phi)


def replays(report, verdict):
    out = apply_equivalence(verdict.certificate, report.morphism)
    return all(out.is_zero_at(i, j) for i, j in verdict.cells)


@pytest.mark.parametrize("p", [101, 7, 3])
@pytest.mark.parametrize("label, name", [(l, n) for l, (_, pats) in DECIDERS.items() for n in pats])
def test_planted_patterns_are_found(label, name, p):
    decide, patterns = DECIDERS[label]
    for seed in range(5):
        phi = planted(label, patterns[name], seed, GF(p))
        report = decide(phi)
        assert not report.free
        v = report[name]
        if v.reachable is None:
            # left undecided because another form already applies
            assert any(o.reachable for o in report.verdicts)
        elif v.certificate is not None:
            assert replays(report, v)
        else:
            assert v.reachable and v.closure_only
        for other in report.verdicts:
            if other.reachable and other.certificate is not None:
                assert replays(report, other)


@pytest.mark.parametrize("label", list(DECIDERS))
def test_generic_members_are_free_and_survive_probes(label):
    decide, patterns = DECIDERS[label]
    for seed in range(5):
        phi = random_morphism(TEMPLATES[label], 100 + seed, GF(101))
        report = decide(phi)
        assert report.free
        for cells in patterns.values():
            assert probe_pattern(report.morphism, cells, trials=300, seed=seed).hits == 0


def test_probe_counts_trivial_pattern():
    phi = random_morphism(TEMPLATES["X6"], 0, GF(5))
    res = probe_pattern(phi, (), trials=200, seed=1)
    assert res.hits == res.trials - res.skipped > 0


def test_probe_rejects_rationals():
    from strata_lab.parsing import parse_poly
    from strata_lab.morphism import make_morphism
    phi = make_morphism(QQ, [-4, 0], [1, 1], [[parse_poly("X^5", QQ), parse_poly("X", QQ)],
                                             [parse_poly("Y^5", QQ), parse_poly("Y", QQ)]])
    with pytest.raises(ValueError):
        probe_pattern(phi, ((0, 0),))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_phi2_closed_form_matches_enumeration(p):
    f = GF(p)
    for seed in range(40):
        if seed % 2:
            phi = planted("X2", X2_FORMS["phi2"], seed, f)
        else:
            phi = random_morphism(TEMPLATES["X2"], seed, f)
            if phi.det.is_zero():
                continue
        report = x2_form_free(phi)
        if report["phi1"].reachable or report["phi3"].reachable:
            continue
        assert bool(report["phi2"].reachable) == x2_phi2_by_enumeration(phi)


@pytest.mark.parametrize("seed", range(30))
def test_x4_condition_equivalent_to_freeness(seed):
    f = GF(101)
    patterns = list(X4_PATTERNS.values())
    cells = patterns[seed % 4] if seed % 5 else ()
    phi = planted("X4", cells, seed, f)
    assert x4_condition(phi) == x4_pattern_free(phi).free


@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.integers(0, 6), min_size=3, max_size=3))
def test_quadratic_roots_brute_force(p, coeffs):
    f = GF(p)
    g = [f(c) for c in coeffs[:2]] + [1]
    expected = sorted(t for t in range(p) if (g[0] + g[1] * t + t * t) % p == 0)
    assert sorted(upoly_roots(g, f)) == expected


@given(st.integers(1, 10 ** 6))
def test_field_sqrt(n):
    f = GF(101)
    s = field_sqrt(f, n)
    squares = {x * x % 101 for x in range(101)}
    if n % 101 in squares:
        assert s * s % 101 == n % 101
    else:
        assert s is None
    assert field_sqrt(QQ, 9 / 4) == 3 / 2 and field_sqrt(QQ, 2) is None


def test_gcd():
    f = GF(7)
    # (t-1)(t-2) and (t-1)(t-3)
    a = [2, -3 % 7, 1]
    b = [3, -4 % 7, 1]
    assert upoly_gcd(a, b, f) == [6, 1]
    assert upoly_gcd([], [], f) == []


@given(st.sampled_from([2, 3, 5]), st.integers(0, 2 ** 32 - 1))
def test_pencil_brute_force(p, seed):
    f = GF(p)
    rng = np.random.default_rng(seed)
    a, b = rng.integers(0, p, size=(2, 3, 3))
    if seed % 3 == 0:  # make a rank-one member more likely
        a = np.outer(rng.integers(0, p, 3), rng.integers(0, p, 3)) % p
    res = pencil_rank_le1(f.array(a), f.array(b), f)
    points = [(1, 0)] + [(t, 1) for t in range(p)]
    good = {pt for pt in points if linalg.rank(f.array((pt[0] * a + pt[1] * b) % p), f) <= 1}
    if res.everywhere:
        assert good == set(points)
    else:
        assert {(int(c1), int(c2)) for c1, c2 in res.roots} == good
        if good:
            assert res.exists


def _gaussian_rank_one(p):
    """Real and imaginary parts of u v^T over F_p[i], i^2 = -1 (p = 3 mod 4)."""
    u = [(1, 0), (0, 1), (2, 1)]
    v = [(1, 0), (0, 1), (1, 1), (2, 3)]
    re = [[(a * c - b * d) % p for c, d in v] for a, b in u]
    im = [[(a * d + b * c) % p for c, d in v] for a, b in u]
    return np.array(re), np.array(im)


def test_x0_pattern_over_closure_only():
    from strata_lab.classify import classify
    from strata_lab.morphism import make_morphism
    from strata_lab.poly import HomPoly

    p = 7
    f = GF(p)
    re, im = _gaussian_rank_one(p)
    rng = np.random.default_rng(0)
    top = [[HomPoly.linear(f, m[:, j]) for j in range(4)] for m in (re, im)]
    bottom = [[HomPoly.from_array(f, 2, f.random(rng, 6)) for _ in range(4)] for _ in range(2)]
    phi = make_morphism(f, [-2] * 4, [-1, -1, 0, 0], top + bottom)
    assert not phi.det.is_zero()
    # no rational member of the pencil has rank <= 1
    for c in [(1, 0)] + [(t, 1) for t in range(p)]:
        assert linalg.rank(f.array((c[0] * re + c[1] * im) % p), f) > 1
    report = x0_pattern_free(phi)
    v = report["P1"]
    assert v.reachable and v.closure_only and v.certificate is None
    assert classify(phi).label == "rejected"
