import json

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from strata_lab.errors import DegreeError, FieldMismatchError, NotInjectiveError, ParseError, ShapeError
from strata_lab.field import GF, QQ
from strata_lab.io import dumps_morphism, loads_morphism, morphism_from_json, morphism_to_json
from strata_lab.morphism import (
    LABELS,
    TEMPLATES,
    EquivalenceElement,
    apply_equivalence,
    block,
    canonicalize,
    compose,
    dual_resolution,
    hilbert_polynomial,
    identity_morphism,
    is_injective,
    make_morphism,
    match_template,
    random_equivalence,
    random_morphism,
    shape_hilbert_polynomial,
)
from strata_lab.parsing import parse_poly
from strata_lab.poly import HomPoly

F = GF(101)
X, Y, Z = sympy.symbols("X Y Z")
labels = st.sampled_from(LABELS)
seeds = st.integers(0, 2 ** 32 - 1)


def sympy_det_mod(phi, p):
    m = sympy.Matrix(phi.shape[0], phi.shape[1],
                     lambda i, j: sympy.sympify(phi.entry(i, j).to_str().replace("^", "**")))
    return sympy.Poly(m.det(method="berkowitz"), X, Y, Z, modulus=p)


def test_template_table():
    assert LABELS == ("X0", "X1", "X2", "X3", "X4", "X5", "X6")
    assert [TEMPLATES[l].source.rank for l in LABELS] == [4, 5, 3, 4, 3, 3, 2]
    for s in TEMPLATES.values():
        assert shape_hilbert_polynomial(s.source, s.target) == (6, 2)


@pytest.mark.parametrize("label", LABELS)
def test_determinant_matches_sympy(label):
    phi = random_morphism(TEMPLATES[label], 11, F)
    ours = phi.det
    assert ours.degree == 6
    expected = sympy_det_mod(phi, 101)
    assert sympy.Poly(ours.to_str().replace("^", "**"), X, Y, Z, modulus=101) == expected


def test_degree_violation_lists_cells():
    with pytest.raises(DegreeError) as info:
        make_morphism(F, [-4, 0], [1, 1], [[parse_poly("X^5", F), parse_poly("X^2", F)],
                                          [parse_poly("Y^5", F), parse_poly("Y", F)]])
    assert "cell (1,2)" in str(info.value)
    assert len(info.value.violations) == 1


def test_zero_entries_normalised():
    phi = make_morphism(F, [-4, 0], [1, 1], [[0, parse_poly("X", F)], [parse_poly("Y^5", F), None]])
    assert phi.entry(0, 0).degree == 5 and phi.entry(0, 0).is_zero()
    assert phi.det.is_zero() is False
    assert not is_injective(make_morphism(F, [-4, 0], [1, 1], [[0, 0], [parse_poly("Y^5", F), 0]]))


def test_hilbert_requires_injective():
    phi = make_morphism(F, [-4, 0], [1, 1], [[0, 0], [0, 0]])
    with pytest.raises(NotInjectiveError):
        hilbert_polynomial(phi)


@given(labels, seeds)
def test_group_action_scales_det(label, seed):
    rng = np.random.default_rng(seed)
    phi = random_morphism(TEMPLATES[label], rng, F)
    g = random_equivalence(phi, rng)
    psi = apply_equivalence(g, phi)
    d0, d1 = phi.det, psi.det
    if d0.is_zero():
        assert d1.is_zero()
        return
    k = next(i for i, c in enumerate(d0.coeffs) if c)
    c = d1.coeffs[k] * F.inv(d0.coeffs[k]) % 101
    assert c != 0 and d1 == d0.scale(c)


@given(labels, seeds)
def test_dual_is_involutive(label, seed):
    phi = random_morphism(TEMPLATES[label], seed, F)
    dual = dual_resolution(phi)
    assert dual_resolution(dual) == phi
    assert shape_hilbert_polynomial(dual.source, dual.target) == (6, 4)


@given(labels, seeds)
def test_canonicalize_idempotent_and_permutation_invariant(label, seed):
    rng = np.random.default_rng(seed)
    phi = random_morphism(TEMPLATES[label], rng, F)
    r, c = rng.permutation(phi.shape[0]), rng.permutation(phi.shape[1])
    scrambled = make_morphism(F, [phi.source.twists[j] for j in c], [phi.target.twists[i] for i in r],
                              [[phi.entries[i][j] for j in c] for i in r])
    assert match_template(scrambled).label == label
    canon = canonicalize(scrambled)[0]
    assert canonicalize(canon)[0] == canon
    assert list(canon.source.twists) == sorted(phi.source.twists)


@given(labels, seeds)
def test_json_roundtrip(label, seed):
    phi = random_morphism(TEMPLATES[label], seed, F)
    text = dumps_morphism(phi)
    assert loads_morphism(text) == phi
    assert dumps_morphism(loads_morphism(text)) == text


def test_json_roundtrip_rational():
    phi = make_morphism(QQ, [-4, 0], [1, 1], [[parse_poly("X^5/3 - Y^5", QQ), parse_poly("X", QQ)],
                                             [parse_poly("Z^5", QQ), parse_poly("Y - 2/5*Z", QQ)]])
    assert loads_morphism(dumps_morphism(phi)) == phi


def test_json_errors():
    phi = random_morphism(TEMPLATES["X6"], 0, F)
    data = morphism_to_json(phi)
    with pytest.raises(FieldMismatchError):
        morphism_from_json(data, GF(7))
    with pytest.raises(ParseError):
        morphism_from_json({k: v for k, v in data.items() if k != "entries"})
    with pytest.raises(ShapeError):
        morphism_from_json({**data, "entries": data["entries"][:1]})
    with pytest.raises(ParseError):
        loads_morphism("{not json")
    with pytest.raises(ParseError):
        morphism_from_json(json.loads(json.dumps({**data, "field": {"prime": "x"}})))


def test_compose_identity():
    phi = random_morphism(TEMPLATES["X4"], 3, F)
    assert compose(identity_morphism(F, phi.target), phi) == phi
    g = EquivalenceElement.identity(F, phi.source, phi.target)
    assert apply_equivalence(g, phi) == phi


def test_random_morphism_deterministic_and_zero_cells():
    s = TEMPLATES["X3"]
    a = random_morphism(s, 5, F, zero_cells=((0, 2), (0, 3)))
    assert a == random_morphism(s, 5, F, zero_cells=((0, 2), (0, 3)))
    assert a.is_zero_at(0, 2) and a.is_zero_at(0, 3)
    assert block(a, 1, 3)[0][0].is_zero()


def test_singular_group_element_rejected():
    zero = make_morphism(F, [0, 0], [0, 0], [[HomPoly.constant(F, 1), HomPoly.constant(F, 1)],
                                             [HomPoly.constant(F, 1), HomPoly.constant(F, 1)]])
    with pytest.raises(ZeroDivisionError):
        EquivalenceElement(zero, identity_morphism(F, [0, 0]))
