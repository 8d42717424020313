import pytest

from strata_lab.dimensions import (
    AMBIENT,
    CODIMENSIONS,
    aut_dim,
    dimension_row,
    fibration_dimension,
    hom_dim,
    kronecker_moduli_dim,
    linear_space_dim,
    orbit_dimension,
    parameter_dimension,
)
from strata_lab.field import GF
from strata_lab.morphism import LABELS, TEMPLATES

EXPECTED = dict(zip(LABELS, (37, 34, 34, 32, 32, 30, 28)))


def test_ambient_and_kronecker_moduli():
    assert AMBIENT == 37
    assert kronecker_moduli_dim(4, 3) == 12
    assert kronecker_moduli_dim(2, 3) == 6
    assert kronecker_moduli_dim(1, 1) == 2  # P^2


def test_fibration_sums():
    assert fibration_dimension("X3") == 4 + 6 + 22
    assert fibration_dimension("X5") == 2 + 4 + 24
    assert fibration_dimension("X6") == 2 + 27 - 1
    assert fibration_dimension("X2") is None


def test_hom_and_aut():
    s = TEMPLATES["X6"]
    # O(-4)+O -> 2O(1): 2*21 + 2*3
    assert hom_dim(s.source, s.target) == 48
    assert aut_dim(s.source) == 15 + 2
    assert parameter_dimension("X0") == 37


@pytest.mark.parametrize("label", LABELS)
def test_orbit_route(label):
    for seed in (0, 1):
        assert orbit_dimension(label, seed) == EXPECTED[label]


@pytest.mark.parametrize("label", LABELS)
def test_rows(label):
    row = dimension_row(label)
    assert row.dimension == EXPECTED[label]
    assert row.codimension == CODIMENSIONS[label] == AMBIENT - row.dimension
    assert linear_space_dim(label) <= hom_dim(TEMPLATES[label].source, TEMPLATES[label].target)


def test_orbit_route_small_field():
    assert orbit_dimension("X4", 3, GF(7)) == 32


def test_parameter_count_off_for_x5():
    # the generic X5 stabiliser is bigger than the scalars
    assert parameter_dimension("X5") == 27
    assert [parameter_dimension(l) for l in ("X1", "X3", "X6")] == [34, 32, 28]
