import math
import numpy as np
import pytest
from conftest import GROUPS, free_translation, z2_reflection, z4
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitriple.clifford import chirality, chirality_phase, clifford_of_covector, identity, symbol_map
from orbitriple.funcalg import TrigPoly, differential, grid_points, random_invariant, random_trig_poly
from orbitriple.hochschild import (
    HochschildChain,
    antisymmetrized_chain,
    average_chain,
    boundary,
    closedness_integral,
    entries_invariant,
    first_order_check,
    gamma_prime_norms,
    is_cycle,
    normalization_deviation,
    quotient_torus_cycle,
    random_invariant_cycle,
    represent_at,
    represent_on,
    skewsymmetrize_at,
    skewsymmetrize_on,
    skewsymmetrized_clifford_at,
    standard_torus_cycle,
)
from orbitriple.scalars import I
from orbitriple.isometry import generate_group, isotropy_group, singular_locus

U = TrigPoly.exponential((1,))
UINV = TrigPoly.exponential((-1,))
ONE1 = TrigPoly.constant(1)


def test_one_chain_boundary_vanishes(rng):
    a, b = random_trig_poly(2, 2, rng), random_trig_poly(2, 2, rng)
    assert boundary(HochschildChain([(a, b)])).is_zero


def test_boundary_of_unit_chain():
    c = HochschildChain([(ONE1, U, UINV)])
    expected = HochschildChain([(U, UINV), (-ONE1, ONE1), (UINV, U)])
    assert boundary(c) == expected
    assert not is_cycle(c)


def test_standard_cycles_are_exact_cycles():
    for p in range(1, 5):
        c = standard_torus_cycle(p)
        assert c.is_exact
        assert boundary(c).is_zero
        assert is_cycle(c)


def test_standard_p2_has_two_antisymmetrized_terms():
    c = standard_torus_cycle(2)
    assert len(c) == 2 and c.degree == 2


def test_circle_cycle_literal():
    c = standard_torus_cycle(1)
    # (1/2 pi i) u^-1 (x) u, with the 2 pi carried in twopi_power
    assert c.twopi_power == -1
    ((a0, a1),) = c.terms
    assert a1 == U
    assert a0 == TrigPoly.exponential((-1,), -I)
    assert abs(c.normalization - 1 / (2j * math.pi)) <= 1e-15


def test_circle_cycle_represents_one(rng):
    c = standard_torus_cycle(1)
    for x in rng.random((20, 1)):
        assert abs(represent_at(c, x).matrix[0, 0] - 1) <= 1e-14


def test_zero_chain_represents_zero():
    z = HochschildChain([], degree=2, p=2)
    assert not represent_on(z, np.zeros((3, 2))).any()


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_standard_cycle_normalization_on_grid(p):
    n = 16 if p < 4 else 8
    assert normalization_deviation(standard_torus_cycle(p), grid=n) <= 1e-12


def test_standard_p2_at_grid_points():
    c = standard_torus_cycle(2)
    pts = grid_points(5, 2)
    for x in pts:
        assert represent_at(c, x).distance(chirality(2)) <= 1e-12


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_standard_cycle_volume_form(p, rng):
    c = standard_torus_cycle(p)
    for x in rng.random((10, p)):
        m = skewsymmetrize_at(c, x)
        assert abs(m.top - chirality_phase(p)) <= 1e-12
        assert abs(abs(m.top) - 1) <= 1e-12
        assert (m - m.grade(p)).norm() == 0


def test_repeated_slot_skew_vanishes(rng):
    f, a0 = random_trig_poly(2, 2, rng), random_trig_poly(2, 2, rng)
    c = HochschildChain([(a0, f, f)])
    for x in rng.random((5, 2)):
        scale = abs(a0(x)) * (np.abs(differential(f)(x)) ** 2).sum()
        assert skewsymmetrize_at(c, x).norm() <= 1e-12 * max(1.0, scale)


def test_quotient_cycle_trivial_group_is_standard():
    assert quotient_torus_cycle(generate_group([], p=2)) == standard_torus_cycle(2)


def test_quotient_cycle_translation():
    g = free_translation()
    c = quotient_torus_cycle(g)
    assert entries_invariant(c, g)
    assert boundary(c).is_zero
    assert normalization_deviation(c, grid=64) <= 1e-12
    slots = {f for t in c.terms for f in t[1:]}
    freqs = [next(iter(f.support)) for f in slots]
    assert abs(round(np.linalg.det(np.array(freqs, dtype=float)))) == 2
    assert all((a + b) % 2 == 0 for a, b in freqs)


def test_quotient_cycle_errors():
    with pytest.raises(ValueError, match="action not free"):
        quotient_torus_cycle(z4())


def test_average_is_unchanged_on_invariant_chains(rng):
    c = random_invariant_cycle(z4(), 2, rng)
    assert average_chain(c, z4()) == c


def test_average_under_rotation_vanishes_at_fixed_points():
    g = z4()
    c = average_chain(standard_torus_cycle(2), g)
    assert entries_invariant(c, g)
    for x in [(0, 0), (0.5, 0.5)]:
        assert skewsymmetrize_at(c, x).norm() <= 1e-12


def test_average_under_free_translation_is_zero_but_quotient_is_not():
    # both generators u_1, u_2 are odd under the half translation, so averaging kills them
    g = free_translation()
    assert average_chain(standard_torus_cycle(2), g).is_zero
    norms = gamma_prime_norms(quotient_torus_cycle(g), grid=64)
    assert norms.min() >= 0.5 * norms.max() > 0


@pytest.mark.parametrize("degree,p", [(2, 2), (3, 3), (2, 3)])
def test_boundary_squared_is_zero(degree, p, rng):
    for _ in range(50 if degree == 2 else 17):
        terms = [[random_trig_poly(p, 2, rng, terms=3) for _ in range(degree + 1)] for _ in range(2)]
        assert boundary(boundary(HochschildChain(terms))).is_zero


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 3))
def test_antisymmetrized_chains_are_cycles(seed, p):
    rng = np.random.default_rng(seed)
    c = antisymmetrized_chain(random_trig_poly(p, 2, rng, 3), [random_trig_poly(p, 2, rng, 3) for _ in range(p)])
    assert boundary(c).is_zero


@pytest.mark.parametrize("p", [2, 3])
def test_symbol_paths_agree(p, rng):
    for _ in range(5):
        c = HochschildChain(
            [[random_trig_poly(p, 2, rng, 3) for _ in range(p + 1)] for _ in range(2)]
        )
        for x in rng.random((4, p)):
            wedge_side = skewsymmetrize_at(c, x)
            cliff_side = symbol_map(skewsymmetrized_clifford_at(c, x)).grade(p)
            scale = max(1.0, wedge_side.norm())
            assert (wedge_side - cliff_side).norm() <= 1e-12 * scale


def test_batched_skew_matches_pointwise(rng):
    c = random_invariant_cycle(z2_reflection(), 2, rng)
    pts = rng.random((6, 2))
    keys, vals = skewsymmetrize_on(c, pts)
    for x, row in zip(pts, vals):
        m = skewsymmetrize_at(c, x)
        assert max(abs(m[k] - v) for k, v in zip(keys, row)) <= 1e-12 * max(1, np.abs(row).max())


NONFREE = ["t2-z2-reflection", "t2-z4-rotation", "t2-z2-point", "t3-z2-reflection"]


@pytest.mark.parametrize("name", NONFREE)
def test_invariant_wedge_lies_in_fixed_subspace(name, rng):
    g = GROUPS[name]()
    p = g.p
    for x in singular_locus(g).sample_points(8):
        iso = isotropy_group(g, x)
        mats = np.vstack([h.matrix.T - np.eye(p) for h in iso.elements])
        # V = common fixed covectors of the isotropy linear parts
        _, sv, vt = np.linalg.svd(mats)
        rank = int((sv > 1e-9).sum())
        v_basis = vt[rank:]
        assert v_basis.shape[0] < p
        xf = np.array([float(c) for c in x])
        for _ in range(5):
            fs = [random_invariant(g, 3, rng) for _ in range(p)]
            rows = np.array([differential(f)(xf) for f in fs])
            resid = rows - rows @ v_basis.T @ v_basis
            assert np.abs(resid).max() <= 1e-12 * max(1, np.abs(rows).max())
            assert abs(np.linalg.det(rows.real)) <= 1e-12 * max(1, np.abs(rows).max() ** p)


@pytest.mark.parametrize("name", NONFREE)
def test_averaging_kills_orientation_on_singular_locus(name, rng):
    g = GROUPS[name]()
    pts = np.array([[float(c) for c in x] for x in singular_locus(g).sample_points(8)])
    chains = [average_chain(standard_torus_cycle(g.p), g)] + [random_invariant_cycle(g, 2, rng) for _ in range(3)]
    for c in chains:
        top = max(1.0, gamma_prime_norms(c, grid=16).max())
        assert gamma_prime_norms(c, pts).max() <= 1e-10 * top


def test_first_order_examples(rng):
    g = z4()
    pts = rng.random((10, 2))
    a, b = random_invariant(g, 3, rng), random_invariant(g, 3, rng)
    assert first_order_check(a, b, pts) == 0.0
    assert first_order_check(a, a, pts) == 0.0
    f, h = random_trig_poly(3, 3, rng), random_trig_poly(3, 3, rng)
    assert first_order_check(f, h, rng.random((10, 3))) == 0.0


def test_closedness_examples(rng):
    c2 = TrigPoly.constant(2, 3)
    assert closedness_integral([c2, TrigPoly.cos((1, 0))]) == 0
    assert abs(closedness_integral([TrigPoly.cos((1, 0)), TrigPoly.cos((0, 1))], 32)) <= 1e-10
    g = z2_reflection()
    assert abs(closedness_integral([random_invariant(g, 3, rng), random_invariant(g, 3, rng)], 32)) <= 1e-10


def test_closedness_integrand_is_nontrivial():
    # on T^2 the integrand is the Jacobian of (a1, a2), which need not vanish pointwise
    f, g = TrigPoly.sin((1, 0)), TrigPoly.sin((0, 1))
    x = np.array([0.1, 0.2])
    mat = identity(2).matrix
    for h in (f, g):
        mat = mat @ clifford_of_covector(differential(h)(x)).matrix
    assert abs(mat[0, 0]) > 1


def test_chain_literal_roundtrip(rng):
    c = random_invariant_cycle(z4(), 2, rng)
    assert HochschildChain.from_literal(2, c.to_literal()) == c
    assert HochschildChain.from_literal(1, standard_torus_cycle(1).to_literal()).twopi_power == -1
