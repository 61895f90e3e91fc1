import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitriple.clifford import (
    MAX_DIMENSION,
    CliffordElement,
    MultiVector,
    basis_product,
    blades,
    chirality,
    chirality_phase,
    clifford_batch,
    clifford_of_covector,
    identity,
    make_generators,
    multivector_norm,
    quantize,
    spinor_dimension,
    symbol_map,
    top_symbol_batch,
    wedge,
)

DIMS = range(1, MAX_DIMENSION + 1)


def test_p1_generator_is_one():
    (g,) = make_generators(1)
    assert g.matrix.tolist() == [[1]]


@pytest.mark.parametrize("p", DIMS)
def test_clifford_relations(p):
    gens = make_generators(p)
    d = spinor_dimension(p)
    assert len(gens) == p
    for i, j in itertools.product(range(p), repeat=2):
        anti = gens[i].matrix @ gens[j].matrix + gens[j].matrix @ gens[i].matrix
        assert np.abs(anti - 2 * (i == j) * np.eye(d)).max() <= 1e-14
    for g in gens:
        assert np.array_equal(g.matrix, g.matrix.conj().T)
        assert np.abs(g.matrix @ g.matrix.conj().T - np.eye(d)).max() <= 1e-14


def test_p4_has_ten_relations_of_size_four():
    gens = make_generators(4)
    assert all(g.matrix.shape == (4, 4) for g in gens)
    pairs = list(itertools.combinations_with_replacement(range(4), 2))
    assert len(pairs) == 10


def test_generators_are_reproducible():
    a = [g.matrix.copy() for g in make_generators(4)]
    b = [g.matrix.copy() for g in make_generators(4)]
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_unsupported_dimension():
    with pytest.raises(ValueError):
        make_generators(5)
    with pytest.raises(ValueError):
        make_generators(0)


@pytest.mark.parametrize("p", DIMS)
def test_covector_basis_and_zero(p):
    gens = make_generators(p)
    for i in range(p):
        e = np.zeros(p)
        e[i] = 1
        assert np.array_equal(clifford_of_covector(e).matrix, gens[i].matrix)
    assert not clifford_of_covector(np.zeros(p)).matrix.any()


def test_covector_dimension_mismatch():
    with pytest.raises(ValueError):
        clifford_of_covector([1.0, 2.0, 3.0]) @ clifford_of_covector([1.0, 2.0])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.lists(st.floats(-3, 3), min_size=4, max_size=4))
def test_covector_square_is_norm(p, raw):
    v = np.array(raw[:p])
    c = clifford_of_covector(v).matrix
    assert np.abs(c @ c - (v @ v) * np.eye(spinor_dimension(p))).max() <= 1e-12


def test_unit_covector_squares_to_identity(rng):
    for p in DIMS:
        v = rng.normal(size=p)
        v /= np.linalg.norm(v)
        c = clifford_of_covector(v).matrix
        assert np.abs(c @ c - np.eye(spinor_dimension(p))).max() <= 1e-12


@pytest.mark.parametrize("p", [2, 4])
def test_chirality_even(p):
    gam = chirality(p).matrix
    d = spinor_dimension(p)
    assert np.abs(gam @ gam - np.eye(d)).max() <= 1e-14
    assert np.abs(gam - gam.conj().T).max() <= 1e-14
    for g in make_generators(p):
        assert np.abs(gam @ g.matrix + g.matrix @ gam).max() <= 1e-14


def test_chirality_p2_phase():
    g1, g2 = make_generators(2)
    assert np.abs(chirality(2).matrix - (-1j) * g1.matrix @ g2.matrix).max() <= 1e-15


@pytest.mark.parametrize("p", [1, 3])
def test_chirality_odd_is_identity(p):
    assert np.array_equal(chirality(p).matrix, np.eye(spinor_dimension(p)))


@pytest.mark.parametrize("p,phase", [(1, 1), (2, -1j), (3, -1j), (4, -1)])
def test_chirality_phase_relates_volume_element(p, phase):
    assert chirality_phase(p) == phase
    vol = basis_product(p, range(p)).matrix
    assert np.abs(phase * vol - chirality(p).matrix).max() <= 1e-14


def test_symbol_of_generator_product():
    g1, g2 = make_generators(2)
    m = symbol_map(g1 @ g2)
    assert m.coefficients == {(0, 1): 1}


def test_symbol_of_square_is_scalar():
    v = np.array([0.3, -1.2, 2.0])
    c = clifford_of_covector(v)
    m = symbol_map(c @ c)
    assert (m - m.grade(0)).norm() <= 1e-13
    assert abs(m[()] - v @ v) <= 1e-13


def test_symbol_of_mixed_product():
    m = symbol_map(clifford_of_covector([1, 0]) @ clifford_of_covector([1, 1]))
    assert m.coefficients == {(): 1, (0, 1): 1}


def test_symbol_product_is_inner_plus_wedge(rng):
    for p in DIMS:
        u, v = rng.normal(size=(2, p))
        m = symbol_map(clifford_of_covector(u) @ clifford_of_covector(v))
        expected = MultiVector(p, {(): u @ v}) + wedge(u, v)
        assert (m - expected).norm() <= 1e-12


def test_odd_dimension_needs_parity():
    x = CliffordElement(3, np.eye(2) + make_generators(3)[0].matrix)
    with pytest.raises(ValueError):
        symbol_map(x)


@pytest.mark.parametrize("p", DIMS)
def test_quantize_symbol_roundtrip_on_basis(p):
    for s in blades(p):
        e = basis_product(p, s)
        back = symbol_map(e)
        assert back.coefficients == {s: 1}
        assert np.array_equal(quantize(back).matrix, e.matrix)


@pytest.mark.parametrize("p", [2, 4])
def test_symbol_map_is_linear_bijection(p, rng):
    coeffs = {s: complex(*rng.normal(size=2)) for s in blades(p)}
    m = MultiVector(p, coeffs)
    assert (symbol_map(quantize(m)) - m).norm() <= 1e-12
    d = spinor_dimension(p)
    assert len(blades(p)) == d * d


@pytest.mark.parametrize("p", DIMS)
def test_top_symbol_is_determinant(p, rng):
    for _ in range(20):
        vs = rng.normal(size=(p, p))
        prod = identity(p)
        for v in vs:
            prod = prod @ clifford_of_covector(v)
        assert abs(symbol_map(prod).top - np.linalg.det(vs)) <= 1e-12 * max(1, abs(np.linalg.det(vs)))


def test_batched_top_symbol_matches_single(rng):
    p = 3
    vs = rng.normal(size=(5, p, p))
    mats = np.broadcast_to(np.eye(2, dtype=complex), (5, 2, 2))
    for j in range(p):
        mats = mats @ clifford_batch(vs[:, j, :])
    assert np.abs(top_symbol_batch(mats, p) - np.linalg.det(vs)).max() <= 1e-12


def test_multivector_norms():
    assert multivector_norm(MultiVector(2)) == 0
    assert multivector_norm(MultiVector.volume(2)) == 1
    assert multivector_norm(MultiVector.from_vector([3, 4])) == 5


def test_multivector_rejects_bad_blades():
    with pytest.raises(ValueError):
        MultiVector(2, {(1, 0): 1})
    with pytest.raises(ValueError):
        MultiVector(2, {(2,): 1})


def test_wedge_is_alternating():
    u, v = [1.0, 2.0, 0.5], [0.0, -1.0, 3.0]
    assert (wedge(u, v) + wedge(v, u)).norm() == 0
    assert wedge(u, u).norm() == 0
