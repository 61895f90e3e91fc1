"""Clifford algebra Cl(p) in a gamma-matrix representation and the exterior
algebra of R^p.

Blades are indexed by strictly increasing tuples of 0-based generator
indices, so ``(0, 1)`` is e_1 ^ e_2.  Gamma matrices are built by the
usual recursive tensor construction and have entries in {0, +-1, +-i}, so
every product of generators is exact in complex floating point.

For odd p the spinor representation (size 2^(p//2)) is irreducible but not
faithful: gamma_S and gamma_{complement of S} act proportionally.  A
:class:`CliffordElement` therefore carries its Z/2 degree when it is
homogeneous, and :func:`symbol_map` uses it to pick the representative.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

__all__ = [
    "MAX_DIMENSION",
    "MultiVector",
    "CliffordElement",
    "spinor_dimension",
    "make_generators",
    "identity",
    "basis_product",
    "clifford_of_covector",
    "chirality",
    "chirality_phase",
    "quantize",
    "symbol_map",
    "multivector_norm",
    "wedge",
    "blades",
    "clifford_batch",
    "top_symbol_batch",
]

MAX_DIMENSION = 4

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _check_dimension(p: int) -> None:
    if not isinstance(p, (int, np.integer)) or not 1 <= p <= MAX_DIMENSION:
        raise ValueError(f"unsupported dimension {p!r}; need 1 <= p <= {MAX_DIMENSION}")


def spinor_dimension(p: int) -> int:
    return 2 ** (p // 2)


@lru_cache(maxsize=None)
def blades(p: int, grade: Optional[int] = None) -> tuple[tuple[int, ...], ...]:
    """All blades of Lambda R^p (or those of one grade), ordered by grade then lexicographically."""
    grades = range(p + 1) if grade is None else (grade,)
    return tuple(s for k in grades for s in itertools.combinations(range(p), k))


# ---------------------------------------------------------------------------
# Exterior algebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiVector:
    """Element of the exterior algebra Lambda R^p with complex coefficients."""

    p: int
    coefficients: Mapping[tuple[int, ...], complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, value in dict(self.coefficients).items():
            key = tuple(int(i) for i in key)
            if any(a >= b for a, b in zip(key, key[1:])) or any(not 0 <= i < self.p for i in key):
                raise ValueError(f"blade {key} is not a strictly increasing subset of range({self.p})")
            if value != 0:
                clean[key] = value
        object.__setattr__(self, "coefficients", clean)

    @classmethod
    def volume(cls, p: int, scale=1) -> "MultiVector":
        return cls(p, {tuple(range(p)): scale})

    @classmethod
    def from_vector(cls, v: Sequence) -> "MultiVector":
        return cls(len(v), {(i,): c for i, c in enumerate(v)})

    def __getitem__(self, blade: Iterable[int]):
        return self.coefficients.get(tuple(blade), 0)

    def grade(self, k: int) -> "MultiVector":
        return MultiVector(self.p, {s: c for s, c in self.coefficients.items() if len(s) == k})

    @property
    def top(self):
        """Coefficient of e_1 ^ ... ^ e_p."""
        return self[tuple(range(self.p))]

    def _check(self, other: "MultiVector") -> None:
        if other.p != self.p:
            raise ValueError("dimension mismatch")

    def __add__(self, other: "MultiVector") -> "MultiVector":
        self._check(other)
        out = dict(self.coefficients)
        for s, c in other.coefficients.items():
            out[s] = out.get(s, 0) + c
        return MultiVector(self.p, out)

    def __neg__(self) -> "MultiVector":
        return MultiVector(self.p, {s: -c for s, c in self.coefficients.items()})

    def __sub__(self, other: "MultiVector") -> "MultiVector":
        return self + (-other)

    def __mul__(self, scalar) -> "MultiVector":
        return MultiVector(self.p, {s: c * scalar for s, c in self.coefficients.items()})

    __rmul__ = __mul__

    def norm(self) -> float:
        return multivector_norm(self)

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.norm() <= tol


def multivector_norm(m: MultiVector) -> float:
    """Euclidean norm of the coefficient vector in the orthonormal blade basis."""
    return math.sqrt(sum(abs(complex(c)) ** 2 for c in m.coefficients.values()))


def wedge(*vectors: Sequence) -> MultiVector:
    """Exterior product v_1 ^ ... ^ v_k of covectors given in the standard frame.

    The coefficient on the blade S is the k x k minor of the matrix with rows
    v_1..v_k taken on the columns S.
    """
    if not vectors:
        raise ValueError("wedge of an empty list needs an explicit dimension")
    rows = np.array([np.asarray(v, dtype=complex) for v in vectors])
    k, p = rows.shape
    if k > p:
        return MultiVector(p)
    return MultiVector(p, {s: complex(np.linalg.det(rows[:, list(s)])) for s in blades(p, k)})


# ---------------------------------------------------------------------------
# Clifford algebra
# ---------------------------------------------------------------------------


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class CliffordElement:
    """A matrix in the spinor representation of Cl(p).

    ``parity`` is 0 or 1 for homogeneous elements and None otherwise.
    """

    p: int
    matrix: np.ndarray
    parity: Optional[int] = None

    def __post_init__(self):
        d = spinor_dimension(self.p)
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (d, d):
            raise ValueError(f"expected a {d}x{d} matrix for p={self.p}, got shape {m.shape}")
        object.__setattr__(self, "matrix", _frozen(m))

    def _check(self, other: "CliffordElement") -> None:
        if other.p != self.p:
            raise ValueError("dimension mismatch")

    def __matmul__(self, other: "CliffordElement") -> "CliffordElement":
        self._check(other)
        parity = None if self.parity is None or other.parity is None else (self.parity + other.parity) % 2
        return CliffordElement(self.p, self.matrix @ other.matrix, parity)

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        self._check(other)
        parity = self.parity if self.parity == other.parity else None
        return CliffordElement(self.p, self.matrix + other.matrix, parity)

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        return self + (-other)

    def __neg__(self) -> "CliffordElement":
        return CliffordElement(self.p, -self.matrix, self.parity)

    def __mul__(self, scalar) -> "CliffordElement":
        return CliffordElement(self.p, complex(scalar) * self.matrix, self.parity)

    __rmul__ = __mul__

    @property
    def adjoint(self) -> "CliffordElement":
        return CliffordElement(self.p, self.matrix.conj().T, self.parity)

    def inverse(self) -> "CliffordElement":
        return CliffordElement(self.p, np.linalg.inv(self.matrix), self.parity)

    def norm(self) -> float:
        """Operator (spectral) norm on the spinor space."""
        return float(np.linalg.norm(self.matrix, 2))

    def distance(self, other: "CliffordElement") -> float:
        return float(np.abs(self.matrix - other.matrix).max())

    def __repr__(self):
        return f"CliffordElement(p={self.p}, parity={self.parity}, matrix={self.matrix.tolist()})"


@lru_cache(maxsize=None)
def _generator_matrices(p: int) -> tuple[np.ndarray, ...]:
    if p == 1:
        return (_frozen([[1]]),)
    if p % 2 == 1:
        # append the chirality of Cl(p-1)
        prev = _generator_matrices(p - 1)
        return prev + (_frozen(_chirality_matrix(p - 1)),)
    prev = _generator_matrices(p - 1)
    d = prev[0].shape[0]
    gens = [np.kron(g, _SIGMA[0]) for g in prev]
    gens.append(np.kron(np.eye(d), _SIGMA[1]))
    return tuple(_frozen(g) for g in gens)


def _chirality_matrix(p: int) -> np.ndarray:
    gens = _generator_matrices(p)
    prod = np.eye(gens[0].shape[0], dtype=complex)
    for g in gens:
        prod = prod @ g
    return (-1j) ** (p // 2) * prod


def make_generators(p: int) -> list[CliffordElement]:
    """Self-adjoint unitary generators gamma_1..gamma_p with gamma_i gamma_j + gamma_j gamma_i = 2 delta_ij."""
    _check_dimension(p)
    return [CliffordElement(p, g, 1) for g in _generator_matrices(p)]


def identity(p: int) -> CliffordElement:
    _check_dimension(p)
    return CliffordElement(p, np.eye(spinor_dimension(p)), 0)


@lru_cache(maxsize=None)
def _basis_matrix(p: int, blade: tuple[int, ...]) -> np.ndarray:
    gens = _generator_matrices(p)
    prod = np.eye(spinor_dimension(p), dtype=complex)
    for i in blade:
        prod = prod @ gens[i]
    return _frozen(prod)


def basis_product(p: int, blade: Iterable[int]) -> CliffordElement:
    """Ordered product gamma_{s_1} ... gamma_{s_k} for the blade s."""
    _check_dimension(p)
    blade = tuple(blade)
    return CliffordElement(p, _basis_matrix(p, blade), len(blade) % 2)


def clifford_of_covector(v: Sequence) -> CliffordElement:
    """Clifford multiplication c(v) = sum_i v_i gamma_i."""
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1:
        raise ValueError("covector must be one-dimensional")
    p = v.shape[0]
    _check_dimension(p)
    gens = _generator_matrices(p)
    return CliffordElement(p, sum(c * g for c, g in zip(v, gens)), 1)


def chirality(p: int) -> CliffordElement:
    """Grading operator: (-i)^(p/2) gamma_1...gamma_p for even p, the identity for odd p."""
    _check_dimension(p)
    if p % 2:
        return identity(p)
    return CliffordElement(p, _chirality_matrix(p), 0)


@lru_cache(maxsize=None)
def chirality_phase(p: int) -> complex:
    """The constant kappa with kappa * gamma_1...gamma_p = Gamma in the spinor representation."""
    prod = _basis_matrix(p, tuple(range(p)))
    gamma = chirality(p).matrix
    i, j = np.argwhere(np.abs(prod) > 0.5)[0]
    kappa = gamma[i, j] / prod[i, j]
    return complex(round(kappa.real), round(kappa.imag))


def quantize(m: MultiVector) -> CliffordElement:
    """Clifford quantization sum_S m_S gamma_S (ordered products over each blade)."""
    _check_dimension(m.p)
    d = spinor_dimension(m.p)
    mat = np.zeros((d, d), dtype=complex)
    parities = set()
    for s, c in m.coefficients.items():
        mat = mat + complex(c) * _basis_matrix(m.p, s)
        parities.add(len(s) % 2)
    parity = parities.pop() if len(parities) == 1 else (0 if not parities else None)
    return CliffordElement(m.p, mat, parity)


def _symbol_blades(p: int, parity: Optional[int]) -> tuple[tuple[int, ...], ...]:
    if p % 2 == 0:
        return blades(p)
    if parity is None:
        raise ValueError(
            "in odd dimension the spinor representation identifies complementary blades; "
            "symbol_map needs a homogeneous element"
        )
    return tuple(s for s in blades(p) if len(s) % 2 == parity)


def symbol_map(x: CliffordElement) -> MultiVector:
    """Inverse of :func:`quantize`: the exterior-algebra symbol of a Clifford element.

    Coefficients come from the Hilbert-Schmidt pairing tr(gamma_S^* x)/d,
    which is orthonormal on the blades admissible for ``x.parity``.
    """
    _check_dimension(x.p)
    d = spinor_dimension(x.p)
    coeffs = {}
    for s in _symbol_blades(x.p, x.parity):
        c = np.trace(_basis_matrix(x.p, s).conj().T @ x.matrix) / d
        coeffs[s] = complex(c)
    return MultiVector(x.p, coeffs)


# ---------------------------------------------------------------------------
# Batched helpers (grids of points)
# ---------------------------------------------------------------------------


def clifford_batch(vectors: np.ndarray) -> np.ndarray:
    """c(v) for an (n, p) array of covectors -> (n, d, d) array."""
    vectors = np.asarray(vectors, dtype=complex)
    p = vectors.shape[-1]
    _check_dimension(p)
    gens = np.stack(_generator_matrices(p))
    return np.einsum("ni,ijk->njk", vectors, gens)


def top_symbol_batch(matrices: np.ndarray, p: int) -> np.ndarray:
    """Top-degree symbol coefficient of an (n, d, d) stack of elements of parity p mod 2."""
    d = spinor_dimension(p)
    top = _basis_matrix(p, tuple(range(p)))
    return np.einsum("ji,nji->n", top.conj(), matrices) / d
