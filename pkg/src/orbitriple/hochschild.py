"""Hochschild chains over trigonometric polynomials and their pointwise
Clifford representation.

A chain is a formal sum of tuples (a^0, a^1, ..., a^q); scalar weights are
absorbed into a^0, and an overall factor (2 pi)^twopi_power is carried
symbolically so that cycle normalisations stay exact.  The representation
a^0 [D, a^1] ... [D, a^q] is computed at the symbol level,
[D, f](x) = c(df(x)), in the flat frame of the torus.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _lattice
from .clifford import (
    CliffordElement,
    MultiVector,
    blades,
    chirality,
    chirality_phase,
    clifford_batch,
    clifford_of_covector,
    spinor_dimension,
    top_symbol_batch,
)
from .funcalg import TrigPoly, differential, group_average, pullback, random_invariant
from .isometry import FiniteIsometryGroup, singular_locus
from .scalars import GaussianRational, I

__all__ = [
    "HochschildChain",
    "boundary",
    "is_cycle",
    "represent_at",
    "represent_on",
    "skewsymmetrize_at",
    "skewsymmetrize_on",
    "skewsymmetrized_clifford_at",
    "gamma_prime_norms",
    "normalization_deviation",
    "antisymmetrized_chain",
    "standard_torus_cycle",
    "quotient_torus_cycle",
    "average_chain",
    "random_invariant_cycle",
    "entries_invariant",
    "first_order_check",
    "closedness_integral",
]

TWO_PI = 2.0 * math.pi


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


class HochschildChain:
    """sum_alpha (2 pi)^twopi_power * a^0_alpha (x) a^1_alpha (x) ... (x) a^q_alpha

    Terms with equal tails (a^1..a^q) are merged by adding their a^0, and
    terms with a zero entry are dropped, so equality is structural.
    ``normalization`` optionally records the constant lambda a constructor
    used (in units where the 2 pi factor is included).
    """

    __slots__ = ("degree", "p", "terms", "twopi_power", "normalization")

    def __init__(
        self,
        terms: Iterable[Sequence[TrigPoly]],
        degree: Optional[int] = None,
        p: Optional[int] = None,
        twopi_power: int = 0,
        normalization: Optional[complex] = None,
    ):
        merged: dict[tuple[TrigPoly, ...], TrigPoly] = {}
        for term in terms:
            term = tuple(term)
            if degree is None:
                degree = len(term) - 1
            if len(term) != degree + 1:
                raise ValueError("all tuples of a chain must have length degree + 1")
            if p is None:
                p = term[0].p
            if any(f.p != p for f in term):
                raise ValueError("chain entries of different dimensions")
            tail = term[1:]
            merged[tail] = merged[tail] + term[0] if tail in merged else term[0]
        if degree is None or p is None:
            raise ValueError("an empty chain needs explicit degree and dimension")
        self.degree = degree
        self.p = p
        self.terms = tuple(
            (a0,) + tail for tail, a0 in merged.items() if not a0.is_zero and not any(f.is_zero for f in tail)
        )
        self.twopi_power = twopi_power
        self.normalization = normalization

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_exact(self) -> bool:
        return all(f.is_exact for t in self.terms for f in t)

    def entries(self) -> list[TrigPoly]:
        """Distinct entries of every slot, in order of first appearance."""
        return list(dict.fromkeys(f for t in self.terms for f in t))

    def function_entries(self) -> list[TrigPoly]:
        """Distinct entries of the differentiated slots 1..q."""
        return list(dict.fromkeys(f for t in self.terms for f in t[1:]))

    def _as_dict(self):
        return {t[1:]: t[0] for t in self.terms}

    def __eq__(self, other):
        if not isinstance(other, HochschildChain):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.p == other.p
            and (self.is_zero and other.is_zero or self.twopi_power == other.twopi_power)
            and self._as_dict() == other._as_dict()
        )

    def __add__(self, other: "HochschildChain") -> "HochschildChain":
        if (self.degree, self.p) != (other.degree, other.p):
            raise ValueError("cannot add chains of different degree or dimension")
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.twopi_power != other.twopi_power:
            raise ValueError("cannot add chains with different 2 pi prefactors")
        return HochschildChain(self.terms + other.terms, self.degree, self.p, self.twopi_power)

    def scale(self, s) -> "HochschildChain":
        return HochschildChain(((t[0] * s,) + t[1:] for t in self.terms), self.degree, self.p, self.twopi_power)

    def __repr__(self):
        return f"HochschildChain(degree={self.degree}, p={self.p}, terms={len(self.terms)}, twopi_power={self.twopi_power})"

    def to_literal(self) -> dict:
        return {
            "twopi_power": self.twopi_power,
            "terms": [[f.to_literal() for f in t] for t in self.terms],
        }

    @classmethod
    def from_literal(cls, p: int, literal) -> "HochschildChain":
        if isinstance(literal, dict):
            power = int(literal.get("twopi_power", 0))
            terms = literal["terms"]
        else:
            power, terms = 0, literal
        tuples = [[TrigPoly.from_literal(p, f) for f in t] for t in terms]
        degree = len(tuples[0]) - 1 if tuples else p
        return cls(tuples, degree=degree, p=p, twopi_power=power)


# ---------------------------------------------------------------------------
# Homological algebra
# ---------------------------------------------------------------------------


def boundary(c: HochschildChain) -> HochschildChain:
    """The Hochschild boundary b, with the cyclic last face (-1)^q (a^q a^0, a^1, ..., a^{q-1})."""
    q = c.degree
    if q < 1:
        raise ValueError("boundary needs degree >= 1")
    out = []
    for t in c.terms:
        for i in range(q):
            merged = t[:i] + (t[i] * t[i + 1],) + t[i + 2 :]
            out.append((merged[0] if i % 2 == 0 else -merged[0],) + merged[1:])
        last = (t[q] * t[0],) + t[1:q]
        out.append((last[0] if q % 2 == 0 else -last[0],) + last[1:])
    return HochschildChain(out, q - 1, c.p, c.twopi_power)


def is_cycle(c: HochschildChain, tol: float = 1e-12) -> bool:
    """b c = 0: exactly in the exact tower, coefficients <= tol in the floating tower."""
    b = boundary(c)
    for t in b.terms:
        if t[0].is_exact:
            return False
        if max(abs(complex(v)) for v in t[0].coefficients.values()) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# Pointwise representation
# ---------------------------------------------------------------------------


class _Sampler:
    """Caches function values and differentials on a fixed set of points."""

    def __init__(self, p: int, points: Optional[np.ndarray] = None, grid: Optional[int] = None):
        self.p = p
        self.points = None if points is None else np.asarray(points, dtype=float).reshape(-1, p)
        self.grid = grid
        self._values: dict = {}
        self._diffs: dict = {}

    def value(self, f: TrigPoly) -> np.ndarray:
        if f not in self._values:
            if self.grid is not None:
                self._values[f] = f.evaluate_grid(self.grid).ravel()
            else:
                self._values[f] = f.evaluate_many(self.points)
        return self._values[f]

    def diff(self, f: TrigPoly) -> np.ndarray:
        """(n, p) values of df without the 2 pi factor."""
        if f not in self._diffs:
            self._diffs[f] = np.stack([self.value(g) for g in differential(f).components], axis=-1)
        return self._diffs[f]


def _scale(c: HochschildChain) -> float:
    return TWO_PI ** (c.twopi_power + c.degree)


def _represent(c: HochschildChain, s: _Sampler) -> np.ndarray:
    d = spinor_dimension(c.p)
    n = s.points.shape[0] if s.grid is None else s.grid**c.p
    total = np.zeros((n, d, d), dtype=complex)
    for t in c.terms:
        acc = s.value(t[0])[:, None, None] * np.eye(d, dtype=complex)
        for f in t[1:]:
            acc = acc @ clifford_batch(s.diff(f))
        total += acc
    return _scale(c) * total


def represent_on(c: HochschildChain, points: Optional[np.ndarray] = None, grid: Optional[int] = None) -> np.ndarray:
    """pi_D(c) at many points (or on the uniform grid of size ``grid``^p): an (n, d, d) array."""
    return _represent(c, _Sampler(c.p, points, grid))


def represent_at(c: HochschildChain, x: Sequence) -> CliffordElement:
    """sum_alpha a^0(x) c(da^1(x)) ... c(da^q(x))"""
    m = represent_on(c, np.array([float(v) for v in x])[None, :])[0]
    return CliffordElement(c.p, m, c.degree % 2)


def _skew(c: HochschildChain, s: _Sampler) -> tuple[tuple[tuple[int, ...], ...], np.ndarray]:
    q = c.degree
    keys = blades(c.p, q) if q <= c.p else ()
    n = s.points.shape[0] if s.grid is None else s.grid**c.p
    out = np.zeros((n, len(keys)), dtype=complex)
    for t in c.terms:
        if q == 0:
            out[:, 0] += s.value(t[0])
            continue
        rows = np.stack([s.diff(f) for f in t[1:]], axis=1)  # (n, q, p)
        a0 = s.value(t[0])
        for b, blade in enumerate(keys):
            out[:, b] += a0 * np.linalg.det(rows[:, :, list(blade)])
    return keys, _scale(c) * out


def skewsymmetrize_on(c: HochschildChain, points: Optional[np.ndarray] = None, grid: Optional[int] = None):
    """Gamma' at many points: (blades, (n, #blades) coefficient array)."""
    return _skew(c, _Sampler(c.p, points, grid))


def skewsymmetrize_at(c: HochschildChain, x: Sequence) -> MultiVector:
    """(1/q!) sum_sigma sign(sigma) sum_alpha a^0 da^{sigma 1} ^ ... ^ da^{sigma q}, i.e. sum_alpha a^0 da^1 ^ ... ^ da^q."""
    keys, vals = skewsymmetrize_on(c, np.array([float(v) for v in x])[None, :])
    return MultiVector(c.p, {k: complex(v) for k, v in zip(keys, vals[0])})


def gamma_prime_norms(c: HochschildChain, points: Optional[np.ndarray] = None, grid: Optional[int] = None) -> np.ndarray:
    """Coefficient 2-norm of Gamma' at each point."""
    _, vals = skewsymmetrize_on(c, points, grid)
    return np.sqrt((np.abs(vals) ** 2).sum(axis=1))


def skewsymmetrized_clifford_at(c: HochschildChain, x: Sequence) -> CliffordElement:
    """Clifford-side Gamma': the antisymmetrised products of c(da^j(x)), computed with q! matrix products."""
    x = [float(v) for v in x]
    q = c.degree
    d = spinor_dimension(c.p)
    total = np.zeros((d, d), dtype=complex)
    for t in c.terms:
        a0 = complex(t[0](x))
        cs = [clifford_of_covector(differential(f)(x) / TWO_PI).matrix for f in t[1:]]
        for perm in itertools.permutations(range(q)):
            prod = np.eye(d, dtype=complex)
            for j in perm:
                prod = prod @ cs[j]
            total += _perm_sign(perm) * a0 * prod
    return CliffordElement(c.p, _scale(c) * total / math.factorial(q), q % 2)


def normalization_deviation(c: HochschildChain, points: Optional[np.ndarray] = None, grid: Optional[int] = None) -> float:
    """max_x |pi_D(c)(x) - Gamma| (entrywise max)."""
    target = chirality(c.p).matrix
    reps = represent_on(c, points, grid)
    return float(np.abs(reps - target).max()) if reps.size else 0.0


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def antisymmetrized_chain(a0: TrigPoly, slots: Sequence[TrigPoly], twopi_power: int = 0, normalization=None) -> HochschildChain:
    """a^0 (x) sum_sigma sign(sigma) a^{sigma 1} (x) ... (x) a^{sigma q}; a cycle for commutative algebras."""
    q = len(slots)
    terms = []
    for perm in itertools.permutations(range(q)):
        sign = _perm_sign(perm)
        terms.append((a0 if sign > 0 else -a0,) + tuple(slots[j] for j in perm))
    return HochschildChain(terms, q, a0.p, twopi_power, normalization)


def _exact_phase(z: complex) -> GaussianRational:
    re, im = round(z.real), round(z.imag)
    if abs(z - complex(re, im)) > 1e-12:
        raise ArithmeticError("chirality phase is not a Gaussian integer")
    return GaussianRational(re, im)


def _lattice_cycle(basis: Sequence[Sequence[int]], p: int) -> HochschildChain:
    det = round(float(np.linalg.det(np.array(basis, dtype=float))))
    if det == 0:
        raise ValueError("sublattice rank deficient")
    if det < 0:
        basis = [[-a for a in basis[0]]] + [list(b) for b in basis[1:]]
        det = -det
    # lambda = kappa / ((2 pi i)^p p! det); the (2 pi)^-p is carried symbolically
    kappa = _exact_phase(chirality_phase(p))
    lam = kappa / (I**p * (math.factorial(p) * det))
    total = [sum(b[j] for b in basis) for j in range(p)]
    a0 = TrigPoly.exponential([-a for a in total], lam)
    slots = [TrigPoly.exponential(b) for b in basis]
    lam_full = complex(lam) / TWO_PI**p
    return antisymmetrized_chain(a0, slots, twopi_power=-p, normalization=lam_full)


def standard_torus_cycle(p: int) -> HochschildChain:
    """Orientation cycle of T^p built from u_j = exp(2 pi i x_j), normalised so that pi_D = Gamma."""
    if not 1 <= p <= 4:
        raise ValueError(f"unsupported dimension {p}")
    return _lattice_cycle([[int(i == j) for j in range(p)] for i in range(p)], p)


def quotient_torus_cycle(group: FiniteIsometryGroup) -> HochschildChain:
    """Orientation cycle of T^p / G for a free group of translations.

    Uses the exponentials of a basis of the invariant frequency lattice
    {k : k.t in Z for all translations t}.
    """
    if not singular_locus(group).is_empty:
        raise ValueError("action not free")
    if not all(h.is_translation for h in group.elements):
        raise ValueError("quotient cycle needs a group of pure translations")
    basis = _lattice.invariant_frequency_lattice([h.translation for h in group.elements], group.p)
    return _lattice_cycle(basis, group.p)


def average_chain(c: HochschildChain, group: FiniteIsometryGroup) -> HochschildChain:
    """Replace every entry by its group average (need not remain a cycle)."""
    cache: dict = {}

    def avg(f):
        if f not in cache:
            cache[f] = group_average(f, group)
        return cache[f]

    return HochschildChain((tuple(avg(f) for f in t) for t in c.terms), c.degree, c.p, c.twopi_power)


def random_invariant_cycle(group: FiniteIsometryGroup, cutoff: int, rng: np.random.Generator, terms: int = 4) -> HochschildChain:
    """An antisymmetrised cycle whose entries are random invariant polynomials."""
    p = group.p
    a0 = random_invariant(group, cutoff, rng, terms)
    slots = [random_invariant(group, cutoff, rng, terms) for _ in range(p)]
    return antisymmetrized_chain(a0, slots)


def entries_invariant(c: HochschildChain, group: FiniteIsometryGroup) -> bool:
    """Every entry satisfies f o h = f exactly for all h in G."""
    return all(pullback(f, h) == f for f in c.entries() for h in group.elements)


# ---------------------------------------------------------------------------
# Other conditions
# ---------------------------------------------------------------------------


def first_order_check(a: TrigPoly, b: TrigPoly, samples: Iterable[Sequence]) -> float:
    """max over samples of |[[D, a], b](x)| = |[c(da(x)), b(x) Id]|."""
    da = differential(a)
    d = spinor_dimension(a.p)
    worst = 0.0
    for x in samples:
        ca = clifford_of_covector(da(x)).matrix
        bx = complex(b(x)) * np.eye(d, dtype=complex)
        # plain contraction: BLAS complex kernels are not bitwise symmetric in their factors
        comm = np.einsum("ik,kj->ij", ca, bx) - np.einsum("ik,kj->ij", bx, ca)
        worst = max(worst, float(np.abs(comm).max()))
    return worst


def closedness_integral(entries: Sequence[TrigPoly], grid: int = 32) -> complex:
    """Grid average over T^p of the top symbol of c(da_1(x)) ... c(da_p(x))."""
    entries = list(entries)
    p = entries[0].p
    if len(entries) != p:
        raise ValueError("closedness needs p entries")
    d = spinor_dimension(p)
    mats = np.broadcast_to(np.eye(d, dtype=complex), (grid**p, d, d))
    for f in entries:
        comps = np.stack([g.evaluate_grid(grid).ravel() for g in differential(f).components], axis=-1)
        mats = mats @ clifford_batch(TWO_PI * comps)
    return complex(top_symbol_batch(mats, p).mean())
