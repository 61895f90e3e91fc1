"""Trigonometric polynomials on T^p as a model of C-infinity(T^p) and of its
G-invariant subalgebra.

Coefficients are exact Gaussian rationals whenever the inputs are; the
factor 2*pi produced by differentiation is carried symbolically by
:class:`CovectorField`, so "is this differential zero" is an exact test.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .isometry import FiniteIsometryGroup, Isometry
from .scalars import GaussianRational, I, is_exact

__all__ = [
    "DEFAULT_CUTOFF",
    "HARD_CAP",
    "CutoffOverflow",
    "TrigPoly",
    "CovectorField",
    "evaluate",
    "multiply",
    "pullback",
    "group_average",
    "differential",
    "invariant_basis",
    "differential_kernel",
    "random_trig_poly",
    "random_invariant",
    "grid_points",
]

DEFAULT_CUTOFF = 4
HARD_CAP = 16
TWO_PI = 2.0 * np.pi
_FLOAT_ZERO = 1e-15


class CutoffOverflow(ValueError):
    """A product would carry frequencies beyond the hard cap."""


def _clean_scalar(c):
    if isinstance(c, (int, Fraction)):
        return GaussianRational(c)
    if isinstance(c, (float, np.floating)):
        return complex(c)
    if isinstance(c, np.complexfloating):
        return complex(c)
    return c


def _nonzero(c) -> bool:
    if is_exact(c):
        return bool(c)
    return abs(c) > _FLOAT_ZERO


class TrigPoly:
    """A finite Fourier series sum_k c_k exp(2 pi i k.x) on T^p."""

    __slots__ = ("p", "coefficients", "_key", "_hash", "_arrays")

    def __init__(self, p: int, coefficients: Optional[Mapping[Sequence[int], object]] = None):
        self.p = int(p)
        clean = {}
        for k, c in (coefficients or {}).items():
            k = tuple(int(a) for a in k)
            if len(k) != self.p:
                raise ValueError(f"frequency {k} does not have length {self.p}")
            c = _clean_scalar(c)
            if _nonzero(c):
                clean[k] = c
        if clean and max(max(abs(a) for a in k) for k in clean) > HARD_CAP:
            raise CutoffOverflow(f"frequencies exceed the hard cap {HARD_CAP}")
        self.coefficients = clean
        self._key = None
        self._hash = None
        self._arrays = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, p: int) -> "TrigPoly":
        return cls(p)

    @classmethod
    def constant(cls, p: int, c=1) -> "TrigPoly":
        return cls(p, {(0,) * p: c})

    @classmethod
    def exponential(cls, k: Sequence[int], c=1) -> "TrigPoly":
        """c * exp(2 pi i k.x)"""
        return cls(len(k), {tuple(k): c})

    @classmethod
    def cos(cls, k: Sequence[int]) -> "TrigPoly":
        """cos(2 pi k.x)"""
        half = GaussianRational(Fraction(1, 2))
        neg = tuple(-a for a in k)
        if tuple(k) == neg:
            return cls.constant(len(k))
        return cls(len(k), {tuple(k): half, neg: half})

    @classmethod
    def sin(cls, k: Sequence[int]) -> "TrigPoly":
        """sin(2 pi k.x)"""
        c = GaussianRational(0, Fraction(-1, 2))
        neg = tuple(-a for a in k)
        return cls(len(k), {tuple(k): c, neg: -c})

    # -- structure ----------------------------------------------------------
    @property
    def cutoff(self) -> int:
        """Max-norm of the largest frequency present."""
        if not self.coefficients:
            return 0
        return max(max((abs(a) for a in k), default=0) for k in self.coefficients)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coefficients.values())

    @property
    def is_real(self) -> bool:
        """True when c_{-k} = conj(c_k) for every k."""
        for k, c in self.coefficients.items():
            other = self.coefficients.get(tuple(-a for a in k))
            if other is None:
                return False
            if is_exact(c) and is_exact(other):
                if other != c.conjugate():
                    return False
            elif abs(complex(other) - complex(c).conjugate()) > 1e-13:
                return False
        return True

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def is_constant(self) -> bool:
        return all(not any(k) for k in self.coefficients)

    @property
    def support(self) -> frozenset:
        return frozenset(self.coefficients)

    def __getitem__(self, k: Sequence[int]):
        return self.coefficients.get(tuple(k), GaussianRational(0))

    def __len__(self) -> int:
        return len(self.coefficients)

    def _sortkey(self):
        if self._key is None:
            self._key = tuple(sorted(self.coefficients.items(), key=lambda kv: kv[0]))
        return self._key

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.p == other.p and self.coefficients == other.coefficients

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self._sortkey()))
        return self._hash

    def __repr__(self):
        terms = ", ".join(f"{k}: {c}" for k, c in self._sortkey())
        return f"TrigPoly(p={self.p}, {{{terms}}})"

    # -- algebra ------------------------------------------------------------
    def _check(self, other: "TrigPoly") -> None:
        if other.p != self.p:
            raise ValueError("dimension mismatch")

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(self.p, other)
        self._check(other)
        out = dict(self.coefficients)
        for k, c in other.coefficients.items():
            out[k] = out[k] + c if k in out else c
        return TrigPoly(self.p, out)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(self.p, {k: -c for k, c in self.coefficients.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "TrigPoly":
        s = _clean_scalar(s)
        return TrigPoly(self.p, {k: c * s for k, c in self.coefficients.items()})

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def conjugate(self) -> "TrigPoly":
        """The complex-conjugate function."""
        return TrigPoly(
            self.p,
            {tuple(-a for a in k): (c.conjugate() if is_exact(c) else complex(c).conjugate()) for k, c in self.coefficients.items()},
        )

    def real_part(self) -> "TrigPoly":
        return (self + self.conjugate()).scale(Fraction(1, 2))

    # -- evaluation ---------------------------------------------------------
    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(frequencies as an (m, p) int array, coefficients as complex)."""
        if self._arrays is None:
            items = self._sortkey()
            freqs = np.array([k for k, _ in items], dtype=np.int64).reshape(len(items), self.p)
            coefs = np.array([complex(c) for _, c in items], dtype=complex)
            self._arrays = (freqs, coefs)
        return self._arrays

    def __call__(self, x) -> complex:
        return evaluate(self, x)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Values at an (n, p) array of points."""
        points = np.asarray(points, dtype=float).reshape(-1, self.p)
        freqs, coefs = self.arrays()
        if not len(coefs):
            return np.zeros(points.shape[0], dtype=complex)
        return np.exp(2j * np.pi * (points @ freqs.T)) @ coefs

    def evaluate_grid(self, n: int) -> np.ndarray:
        """Values on the uniform grid {j/n}^p, shape (n,)*p, via an inverse FFT."""
        freqs, coefs = self.arrays()
        spectrum = np.zeros((n,) * self.p, dtype=complex)
        if len(coefs):
            np.add.at(spectrum, tuple((freqs % n).T), coefs)
        return np.fft.ifftn(spectrum) * n**self.p

    def to_literal(self) -> list[dict]:
        out = []
        for k, c in self._sortkey():
            if is_exact(c):
                coef = [str(c.re), str(c.im)]
            else:
                coef = [repr(complex(c).real), repr(complex(c).imag)]
            out.append({"frequency": list(k), "coefficient": coef})
        return out

    @classmethod
    def from_literal(cls, p: int, terms: Iterable[Mapping]) -> "TrigPoly":
        out = {}
        for t in terms:
            k = tuple(int(a) for a in t["frequency"])
            re, im = t.get("coefficient", [1, 0])
            c = GaussianRational(Fraction(str(re)), Fraction(str(im)))
            out[k] = out[k] + c if k in out else c
        return cls(p, out)


def evaluate(f: TrigPoly, x: Sequence) -> complex:
    """f(x) by direct summation."""
    x = np.array([float(c) for c in x])
    if x.shape != (f.p,):
        raise ValueError("point has the wrong dimension")
    return complex(f.evaluate_many(x[None, :])[0])


def multiply(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    """Exact convolution of the coefficient maps."""
    f._check(g)
    out: dict = {}
    for k1, c1 in f.coefficients.items():
        for k2, c2 in g.coefficients.items():
            k = tuple(a + b for a, b in zip(k1, k2))
            c = c1 * c2
            out[k] = out[k] + c if k in out else c
    return TrigPoly(f.p, out)


def _phase(k: Sequence[int], t: Sequence[Fraction]):
    """exp(2 pi i k.t), exact when k.t is a multiple of 1/4."""
    q = sum(a * b for a, b in zip(k, t))
    q = Fraction(q) - (Fraction(q).numerator // Fraction(q).denominator)
    if (4 * q).denominator == 1:
        return (GaussianRational(1), I, GaussianRational(-1), -I)[int(4 * q)]
    return complex(np.exp(2j * np.pi * float(q)))


def pullback(f: TrigPoly, h: Isometry) -> TrigPoly:
    """f o h, i.e. sum_k c_k exp(2 pi i k.t) exp(2 pi i (O^T k).x)."""
    if h.p != f.p:
        raise ValueError("dimension mismatch")
    ot = np.array(h.linear, dtype=np.int64).T
    out = {}
    for k, c in f.coefficients.items():
        kk = tuple(int(a) for a in ot @ np.array(k, dtype=np.int64))
        out[kk] = c * _phase(k, h.translation)
    return TrigPoly(f.p, out)


def group_average(f: TrigPoly, group: FiniteIsometryGroup) -> TrigPoly:
    """(1/|G|) sum_h f o h, the projector onto G-invariant functions."""
    out: dict = {}
    for h in group.elements:
        for k, c in pullback(f, h).coefficients.items():
            out[k] = out[k] + c if k in out else c
    w = Fraction(1, group.order)
    return TrigPoly(f.p, {k: c * w for k, c in out.items()})


class CovectorField:
    """df = 2 pi * (components), with the 2 pi kept out of the coefficients."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[TrigPoly]):
        components = tuple(components)
        if len({c.p for c in components}) > 1 or (components and components[0].p != len(components)):
            raise ValueError("a covector field on T^p needs p components of dimension p")
        self.components = components

    @property
    def p(self) -> int:
        return len(self.components)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, CovectorField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __add__(self, other: "CovectorField") -> "CovectorField":
        return CovectorField([a + b for a, b in zip(self.components, other.components)])

    def scale(self, f) -> "CovectorField":
        """Multiply every component by a function or scalar."""
        return CovectorField([c * f for c in self.components])

    def __call__(self, x) -> np.ndarray:
        return TWO_PI * np.array([evaluate(c, x) for c in self.components])

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """(n, p) array of covector values, 2 pi included."""
        return TWO_PI * np.stack([c.evaluate_many(points) for c in self.components], axis=-1)

    def evaluate_grid(self, n: int) -> np.ndarray:
        """(n,)*p + (p,) array on the uniform grid, 2 pi included."""
        return TWO_PI * np.stack([c.evaluate_grid(n) for c in self.components], axis=-1)

    def __repr__(self):
        return f"CovectorField(2pi * {list(self.components)!r})"


def differential(f: TrigPoly) -> CovectorField:
    """df; component j has coefficients i k_j c_k (times the symbolic 2 pi)."""
    comps = []
    for j in range(f.p):
        comps.append(TrigPoly(f.p, {k: c * (I * k[j]) for k, c in f.coefficients.items() if k[j]}))
    return CovectorField(comps)


def _frequencies(p: int, cutoff: int):
    return itertools.product(range(-cutoff, cutoff + 1), repeat=p)


def invariant_basis(group: FiniteIsometryGroup, cutoff: int = DEFAULT_CUTOFF) -> list[TrigPoly]:
    """Orbit averages of exp(2 pi i k.x), |k|_inf <= cutoff, one per orbit, zeros dropped.

    Distinct orbits give disjoint supports, so the result is linearly independent.
    """
    p = group.p
    covered = set()
    basis = []
    for k in _frequencies(p, cutoff):
        if k in covered:
            continue
        avg = group_average(TrigPoly.exponential(k), group)
        for h in group.elements:
            covered.add(tuple(int(a) for a in np.array(h.linear, dtype=np.int64).T @ np.array(k)))
        if not avg.is_zero:
            basis.append(avg)
    return basis


def differential_kernel(group: FiniteIsometryGroup, cutoff: int = DEFAULT_CUTOFF) -> list[TrigPoly]:
    """Basis of the invariant elements at this cutoff with vanishing differential.

    d is diagonal in the Fourier basis and the invariant basis elements have
    disjoint supports, so a combination has zero differential exactly when
    each element it uses does.
    """
    return [b for b in invariant_basis(group, cutoff) if differential(b).is_zero]


def random_trig_poly(p: int, cutoff: int, rng: np.random.Generator, terms: int = 6, real: bool = False) -> TrigPoly:
    """A random polynomial with small exact Gaussian-rational coefficients."""
    out = {}
    for _ in range(terms):
        k = tuple(int(a) for a in rng.integers(-cutoff, cutoff + 1, size=p))
        re = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 5)))
        im = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 5)))
        out[k] = GaussianRational(re, im)
    f = TrigPoly(p, out)
    return f.real_part() if real else f


def random_invariant(
    group: FiniteIsometryGroup, cutoff: int, rng: np.random.Generator, terms: int = 6, real: bool = False
) -> TrigPoly:
    """Group average of a random polynomial, redrawn until it is non-constant."""
    for _ in range(100):
        f = group_average(random_trig_poly(group.p, cutoff, rng, terms, real), group)
        if not f.is_constant:
            return f
    raise RuntimeError("could not draw a non-constant invariant polynomial")


def grid_points(n: int, p: int) -> np.ndarray:
    """The uniform grid {j/n}^p as an (n^p, p) array in C order (matches ``evaluate_grid(...).ravel()``)."""
    axes = np.meshgrid(*([np.arange(n) / n] * p), indexing="ij")
    return np.stack([a.ravel() for a in axes], axis=-1)
