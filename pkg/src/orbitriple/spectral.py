"""Dirac spectrum of the flat torus and counting of G-invariant eigenspinors.

On T^p the Dirac operator acts on e^{2 pi i k.x} psi by the symbol
2 pi c(k), so the |D|-eigenspace at 2 pi |k| is spanned by the frequencies
of that length tensored with the spinor space.  The invariant dimension of
each eigenspace is the trace of the averaging projector, obtained from the
character formula

    dim = (1/|G|) sum_h sum_{k : O k = k} exp(-2 pi i k.t) tr S(h).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .clifford import clifford_of_covector, spinor_dimension
from .isometry import LiftTable

__all__ = [
    "MAX_FREQUENCIES",
    "SpectrumShell",
    "CountingReport",
    "frequencies_within",
    "enumerate_spectrum",
    "invariant_count",
    "weyl_fit",
    "dimension_probe",
]

MAX_FREQUENCIES = 2_000_000
INTEGRALITY_TOL = 1e-9


@dataclass(frozen=True)
class SpectrumShell:
    """The frequency k with eigenvalues +-2 pi |k|; ``plus + minus == multiplicity``."""

    frequency: tuple[int, ...]
    magnitude: float
    multiplicity: int
    plus: int
    minus: int


@dataclass(frozen=True)
class CountingReport:
    cutoff: float
    total: int
    invariant: int
    shells: tuple[tuple[int, int, int], ...]  # (|k|^2, total dim, invariant dim)
    exponent: Optional[float] = None

    @property
    def ratio(self) -> float:
        return self.invariant / self.total if self.total else 0.0


def frequencies_within(p: int, cutoff: float) -> np.ndarray:
    """All k in Z^p with 2 pi |k| <= cutoff, sorted by |k| then lexicographically."""
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    r = cutoff / (2 * math.pi)
    kmax = int(math.floor(r))
    if (2 * kmax + 1) ** p > MAX_FREQUENCIES:
        raise ValueError("cutoff too large")
    axes = np.meshgrid(*([np.arange(-kmax, kmax + 1)] * p), indexing="ij")
    ks = np.stack([a.ravel() for a in axes], axis=-1)
    n2 = (ks**2).sum(axis=1)
    ks = ks[2 * math.pi * np.sqrt(n2) <= cutoff]
    order = np.lexsort(tuple(ks[:, j] for j in reversed(range(p))) + ((ks**2).sum(axis=1),))
    return ks[order]


def enumerate_spectrum(p: int, cutoff: float) -> list[SpectrumShell]:
    d = spinor_dimension(p)
    shells = []
    for k in frequencies_within(p, cutoff):
        k = tuple(int(a) for a in k)
        norm = math.sqrt(sum(a * a for a in k))
        if norm == 0:
            shells.append(SpectrumShell(k, 0.0, d, 0, 0))
            continue
        # signs of c(k)/|k|: its trace fixes the split between +1 and -1
        tr = float(np.trace(clifford_of_covector(np.array(k) / norm).matrix).real)
        plus = int(round((d + tr) / 2))
        shells.append(SpectrumShell(k, 2 * math.pi * norm, d, plus, d - plus))
    return shells


def invariant_count(lift: LiftTable, cutoff: float) -> CountingReport:
    """Invariant eigenspinor count N_G(cutoff) through the projector trace on every |D|-eigenspace."""
    p = lift.group.p
    d = spinor_dimension(p)
    ks = frequencies_within(p, cutoff)
    n2 = (ks**2).sum(axis=1)
    levels, shell_index = np.unique(n2, return_inverse=True)
    traces = np.zeros(len(levels), dtype=complex)
    for h, s in zip(lift.isometries, lift.matrices):
        o = np.array(h.linear, dtype=np.int64)
        fixed = np.all(ks @ o.T == ks, axis=1)
        t = np.array([float(c) for c in h.translation])
        weights = np.where(fixed, np.exp(-2j * np.pi * (ks @ t)), 0) * np.trace(s)
        traces += np.bincount(shell_index, weights=weights.real, minlength=len(levels))
        traces += 1j * np.bincount(shell_index, weights=weights.imag, minlength=len(levels))
    dims = traces / lift.order
    rounded = np.rint(dims.real)
    if np.abs(dims - rounded).max() > INTEGRALITY_TOL or (rounded < 0).any():
        raise ArithmeticError("projector trace is not a nonnegative integer")
    totals = np.bincount(shell_index, minlength=len(levels)) * d
    shells = tuple((int(a), int(b), int(c)) for a, b, c in zip(levels, totals, rounded))
    return CountingReport(float(cutoff), int(totals.sum()), int(rounded.sum()), shells)


def weyl_fit(reports: Sequence[CountingReport]) -> float:
    """Least-squares slope of log N_G against log cutoff."""
    if len(reports) < 4:
        raise ValueError("insufficient data points: need at least 4 cutoffs")
    cut = np.array([r.cutoff for r in reports], dtype=float)
    if cut.max() < 4 * cut.min():
        raise ValueError("insufficient data points: cutoffs must span a factor of 4")
    counts = np.array([r.invariant for r in reports], dtype=float)
    if (counts <= 0).any():
        raise ValueError("insufficient data points: zero invariant counts")
    slope, _ = np.polyfit(np.log(cut), np.log(counts), 1)
    return float(slope)


def dimension_probe(lift: LiftTable, cutoffs: Sequence[float] = (25.0, 50.0, 75.0, 100.0)) -> list[CountingReport]:
    """Counting reports at each cutoff; the last carries the fitted exponent."""
    reports = [invariant_count(lift, c) for c in cutoffs]
    exponent = weyl_fit(reports)
    last = reports[-1]
    reports[-1] = CountingReport(last.cutoff, last.total, last.invariant, last.shells, exponent)
    return reports
