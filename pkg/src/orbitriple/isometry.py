"""Finite groups of affine isometries of the flat torus T^p = R^p / Z^p.

An isometry x -> O x + t descends to the torus exactly when O preserves the
integer lattice, so linear parts are signed permutation matrices and all
fixed-point computations are exact over the rationals.  Orthogonal normal
forms and reflection factorisations accept arbitrary real orthogonal
matrices and work in floating point.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.linalg

from . import _lattice
from .clifford import CliffordElement, clifford_of_covector, identity as clifford_identity, spinor_dimension

__all__ = [
    "Isometry",
    "FiniteIsometryGroup",
    "GroupNotFinite",
    "OrthogonalNormalForm",
    "FixedComponent",
    "FixedLocus",
    "LiftTable",
    "generate_group",
    "normal_form",
    "reflection_factors",
    "fixed_locus",
    "isotropy_group",
    "singular_locus",
    "pin_lift",
    "lift_table",
    "reflection",
    "rotation_quarter",
    "translation",
]

ORTHO_TOL = 1e-10
RECON_TOL = 1e-12


class GroupNotFinite(ValueError):
    """Raised when the closure of a generating set exceeds the configured cap."""


def _mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


def _point(x: Iterable) -> tuple[Fraction, ...]:
    return tuple(_mod1(Fraction(c)) for c in x)


# ---------------------------------------------------------------------------
# Isometries and groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Isometry:
    """The map x -> O x + t of T^p; ``t`` is stored reduced into [0, 1)^p."""

    linear: tuple[tuple[int, ...], ...]
    translation: tuple[Fraction, ...]

    def __init__(self, linear, translation=None):
        rows = tuple(tuple(_as_int(a) for a in row) for row in linear)
        p = len(rows)
        if any(len(r) != p for r in rows):
            raise ValueError("linear part must be square")
        o = np.array(rows, dtype=float)
        if not np.array_equal(o.T @ o, np.eye(p)):
            raise ValueError("linear part is not orthogonal (torus isometries need signed permutations)")
        t = _point(translation if translation is not None else [0] * p)
        if len(t) != p:
            raise ValueError("translation has the wrong length")
        object.__setattr__(self, "linear", rows)
        object.__setattr__(self, "translation", t)

    @property
    def p(self) -> int:
        return len(self.linear)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.linear, dtype=float)

    @classmethod
    def identity(cls, p: int) -> "Isometry":
        return cls(np.eye(p, dtype=int).tolist())

    def apply(self, x: Sequence) -> tuple[Fraction, ...]:
        x = [Fraction(c) for c in x]
        return _point(sum(o * c for o, c in zip(row, x)) + t for row, t in zip(self.linear, self.translation))

    __call__ = apply

    def apply_float(self, x: np.ndarray) -> np.ndarray:
        """Act on an (..., p) float array (result not reduced mod 1)."""
        return np.asarray(x, dtype=float) @ self.matrix.T + np.array([float(c) for c in self.translation])

    def __mul__(self, other: "Isometry") -> "Isometry":
        """Composition: (self * other)(x) = self(other(x))."""
        o = np.array(self.linear, dtype=int) @ np.array(other.linear, dtype=int)
        t = [sum(a * c for a, c in zip(row, other.translation)) + s for row, s in zip(self.linear, self.translation)]
        return Isometry(o.tolist(), t)

    def inverse(self) -> "Isometry":
        ot = np.array(self.linear, dtype=int).T
        t = [-sum(a * c for a, c in zip(row, self.translation)) for row in ot.tolist()]
        return Isometry(ot.tolist(), t)

    @property
    def is_identity(self) -> bool:
        return self.has_identity_linear_part and not any(self.translation)

    @property
    def has_identity_linear_part(self) -> bool:
        return all(a == int(i == j) for i, row in enumerate(self.linear) for j, a in enumerate(row))

    @property
    def is_translation(self) -> bool:
        return self.has_identity_linear_part

    @property
    def determinant(self) -> int:
        return int(round(np.linalg.det(self.matrix)))

    def fixes(self, x: Sequence) -> bool:
        return self.apply(x) == _point(x)

    def to_dict(self) -> dict:
        return {
            "matrix": [list(r) for r in self.linear],
            "translation": [str(c) for c in self.translation],
        }


def _as_int(a) -> int:
    f = Fraction(a)
    if f.denominator != 1:
        raise ValueError("linear part of a torus isometry must be an integer matrix")
    return int(f)


def reflection(p: int, axis: int, translation=None) -> Isometry:
    """x_axis -> -x_axis (optionally followed by a translation)."""
    o = np.eye(p, dtype=int)
    o[axis, axis] = -1
    return Isometry(o.tolist(), translation)


def rotation_quarter(p: int = 2, i: int = 0, j: int = 1, translation=None) -> Isometry:
    """Rotation by pi/2 in the (i, j) coordinate plane: e_i -> e_j, e_j -> -e_i."""
    o = np.eye(p, dtype=int)
    o[i, i] = o[j, j] = 0
    o[j, i] = 1
    o[i, j] = -1
    return Isometry(o.tolist(), translation)


def translation(t: Sequence) -> Isometry:
    return Isometry(np.eye(len(t), dtype=int).tolist(), t)


@dataclass(frozen=True)
class FiniteIsometryGroup:
    """A finite group of torus isometries; ``elements[0]`` is the identity.

    ``table[i][j]`` is the index of ``elements[i] * elements[j]``.
    """

    elements: tuple[Isometry, ...]
    table: tuple[tuple[int, ...], ...] = field(repr=False)

    @classmethod
    def from_elements(cls, elements: Sequence[Isometry]) -> "FiniteIsometryGroup":
        elements = list(elements)
        if not elements:
            raise ValueError("a group needs at least the identity")
        pos = {e: i for i, e in enumerate(elements)}
        ident = [i for i, e in enumerate(elements) if e.is_identity]
        if not ident:
            raise ValueError("element list does not contain the identity")
        if ident[0] != 0:
            i = ident[0]
            elements[0], elements[i] = elements[i], elements[0]
            pos = {e: k for k, e in enumerate(elements)}
        table = []
        for a in elements:
            row = []
            for b in elements:
                c = a * b
                if c not in pos:
                    raise ValueError("element list is not closed under composition")
                row.append(pos[c])
            table.append(tuple(row))
        return cls(tuple(elements), tuple(table))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def p(self) -> int:
        return self.elements[0].p

    def index(self, h: Isometry) -> int:
        return self.elements.index(h)

    def inverse_index(self, i: int) -> int:
        return self.table[i].index(0)

    def is_free(self) -> bool:
        return singular_locus(self).is_empty


def generate_group(generators: Sequence[Isometry], cap: int = 1024, p: Optional[int] = None) -> FiniteIsometryGroup:
    """Closure of the generators under composition (breadth-first)."""
    generators = list(generators)
    if p is None:
        if not generators:
            raise ValueError("need the dimension when there are no generators")
        p = generators[0].p
    if any(g.p != p for g in generators):
        raise ValueError("generators of different dimensions")
    ident = Isometry.identity(p)
    seen = {ident: 0}
    order = [ident]
    queue = deque([ident])
    while queue:
        a = queue.popleft()
        for g in generators:
            b = g * a
            if b not in seen:
                if len(order) >= cap:
                    raise GroupNotFinite(f"group not finite within cap {cap}")
                seen[b] = len(order)
                order.append(b)
                queue.append(b)
    return FiniteIsometryGroup.from_elements(order)


# ---------------------------------------------------------------------------
# Orthogonal normal forms
# ---------------------------------------------------------------------------


def _as_orthogonal(o) -> np.ndarray:
    if isinstance(o, Isometry):
        o = o.matrix
    o = np.asarray(o, dtype=float)
    if o.ndim != 2 or o.shape[0] != o.shape[1]:
        raise ValueError("expected a square matrix")
    if np.abs(o.T @ o - np.eye(o.shape[0])).max() > ORTHO_TOL:
        raise ValueError("input is not orthogonal")
    return o


@dataclass(frozen=True, eq=False)
class OrthogonalNormalForm:
    """O = basis @ diag(R_theta_1, ..., R_theta_k, -1, ..., -1, +1, ..., +1) @ basis.T"""

    angles: tuple[float, ...]
    minus_count: int
    plus_count: int
    basis: np.ndarray

    @property
    def p(self) -> int:
        return 2 * len(self.angles) + self.minus_count + self.plus_count

    def block_matrix(self) -> np.ndarray:
        blocks = [np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]]) for a in self.angles]
        blocks += [np.array([[-1.0]])] * self.minus_count + [np.array([[1.0]])] * self.plus_count
        return scipy.linalg.block_diag(*blocks) if blocks else np.zeros((0, 0))

    def reconstruct(self) -> np.ndarray:
        return self.basis @ self.block_matrix() @ self.basis.T


def normal_form(o) -> OrthogonalNormalForm:
    """Block-diagonalise an orthogonal matrix into planar rotations and +-1 eigenvalues.

    Angles lie in (0, pi) and are sorted ascending; -1 directions precede +1.
    """
    o = _as_orthogonal(o)
    p = o.shape[0]
    t, z = scipy.linalg.schur(o, output="real")
    rotations, minus, plus = [], [], []
    i = 0
    while i < p:
        if i + 1 < p and abs(t[i + 1, i]) > 1e-9:
            a = 0.5 * (t[i, i] + t[i + 1, i + 1])
            s = 0.5 * (t[i + 1, i] - t[i, i + 1])
            cols = z[:, [i, i + 1]].copy()
            if s < 0:
                cols[:, 1] *= -1
                s = -s
            rotations.append((math.atan2(s, a), cols))
            i += 2
        else:
            (minus if t[i, i] < 0 else plus).append(z[:, [i]])
            i += 1
    rotations.sort(key=lambda r: r[0])
    cols = [c for _, c in rotations] + minus + plus
    basis = np.hstack(cols) if cols else np.zeros((p, 0))
    # re-orthonormalise and re-fit the angles against the cleaned basis
    q, r = np.linalg.qr(basis)
    basis = q * np.sign(np.diag(r))
    angles = []
    for k in range(len(rotations)):
        a, b = basis[:, 2 * k], basis[:, 2 * k + 1]
        oa = o @ a
        angles.append(math.atan2(float(b @ oa), float(a @ oa)))
    nf = OrthogonalNormalForm(tuple(angles), len(minus), len(plus), basis)
    err = np.abs(nf.reconstruct() - o).max() if p else 0.0
    if err > RECON_TOL:
        raise ArithmeticError(f"normal form reconstruction error {err:.3e}")
    return nf


def _reflect(v: np.ndarray) -> np.ndarray:
    return np.eye(len(v)) - 2.0 * np.outer(v, v)


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    return -v if nz.size and v[nz[0]] < 0 else v


def reflection_factors(o) -> list[np.ndarray]:
    """Unit vectors v_1..v_m (m <= p) with O = r_{v_1} ... r_{v_m}, r_v the reflection through v-perp."""
    o = _as_orthogonal(o)
    nf = normal_form(o)
    factors = []
    for k, theta in enumerate(nf.angles):
        a, b = nf.basis[:, 2 * k], nf.basis[:, 2 * k + 1]
        factors.append(_canonical_sign(math.cos(theta / 2) * a + math.sin(theta / 2) * b))
        factors.append(_canonical_sign(a))
    start = 2 * len(nf.angles)
    for j in range(nf.minus_count):
        factors.append(_canonical_sign(nf.basis[:, start + j]))
    recon = np.eye(o.shape[0])
    for v in factors:
        recon = recon @ _reflect(v)
    err = np.abs(recon - o).max() if o.size else 0.0
    if err > RECON_TOL:
        raise ArithmeticError(f"reflection factorisation error {err:.3e}")
    return factors


# ---------------------------------------------------------------------------
# Fixed loci
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixedComponent:
    """An affine subtorus base + span(directions) of T^p.

    ``directions`` are integer lattice vectors spanning the direction space.
    """

    base: tuple[Fraction, ...]
    directions: tuple[tuple[int, ...], ...] = ()

    @property
    def p(self) -> int:
        return len(self.base)

    @property
    def dimension(self) -> int:
        return len(self.directions)

    def orthonormal_basis(self) -> np.ndarray:
        """(p, dim) array with orthonormal columns spanning the direction space."""
        if not self.directions:
            return np.zeros((self.p, 0))
        q, _ = np.linalg.qr(np.array(self.directions, dtype=float).T)
        return q

    def normal(self) -> np.ndarray:
        """A deterministic unit vector orthogonal to the component."""
        basis = self.orthonormal_basis()
        # generic reference direction, then project away the tangent part
        ref = np.array([1.0 / (k + 1.5) for k in range(self.p)])
        ref = ref - basis @ (basis.T @ ref)
        return ref / np.linalg.norm(ref)

    def _annihilator(self) -> list[list[int]]:
        return _lattice.integer_kernel([list(d) for d in self.directions], self.p)

    def contains(self, x: Sequence) -> bool:
        diff = [Fraction(a) - b for a, b in zip(x, self.base)]
        return all(sum(m * d for m, d in zip(row, diff)).denominator == 1 for row in self._annihilator())

    def contains_component(self, other: "FixedComponent") -> bool:
        if other.dimension > self.dimension or not self.contains(other.base):
            return False
        if not other.directions:
            return True
        stacked = np.array(list(self.directions) + list(other.directions), dtype=float)
        return np.linalg.matrix_rank(stacked) == self.dimension

    def sample_points(self, count: int = 8) -> list[tuple[Fraction, ...]]:
        """``count`` exact rational points on the component, starting with the base point."""
        if not self.directions:
            return [self.base]
        pts = []
        for j in range(count):
            s = [Fraction((j * (2 * i + 1)) % count, count) for i in range(self.dimension)]
            x = [b + sum(si * d[r] for si, d in zip(s, self.directions)) for r, b in enumerate(self.base)]
            pts.append(_point(x))
        return list(dict.fromkeys(pts))

    def to_dict(self) -> dict:
        return {
            "base": [str(c) for c in self.base],
            "directions": [list(d) for d in self.directions],
            "dimension": self.dimension,
        }


@dataclass(frozen=True)
class FixedLocus:
    components: tuple[FixedComponent, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.components

    @property
    def dimensions(self) -> list[int]:
        return [c.dimension for c in self.components]

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def contains(self, x: Sequence) -> bool:
        return any(c.contains(x) for c in self.components)

    def sample_points(self, per_component: int = 8) -> list[tuple[Fraction, ...]]:
        pts = [x for c in self.components for x in c.sample_points(per_component)]
        return list(dict.fromkeys(pts))


def fixed_locus(h: Isometry) -> FixedLocus:
    """Solve (Id - O) x = t (mod Z^p) exactly."""
    p = h.p
    a = [[int(i == j) - h.linear[i][j] for j in range(p)] for i in range(p)]
    bases, directions = _lattice.solve_affine_mod1(a, h.translation)
    dirs = tuple(tuple(d) for d in directions)
    return FixedLocus(tuple(FixedComponent(b, dirs) for b in bases))


def isotropy_group(group: FiniteIsometryGroup, x: Sequence) -> FiniteIsometryGroup:
    """The stabiliser G_x of an exact rational point."""
    return FiniteIsometryGroup.from_elements([h for h in group.elements if h.fixes(x)])


def singular_locus(group: FiniteIsometryGroup) -> FixedLocus:
    """Union of the fixed loci of the non-identity elements, duplicates merged.

    Components contained in a larger component are absorbed into it.
    """
    comps: list[FixedComponent] = []
    for h in group.elements[1:]:
        comps.extend(fixed_locus(h).components)
    comps.sort(key=lambda c: -c.dimension)
    kept: list[FixedComponent] = []
    for c in comps:
        if not any(k.contains_component(c) for k in kept):
            kept.append(c)
    kept.sort(key=lambda c: (c.dimension, c.base, c.directions))
    return FixedLocus(tuple(kept))


# ---------------------------------------------------------------------------
# Spinor lifts
# ---------------------------------------------------------------------------


def pin_lift(h, p: Optional[int] = None) -> tuple[CliffordElement, int]:
    """S = c(v_1)...c(v_m) over the reflection factors of the linear part, with parity m mod 2.

    S c(w) S^-1 = (-1)^m c(O w) for every covector w.
    """
    o = _as_orthogonal(h)
    p = o.shape[0] if p is None else p
    s = clifford_identity(p)
    factors = reflection_factors(o)
    for v in factors:
        s = s @ clifford_of_covector(v)
    return s, len(factors) % 2


@dataclass(frozen=True, eq=False)
class LiftTable:
    """Spinor action of G (or of its double cover) by Pin elements.

    ``kind`` is ``"sign"`` when a +-1 regauge makes S a representation of G,
    ``"phase"`` when a U(1) regauge does (a spin^c lift), and
    ``"double-cover"`` otherwise; in that case ``elements`` lists the pairs
    (g, +-1) of the extension.  ``cocycle[i][j]`` is the sign with
    S(g_i) S(g_j) = cocycle * S(g_i g_j) for the reflection-factor lifts.
    """

    group: FiniteIsometryGroup
    kind: str
    cocycle: tuple[tuple[int, ...], ...]
    isometries: tuple[Isometry, ...]
    matrices: tuple[np.ndarray, ...]
    phases: tuple[complex, ...]

    @property
    def is_true_representation(self) -> bool:
        return self.kind != "double-cover"

    @property
    def sign_trivial(self) -> bool:
        return self.kind == "sign"

    @property
    def order(self) -> int:
        return len(self.matrices)

    def homomorphism_defect(self) -> float:
        """max |U(a)U(b) - U(ab)| over the represented group (0 for a genuine representation)."""
        if self.kind == "double-cover":
            g = self.group
            n = g.order
            worst = 0.0
            for a in range(2 * n):
                for b in range(2 * n):
                    ia, sa = a % n, 1 - 2 * (a // n)
                    ib, sb = b % n, 1 - 2 * (b // n)
                    ic = g.table[ia][ib]
                    sc = sa * sb * self.cocycle[ia][ib]
                    c = ic + (0 if sc == 1 else n)
                    worst = max(worst, float(np.abs(self.matrices[a] @ self.matrices[b] - self.matrices[c]).max()))
            return worst
        g = self.group
        return max(
            float(np.abs(self.matrices[a] @ self.matrices[b] - self.matrices[g.table[a][b]]).max())
            for a in range(g.order)
            for b in range(g.order)
        )


def _gauge(cocycle, table, modulus: int) -> Optional[list[int]]:
    """Exponents a(g) mod ``modulus`` with a(g) + a(h) - a(gh) = -(modulus/2)[c(g,h) = -1]."""
    n = len(table)
    rows, rhs = [], []
    for i in range(n):
        for j in range(n):
            row = [0] * n
            row[i] += 1
            row[j] += 1
            row[table[i][j]] -= 1
            rows.append(row)
            rhs.append((-(modulus // 2)) % modulus if cocycle[i][j] == -1 else 0)
    return _lattice.solve_linear_mod(rows, rhs, modulus)


def lift_table(group: FiniteIsometryGroup) -> LiftTable:
    """Choose Pin lifts S(h) for every element and regauge them into a representation if possible."""
    p = group.p
    d = spinor_dimension(p)
    lifts = [pin_lift(h.matrix, p)[0].matrix for h in group.elements]
    n = group.order
    cocycle = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = lifts[i] @ lifts[j]
            target = lifts[group.table[i][j]]
            c = np.trace(target.conj().T @ prod) / d
            sign = 1 if c.real > 0 else -1
            if abs(c - sign) > 1e-9 or np.abs(prod - sign * target).max() > 1e-9:
                raise ArithmeticError("Pin lifts do not multiply up to sign")
            row.append(sign)
        cocycle.append(tuple(row))
    cocycle = tuple(cocycle)

    for kind, modulus in (("sign", 2), ("phase", 2 * n)):
        a = _gauge(cocycle, group.table, modulus)
        if a is not None:
            phases = tuple(complex(np.exp(2j * np.pi * k / modulus)) if kind == "phase" else float((-1) ** k) + 0j for k in a)
            mats = tuple(ph * m for ph, m in zip(phases, lifts))
            return LiftTable(group, kind, cocycle, group.elements, mats, phases)

    mats = tuple(lifts) + tuple(-m for m in lifts)
    return LiftTable(group, "double-cover", cocycle, group.elements * 2, mats, (1 + 0j,) * n + (-1 + 0j,) * n)
