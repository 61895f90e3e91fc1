"""Integer-lattice linear algebra on top of the Smith normal form."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp


def smith(rows: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Return (diag, U, V) with U @ M @ V = D, U and V unimodular."""
    m = Matrix([[int(a) for a in r] for r in rows])
    d, u, v = smith_normal_decomp(m, domain=ZZ)
    k = min(d.shape)
    diag = [abs(int(d[i, i])) for i in range(k)]
    # normalise signs so that D has nonnegative diagonal
    u = [[int(u[i, j]) for j in range(u.shape[1])] for i in range(u.shape[0])]
    for i in range(k):
        if int(d[i, i]) < 0:
            u[i] = [-a for a in u[i]]
    v = [[int(v[i, j]) for j in range(v.shape[1])] for i in range(v.shape[0])]
    return diag, u, v


def _matvec(m, x):
    return [sum(a * b for a, b in zip(row, x)) for row in m]


def _frac_mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def solve_affine_mod1(a: Sequence[Sequence[int]], t: Sequence[Fraction]):
    """All solutions of a @ x = t (mod Z^n) for a square integer matrix.

    Returns ``(bases, directions)``: one base point per connected component
    (coordinates in [0, 1)) and integer generators of the common direction
    lattice.  ``bases`` is empty when there is no solution.
    """
    n = len(a)
    diag, u, v = smith(a)
    diag = diag + [0] * (n - len(diag))
    s = _matvec(u, [Fraction(x) for x in t])
    choices = []
    for i in range(n):
        if diag[i] == 0:
            if s[i].denominator != 1:
                return [], []
            choices.append([Fraction(0)])
        else:
            choices.append([(s[i] + k) / diag[i] for k in range(diag[i])])
    directions = [[v[r][i] for r in range(n)] for i in range(n) if diag[i] == 0]
    bases = []
    for y in itertools.product(*choices):
        x = tuple(_frac_mod1(c) for c in _matvec(v, y))
        bases.append(x)
    return bases, directions


def integer_kernel(rows: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """A Z-basis of {m in Z^n : rows @ m = 0}."""
    if not rows:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    diag, _, v = smith(rows)
    rank = sum(1 for d in diag if d)
    return [[v[r][i] for r in range(n)] for i in range(rank, n)]


def invariant_frequency_lattice(translations: Sequence[Sequence[Fraction]], n: int) -> list[list[int]]:
    """Z-basis (as columns-listed vectors) of {k in Z^n : k . t in Z for every t}."""
    translations = [list(map(Fraction, t)) for t in translations if any(Fraction(c) for c in t)]
    if not translations:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    den = 1
    for t in translations:
        for c in t:
            den = den * c.denominator // gcd(den, c.denominator)
    # rows: den * t_j, condition rows @ k = 0 (mod den)
    rows = [[int(c * den) for c in t] for t in translations]
    diag, _, v = smith(rows)
    diag = diag + [0] * (n - len(diag))
    scale = [den // gcd(d, den) if d else 1 for d in diag[:n]]
    return [[v[r][i] * scale[i] for r in range(n)] for i in range(n)]


def solve_linear_mod(rows: Sequence[Sequence[int]], b: Sequence[int], modulus: int) -> Optional[list[int]]:
    """One solution x of rows @ x = b (mod modulus), or None."""
    ncols = len(rows[0])
    diag, u, v = smith(rows)
    s = _matvec(u, b)
    y = [0] * ncols
    for i, si in enumerate(s):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if si % modulus:
                return None
            continue
        g = gcd(d, modulus)
        if si % g:
            return None
        m = modulus // g
        y[i] = (si // g) * pow(d // g, -1, m) % m if m > 1 else 0
    return [c % modulus for c in _matvec(v, y)]
