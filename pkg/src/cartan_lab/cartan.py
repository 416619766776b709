"""Cartan projection of SL_n over R, Q_p and F_p((t)), and Weyl-chamber geometry.

Coordinates live in the chamber ``x_1 >= ... >= x_n``, ``sum x_i = 0``.
Over R they are half-logs of the Gram eigenvalues; over a nonarchimedean
field they are the negated valuations of the invariant factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Tuple, Union

from ._backend import jacobi_eigvalsh
from .errors import ConvergenceError, DeterminantError, DimensionMismatchError, DomainMismatchError
from .matrices import Pair, SLMatrix, det_by_elimination, det_division_free, submatrix
from .scalars import INF, RATIONAL, FieldDescriptor, LaurentDomain

ARCH_TOL = 1e-8
JACOBI_TOL = 1e-12
JACOBI_SWEEPS = 100


@dataclass(frozen=True)
class WeylVector:
    """Point of the closed positive Weyl chamber of SL_n.

    Coordinates are ints (Cartan projection, nonarchimedean), Fractions
    (Lyapunov projection, nonarchimedean) or floats (archimedean).
    """

    coords: tuple

    def __post_init__(self):
        c = tuple(self.coords)
        object.__setattr__(self, "coords", c)
        if len(c) < 2:
            raise DimensionMismatchError("a Weyl vector needs at least two coordinates")
        exact = self.exact
        tol = 0 if exact else ARCH_TOL
        if any(c[i] < c[i + 1] - tol for i in range(len(c) - 1)):
            raise ValueError(f"coordinates {c} are not sorted descending")
        s = sum(c)
        if (s != 0) if exact else abs(s) > ARCH_TOL:
            raise ValueError(f"coordinates {c} do not sum to zero")

    @property
    def exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for x in self.coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return len(self.coords)

    def norm(self) -> float:
        return chamber_norm(self)

    def norm_squared(self):
        return sum(x * x for x in self.coords)

    @property
    def scalar(self):
        """Rank-one scalar ``x_1 - x_2``; for the unipotent ``g_n`` this is ``2n``."""
        return self.coords[0] - self.coords[1]

    def iota(self) -> "WeylVector":
        return opposition_involution(self)

    def scaled(self, factor) -> "WeylVector":
        return WeylVector(tuple(x * factor for x in self.coords))

    def distance(self, other: "WeylVector") -> float:
        return math.sqrt(sum((a - b) ** 2 for a, b in zip(self.coords, other.coords)))

    def format(self) -> str:
        return "(" + ", ".join(_fmt_coord(x) for x in self.coords) + ")"

    def __str__(self):
        return self.format()


def _fmt_coord(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


@dataclass(frozen=True)
class PairMu:
    """Cartan projection of an element of G x G."""

    left: WeylVector
    right: WeylVector

    @property
    def scalars(self):
        return self.left.scalar, self.right.scalar

    def norm(self) -> float:
        return math.sqrt(self.left.norm() ** 2 + self.right.norm() ** 2)

    def iota(self) -> "PairMu":
        return PairMu(self.left.iota(), self.right.iota())

    def format(self) -> str:
        return f"{self.left.format()};{self.right.format()}"

    def __str__(self):
        return self.format()


MuValue = Union[WeylVector, PairMu]


class ChamberGeometry:
    """Euclidean structure on the sum-zero hyperplane of R^n.

    The norm is the standard l2 norm, which is invariant under coordinate
    permutations (the Weyl group) and under the opposition involution.
    """

    def __init__(self, n: int):
        if n < 2:
            raise DimensionMismatchError("n must be at least 2")
        self.n = n

    def norm(self, x) -> float:
        return chamber_norm(x)

    def iota(self, x: WeylVector) -> WeylVector:
        return opposition_involution(x)

    def permute(self, coords, perm):
        return tuple(coords[i] for i in perm)

    def project_to_chamber(self, coords) -> WeylVector:
        return WeylVector(tuple(sorted(coords, reverse=True)))


def chamber_norm(x) -> float:
    coords = x.coords if isinstance(x, WeylVector) else tuple(x)
    if all(isinstance(c, int) for c in coords):
        return math.sqrt(sum(c * c for c in coords))
    return math.sqrt(sum(float(c) ** 2 for c in coords))


def opposition_involution(x: WeylVector) -> WeylVector:
    return WeylVector(tuple(-c for c in reversed(x.coords)))


# --- archimedean -------------------------------------------------------------


def gram(rows):
    n = len(rows)
    cols = list(zip(*rows))
    return [[math.fsum(a * b for a, b in zip(cols[i], cols[j])) for j in range(n)] for i in range(n)]


def compound(rows, i, one=1.0):
    """i-th compound matrix: all i x i minors, index sets in lexicographic order."""
    n = len(rows)
    idx = list(combinations(range(n), i))
    return [[det_by_elimination(submatrix(rows, r, c), one) for c in idx] for r in idx]


def top_log_singular_value(rows) -> float:
    """``log`` of the largest singular value, from the top Gram eigenvalue."""
    eig, sweeps = jacobi_eigvalsh(gram(rows), JACOBI_TOL, JACOBI_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi iteration did not converge in {JACOBI_SWEEPS} sweeps")
    return 0.5 * math.log(max(eig))


def mu_archimedean(g: SLMatrix) -> WeylVector:
    """Half-logs of the Gram eigenvalues, read off through compound matrices.

    ``x_1 + ... + x_i`` is the log of the top singular value of the i-th
    compound.  Only largest Gram eigenvalues are used, which the Jacobi
    iteration resolves to full relative precision even when ``g`` is badly
    conditioned; the smallest eigenvalue of the Gram matrix of ``g`` itself
    would drown in rounding.  Rational entries give exact compounds.
    """
    if isinstance(g.domain, LaurentDomain):
        raise DomainMismatchError("archimedean Cartan projection needs real entries")
    n = g.n
    exact = g.domain is RATIONAL
    partial = [0.0]
    for i in range(1, n):
        m = compound(g.rows, i, Fraction(1)) if exact else compound(g.float_rows(), i)
        scale = max(abs(x) for r in m for x in r)
        rows = [[float(x / scale) for x in r] for r in m]
        partial.append(math.log(scale) + top_log_singular_value(rows))
    partial.append(0.0)
    xs = [partial[i] - partial[i - 1] for i in range(1, n + 1)]
    return WeylVector(tuple(sorted(xs, reverse=True)))


# --- nonarchimedean ----------------------------------------------------------


def _check_nonarch(g: SLMatrix, field: FieldDescriptor):
    if field.archimedean:
        raise DomainMismatchError("this Cartan projection needs a nonarchimedean field")
    if not field.accepts(g.domain):
        raise DomainMismatchError(f"field {field} cannot view {g.domain!r} entries")


def _valuation_fn(domain, field):
    if isinstance(domain, LaurentDomain):
        return lambda x: x.valuation()
    p = field.p
    return lambda x: RATIONAL.valuation(x, p)


def invariant_factor_valuations(g: SLMatrix, field: FieldDescriptor):
    """Valuations ``v_1 <= ... <= v_n`` of the invariant factors of ``g`` over the valuation ring.

    Each step pivots on a minimum-valuation entry (first in row-major order)
    and clears its column.  Over F_p[t, 1/t] the row being cleared is first
    scaled by the unit part of the pivot, an invertible operation over
    F_p[[t]], so entries never leave the Laurent ring.  Column clearing is
    skipped: it only touches the pivot row or rescales columns by units.
    The determinant is one, so the last valuation is minus the sum of the rest.
    """
    _check_nonarch(g, field)
    val = _valuation_fn(g.domain, field)
    laurent = isinstance(g.domain, LaurentDomain)
    a = [list(r) for r in g.rows]
    vals = []
    while len(a) > 1:
        best_v = INF
        bi = bj = -1
        for i, row in enumerate(a):
            for j, x in enumerate(row):
                if x:
                    v = val(x)
                    if v < best_v:
                        best_v, bi, bj = v, i, j
        if best_v == INF:
            raise DeterminantError("matrix is singular")
        vals.append(best_v)
        if len(a) == 2:
            break
        prow = a[bi]
        d = prow[bj]
        unit = d.shift(-best_v) if laurent else None
        for r, row in enumerate(a):
            e = row[bj]
            if r == bi or not e:
                continue
            # the pivot column is dropped below, so it is never updated
            if laurent:
                f = e.shift(-best_v)
                a[r] = [unit * x - f * y if j != bj else x for j, (x, y) in enumerate(zip(row, prow))]
            else:
                f = e / d
                a[r] = [x - f * y if y and j != bj else x for j, (x, y) in enumerate(zip(row, prow))]
        del a[bi]
        for row in a:
            del row[bj]
    vals.append(-sum(vals))
    return vals


def mu_nonarch_snf(g: SLMatrix, field: FieldDescriptor) -> WeylVector:
    return WeylVector(tuple(-v for v in invariant_factor_valuations(g, field)))


def mu_nonarch_minors(g: SLMatrix, field: FieldDescriptor) -> WeylVector:
    """Oracle: ``x_1 + ... + x_i`` is minus the least valuation of an i x i minor."""
    _check_nonarch(g, field)
    val = _valuation_fn(g.domain, field)
    zero = g.domain.zero
    n = g.n
    partial = [0]
    for i in range(1, n + 1):
        best = INF
        for rows in combinations(range(n), i):
            for cols in combinations(range(n), i):
                m = det_division_free(submatrix(g.rows, rows, cols), zero)
                if m:
                    best = min(best, val(m))
        if best == INF:
            raise DeterminantError("matrix is singular")
        partial.append(-best)
    return WeylVector(tuple(partial[i] - partial[i - 1] for i in range(1, n + 1)))


def cartan_projection(g, field: FieldDescriptor, oracle: str = "snf") -> MuValue:
    """Cartan projection of a matrix or a pair, in the given field."""
    if isinstance(g, Pair):
        return PairMu(cartan_projection(g.left, field, oracle), cartan_projection(g.right, field, oracle))
    if field.archimedean:
        return mu_archimedean(g)
    if oracle == "snf":
        return mu_nonarch_snf(g, field)
    if oracle == "minors":
        return mu_nonarch_minors(g, field)
    if oracle == "both":
        a = mu_nonarch_snf(g, field)
        b = mu_nonarch_minors(g, field)
        if a != b:
            raise ArithmeticError(f"Smith-form and minor oracles disagree: {a} vs {b}")
        return a
    raise ValueError(f"unknown oracle {oracle!r}")


def mu_scalar(g, field: FieldDescriptor):
    """Rank-one scalar ``x_1 - x_2`` of an SL_2 element."""
    mu = cartan_projection(g, field)
    if mu.n != 2:
        raise DimensionMismatchError("the scalar Cartan projection is defined for SL_2 only")
    return mu.scalar


def _diff_norm(a: WeylVector, b: WeylVector) -> float:
    return chamber_norm(tuple(x - y for x, y in zip(a.coords, b.coords)))


def check_mu_subadditivity(g: SLMatrix, h: SLMatrix, field: FieldDescriptor) -> Tuple[float, float]:
    """Slacks ``(|mu(h)| - |mu(gh) - mu(g)|, |mu(g)| - |mu(gh) - mu(h)|)``; both are >= 0."""
    mg = cartan_projection(g, field)
    mh = cartan_projection(h, field)
    mgh = cartan_projection(g @ h, field)
    return (mh.norm() - _diff_norm(mgh, mg), mg.norm() - _diff_norm(mgh, mh))
