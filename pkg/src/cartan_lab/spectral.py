"""Lyapunov projection and eigenvalue-modulus censuses."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List

import numpy as np

from .cartan import WeylVector, cartan_projection, chamber_norm, compound, top_log_singular_value
from .errors import ConvergenceError, DomainMismatchError, EntrySizeError
from .matrices import SLMatrix, det_division_free, submatrix
from .scalars import INF, RATIONAL, FieldDescriptor, LaurentDomain

MAX_MATRIX_BITS = 10 ** 6
UNIT_CIRCLE_TOL = 1e-8


@dataclass(frozen=True)
class SpectralCensus:
    n_gt: int
    n_eq: int
    n_lt: int

    @property
    def n(self):
        return self.n_gt + self.n_eq + self.n_lt

    def as_tuple(self):
        return (self.n_gt, self.n_eq, self.n_lt)


@dataclass(frozen=True)
class LyapunovEstimate:
    """Result of the power-limit computation.

    ``value`` is the doubling increment ``(mu(g^(2^k)) - mu(g^(2^(k-1)))) / 2^(k-1)``,
    which reaches the limit exactly once ``mu(g^m) - m * lambda`` has
    stabilized; ``ratio`` is the plain ``mu(g^(2^k)) / 2^k``.  ``defects`` holds
    ``|mu(g^(2^j)) / 2^j - reference|`` for ``j = 0..k``.
    """

    value: WeylVector
    ratio: WeylVector
    defects: List[float]
    k: int


def charpoly(g: SLMatrix):
    """Coefficients ``[c_0, ..., c_n]`` of ``det(X - g)``, with ``c_n = 1``."""
    n = g.n
    dom = g.domain
    if isinstance(dom, LaurentDomain):
        # characteristic p forbids the divisions in Faddeev-LeVerrier
        coeffs = [dom.zero] * (n + 1)
        coeffs[n] = dom.one
        for k in range(1, n + 1):
            total = dom.zero
            for idx in combinations(range(n), k):
                total = total + det_division_free(submatrix(g.rows, idx, idx), dom.zero)
            coeffs[n - k] = total if k % 2 == 0 else -total
        return coeffs
    # Faddeev-LeVerrier
    a = g.rows
    one, zero = dom.one, dom.zero
    coeffs = [zero] * (n + 1)
    coeffs[n] = one
    m = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        c_prev = coeffs[n - k + 1]
        # M_k = A M_{k-1} + c_{n-k+1} I
        am = [[sum((a[i][l] * m[l][j] for l in range(n)), zero) for j in range(n)] for i in range(n)]
        for i in range(n):
            am[i][i] = am[i][i] + c_prev
        m = am
        tr = sum((sum((a[i][l] * m[l][i] for l in range(n)), zero) for i in range(n)), zero)
        coeffs[n - k] = -tr / k
    return coeffs


def newton_polygon_slopes(ordinates) -> List[Fraction]:
    """Slopes of the lower convex hull of ``(i, ordinates[i])``, repeated by segment length.

    ``INF`` ordinates (zero coefficients) are skipped.  Slopes come out in
    increasing order.
    """
    pts = [(i, v) for i, v in enumerate(ordinates) if v != INF]
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y2 - y1, x2 - x1)
        slopes.extend([s] * (x2 - x1))
    return slopes


def _as_int(x):
    return int(x) if isinstance(x, Fraction) and x.denominator == 1 else x


def _valuation_fn(g, field):
    if field.archimedean:
        raise DomainMismatchError("Newton polygons need a nonarchimedean field")
    if not field.accepts(g.domain):
        raise DomainMismatchError(f"field {field} cannot view {g.domain!r} entries")
    if isinstance(g.domain, LaurentDomain):
        return lambda x: x.valuation()
    return lambda x: RATIONAL.valuation(x, field.p)


def eigenvalue_valuation_slopes(g: SLMatrix, field: FieldDescriptor) -> List[Fraction]:
    """``-valuation`` of each eigenvalue of ``g`` (with multiplicity), descending."""
    val = _valuation_fn(g, field)
    ords = [val(c) for c in charpoly(g)]
    return sorted(newton_polygon_slopes(ords), reverse=True)


def lyapunov_newton_polygon(g: SLMatrix, field: FieldDescriptor) -> WeylVector:
    return WeylVector(tuple(_as_int(s) for s in eigenvalue_valuation_slopes(g, field)))


def matrix_bits(g: SLMatrix) -> int:
    return sum(g.domain.bit_size(x) for r in g.rows for x in r)


def _square_normalized(rows):
    n = len(rows)
    sq = [[math.fsum(rows[i][l] * rows[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
    s = max(abs(x) for r in sq for x in r)
    return [[x / s for x in r] for r in sq], math.log(s)


def _archimedean_power_mus(g: SLMatrix, k_max: int):
    """``mu(g^(2^k))`` for ``k = 0..k_max`` without overflow.

    ``x_1 + ... + x_i`` is the log of the top singular value of the i-th
    compound matrix, and compounds of powers are powers of compounds, so only
    top singular values of rescaled matrices are ever needed.
    """
    rows = g.float_rows()
    n = g.n
    partial = [[0.0] * (k_max + 1) for _ in range(n + 1)]
    for i in range(1, n):
        m = compound(rows, i)
        s = max(abs(x) for r in m for x in r)
        m = [[x / s for x in r] for r in m]
        log_scale = math.log(s)
        for k in range(k_max + 1):
            if k:
                m, ls = _square_normalized(m)
                log_scale = 2 * log_scale + ls
            partial[i][k] = log_scale + top_log_singular_value(m)
    out = []
    for k in range(k_max + 1):
        xs = [partial[i][k] - partial[i - 1][k] for i in range(1, n + 1)]
        mean = math.fsum(xs) / n
        xs = sorted((x - mean for x in xs), reverse=True)
        out.append(xs)
    return out


def lyapunov_power_limit(g: SLMatrix, field: FieldDescriptor, k_max: int = 12,
                         max_bits: int = MAX_MATRIX_BITS) -> LyapunovEstimate:
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    if field.archimedean:
        mus = _archimedean_power_mus(g, k_max)
        ratios = [[x / 2 ** k for x in xs] for k, xs in enumerate(mus)]
        inc = [(a - b) / 2 ** (k_max - 1) for a, b in zip(mus[k_max], mus[k_max - 1])]
        mean = math.fsum(inc) / len(inc)
        value = WeylVector(tuple(sorted((x - mean for x in inc), reverse=True)))
        ratio = WeylVector(tuple(ratios[k_max]))
        defects = [chamber_norm([a - b for a, b in zip(r, value.coords)]) for r in ratios]
        return LyapunovEstimate(value, ratio, defects, k_max)

    reference = lyapunov_newton_polygon(g, field)
    power = g
    mus = [cartan_projection(power, field)]
    for k in range(1, k_max + 1):
        power = power @ power
        bits = matrix_bits(power)
        if bits > max_bits:
            raise EntrySizeError(
                f"g^(2^{k}) needs {bits} bits (cap {max_bits}); use lyapunov_newton_polygon instead"
            )
        mus.append(cartan_projection(power, field))
    half = 2 ** (k_max - 1)
    value = WeylVector(tuple(_as_int(Fraction(a - b, half)) for a, b in zip(mus[k_max], mus[k_max - 1])))
    ratio = WeylVector(tuple(_as_int(Fraction(x, 2 ** k_max)) for x in mus[k_max]))
    defects = [
        chamber_norm([Fraction(x, 2 ** k) - r for x, r in zip(mu.coords, reference.coords)])
        for k, mu in enumerate(mus)
    ]
    return LyapunovEstimate(value, ratio, defects, k_max)


def eigenvalue_modulus_census(g: SLMatrix, field: FieldDescriptor) -> SpectralCensus:
    if field.archimedean:
        if isinstance(g.domain, LaurentDomain):
            raise DomainMismatchError("Laurent entries have no real value")
        try:
            eig = np.linalg.eigvals(np.array(g.float_rows(), dtype=float))
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"eigenvalue iteration failed: {exc}") from exc
        logs = np.log(np.abs(eig))
        n_eq = int(np.sum(np.abs(logs) <= UNIT_CIRCLE_TOL))
        n_gt = int(np.sum(logs > UNIT_CIRCLE_TOL))
        return SpectralCensus(n_gt, n_eq, g.n - n_gt - n_eq)
    slopes = eigenvalue_valuation_slopes(g, field)
    return SpectralCensus(
        sum(1 for s in slopes if s > 0), sum(1 for s in slopes if s == 0), sum(1 for s in slopes if s < 0)
    )
