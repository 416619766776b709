"""Component census and ball-scale properness tests on corank-one homogeneous spaces.

Two scenarios are supported: SL_n / SL_{n-1}, where the walls are the
coordinate slices ``x_i = 0`` of the chamber, and (G x G) / diagonal for
G = SL_2, where the wall is the diagonal of the quarter plane of scalar pairs.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .cartan import ARCH_TOL, PairMu, WeylVector, cartan_projection
from .errors import DimensionMismatchError, GroupSpecError
from .groups import Ball, EnumConfig, element_order, generate_ball, max_elements_from_env
from .matrices import GeneratorSet, SLMatrix, evaluate_word, pair_group
from .scalars import FieldDescriptor, LaurentDomain, LaurentPoly

EMPIRICALLY_PROPER = "EMPIRICALLY_PROPER"
VIOLATION = "VIOLATION"
INCONCLUSIVE = "INCONCLUSIVE"
ADMISSIBLE = "ADMISSIBLE"
NOT_ADMISSIBLE = "NOT_ADMISSIBLE"

ON_WALL = "OnWall"
C_PLUS = "C_plus"
C_MINUS = "C_minus"

SCALE_NOTE = "finite-ball evidence only: a finite ball can refute but never prove properness"


@dataclass(frozen=True)
class Scenario:
    """``kind`` is ``"sln"`` (SL_n / SL_{n-1}) or ``"double"`` ((SL_2 x SL_2) / diagonal)."""

    kind: str
    n: int = 2

    def __post_init__(self):
        if self.kind not in ("sln", "double"):
            raise ValueError(f"unknown scenario {self.kind!r}")
        if self.n < 2:
            raise ValueError("n must be at least 2")

    @classmethod
    def sln(cls, n: int) -> "Scenario":
        return cls("sln", n)

    @classmethod
    def double_rank_one(cls) -> "Scenario":
        return cls("double", 2)

    def components(self) -> List[str]:
        if self.kind == "double":
            return [C_PLUS, C_MINUS]
        return [f"C_{i}" for i in range(1, self.n)]

    def __str__(self):
        return f"SL_{self.n}/SL_{self.n - 1}" if self.kind == "sln" else "(SL_2 x SL_2)/diagonal"


def scenario_for(gens: GeneratorSet) -> Scenario:
    if gens.is_pair:
        if gens.n != 2:
            raise GroupSpecError("pair scenarios are implemented for SL_2 x SL_2 only")
        return Scenario.double_rank_one()
    return Scenario.sln(gens.n)


def _is_zero(x) -> bool:
    return abs(x) <= ARCH_TOL if isinstance(x, float) else x == 0


def _check_shape(x, s: Scenario):
    if s.kind == "double":
        if not isinstance(x, PairMu) or x.left.n != 2:
            raise DimensionMismatchError("the double scenario needs a pair of SL_2 Cartan projections")
    elif not isinstance(x, WeylVector) or x.n != s.n:
        raise DimensionMismatchError(f"{s} needs a Weyl vector with {s.n} coordinates")


def classify_component(x, s: Scenario) -> str:
    _check_shape(x, s)
    if s.kind == "double":
        u, v = x.scalars
        if _is_zero(v - u):
            return ON_WALL
        return C_PLUS if v > u else C_MINUS
    if any(_is_zero(c) for c in x.coords):
        return ON_WALL
    return f"C_{sum(1 for c in x.coords if c > 0)}"


def iota_label(label: str, s: Scenario) -> str:
    if s.kind == "double" or label == ON_WALL:
        return label
    return f"C_{s.n - int(label[2:])}"


def margin(x, s: Scenario):
    """``min |x_i|`` (SL_n) or ``|u - v|`` (pairs); zero exactly on the walls.

    For SL_n the Euclidean distance to the walls lies between
    ``sqrt(n/(n-1)) * margin`` and ``2 * sqrt(2) * margin``.
    """
    _check_shape(x, s)
    if s.kind == "double":
        u, v = x.scalars
        return abs(u - v)
    return min(abs(c) for c in x.coords)


# --- per-element rows --------------------------------------------------------


@dataclass
class MarginRow:
    key: bytes
    word: str
    length: int
    mu: object
    norm: float
    margin: object
    label: str
    is_identity: bool = False


def _mu_chunk(elements, field):
    return [cartan_projection(g, field) for g in elements]


def compute_mus(elements: Sequence, field: FieldDescriptor, workers: int = 1) -> list:
    """Cartan projections in input order; splitting across processes does not change results."""
    elements = list(elements)
    if workers <= 1 or len(elements) < 4 * workers:
        return _mu_chunk(elements, field)
    size = -(-len(elements) // workers)
    chunks = [elements[i:i + size] for i in range(0, len(elements), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_mu_chunk, chunks, [field] * len(chunks))
        return [m for part in parts for m in part]


def margin_rows(ball: Ball, s: Scenario, field: Optional[FieldDescriptor] = None, workers: int = 1) -> List[MarginRow]:
    field = field or ball.gens.field
    entries = list(ball)
    mus = compute_mus([e.element for e in entries], field, workers)
    labels = ball.gens.labels
    rows = []
    for e, mu in zip(entries, mus):
        rows.append(MarginRow(
            key=e.element.key(),
            word=e.word.format(labels),
            length=e.length,
            mu=mu,
            norm=mu.norm(),
            margin=margin(mu, s),
            label=classify_component(mu, s),
            is_identity=e.length == 0,
        ))
    return rows


# --- Theorem-1.2-style component check ----------------------------------------


@dataclass
class ComponentCheck:
    component: Optional[str]
    iota_component: Optional[str]
    iota_invariant: Optional[bool]
    exceptions: List[MarginRow]
    budget_norm: float
    passed: bool


def _percentile(values, q):
    return float(np.percentile(np.asarray(values, dtype=float), q)) if values else 0.0


def theorem12_check(rows_or_ball, s: Scenario, field=None, budget_percentile: float = 10.0) -> ComponentCheck:
    """Pick the most populated component C; exceptions are elements outside C u iota(C).

    The identity is never an exception.  The check passes when every
    exception has norm at most the given percentile of all ball norms.
    Whether the group is virtually cyclic is not decided here; only whether
    iota(C) = C is reported.
    """
    rows = margin_rows(rows_or_ball, s, field) if isinstance(rows_or_ball, Ball) else rows_or_ball
    counts: Dict[str, int] = {c: 0 for c in s.components()}
    for r in rows:
        if not r.is_identity and r.label != ON_WALL:
            counts[r.label] += 1
    budget = _percentile([r.norm for r in rows], budget_percentile)
    if not any(counts.values()):
        return ComponentCheck(None, None, None, [r for r in rows if not r.is_identity], budget, False)
    # ties go to the lowest-indexed component for determinism
    comp = max(s.components(), key=lambda c: counts[c])
    icomp = iota_label(comp, s)
    exceptions = [r for r in rows if not r.is_identity and r.label not in (comp, icomp)]
    passed = all(r.norm <= budget for r in exceptions)
    return ComponentCheck(comp, icomp, comp == icomp, exceptions, budget, passed)


# --- properness report -------------------------------------------------------


@dataclass
class MarginReport:
    scenario: Scenario
    field: FieldDescriptor
    radius: int
    rows: List[MarginRow]
    census: Dict[str, int]
    thresholds: List[dict]
    verdict: str
    witnesses: List[MarginRow]
    component_check: ComponentCheck
    orientation: Optional[str] = None
    notes: List[str] = dc_field(default_factory=list)


def default_thresholds(rows: Sequence[MarginRow], count: int = 4) -> List[float]:
    norms = sorted({round(r.norm, 9) for r in rows if not r.is_identity and r.norm > 0})
    if not norms:
        return [0.0]
    picks = sorted({norms[(len(norms) - 1) * i // count] for i in range(count)})
    return picks


def properness_report(ball: Ball, s: Scenario, thresholds: Optional[Sequence[float]] = None,
                      field: Optional[FieldDescriptor] = None, workers: int = 1,
                      rows: Optional[List[MarginRow]] = None) -> MarginReport:
    field = field or ball.gens.field
    if rows is None:
        rows = margin_rows(ball, s, field, workers)
    ts = sorted(float(t) for t in (thresholds if thresholds else default_thresholds(rows)))
    census = {c: 0 for c in s.components() + [ON_WALL]}
    for r in rows:
        census[r.label] += 1

    table = []
    for t in ts:
        eligible = [r for r in rows if not r.is_identity and r.norm >= t]
        m = min((r.margin for r in eligible), default=None)
        table.append({"threshold": t, "count": len(eligible), "min_margin": m})

    witnesses = [r for r in rows if not r.is_identity and r.norm >= ts[0] and _is_zero(r.margin)]
    minima = [row["min_margin"] for row in table]
    if witnesses:
        verdict = VIOLATION
    elif (len(minima) >= 2 and None not in minima
          and all(a <= b for a, b in zip(minima, minima[1:]))
          and minima[-1] > minima[0]):
        verdict = EMPIRICALLY_PROPER
    else:
        verdict = INCONCLUSIVE

    check = theorem12_check(rows, s)
    orientation = None
    if s.kind == "double":
        plus, minus = census[C_PLUS], census[C_MINUS]
        orientation = "C_minus (left dominates)" if minus > plus else "C_plus (right dominates)" if plus > minus else "balanced"
    return MarginReport(s, field, ball.radius, rows, census, table, verdict, witnesses, check, orientation, [SCALE_NOTE])


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def report_csv(report: MarginReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["word", "length", "mu", "norm", "margin", "label"])
    for r in report.rows:
        w.writerow([r.word, r.length, r.mu.format(), _fmt(r.norm), _fmt(r.margin), r.label])
    return buf.getvalue()


def _json_num(x):
    if x is None or isinstance(x, int):
        return x
    return float(f"{float(x):.12g}")


def report_summary(report: MarginReport) -> dict:
    chk = report.component_check
    return {
        "scenario": str(report.scenario),
        "field": str(report.field),
        "radius": report.radius,
        "ball_size": len(report.rows),
        "census": report.census,
        "thresholds": [
            {"threshold": _json_num(t["threshold"]), "count": t["count"], "min_margin": _json_num(t["min_margin"])}
            for t in report.thresholds
        ],
        "verdict": report.verdict,
        "witnesses": [
            {"word": r.word, "mu": r.mu.format(), "norm": _json_num(r.norm), "margin": _json_num(r.margin)}
            for r in report.witnesses
        ],
        "component_check": {
            "component": chk.component,
            "iota_component": chk.iota_component,
            "iota_invariant": chk.iota_invariant,
            "exception_count": len(chk.exceptions),
            "exceptions": [r.word for r in chk.exceptions],
            "budget_norm": _json_num(chk.budget_norm),
            "passed": chk.passed,
        },
        "orientation": report.orientation,
        "notes": report.notes,
    }


# --- graph groups ------------------------------------------------------------


def phi_generator_set(gens0: GeneratorSet, phi_images: Sequence[SLMatrix]) -> GeneratorSet:
    return GeneratorSet(gens0.field, gens0.n, tuple(phi_images), gens0.labels)


def phi_images(ball0: Ball, phi_gens: GeneratorSet) -> Dict[bytes, SLMatrix]:
    """Apply the homomorphism letterwise to each stored shortest word."""
    if len(phi_gens) != len(ball0.gens):
        raise GroupSpecError("phi needs one image per generator")
    return {key: evaluate_word(e.word, phi_gens) for key, e in ball0.elements.items()}


def graph_group(gens0: GeneratorSet, phi_gens: GeneratorSet) -> GeneratorSet:
    """Generators ``(gamma_i, phi(gamma_i))`` of the graph of phi."""
    return pair_group(gens0, phi_gens)


@dataclass
class GraphViolation:
    word: str
    length: int
    mu_gamma: object
    mu_phi: object


@dataclass
class GraphCheck:
    radius: int
    table: List[dict]
    admissible: bool


def graph_admissibility(ball0: Ball, images: Dict[bytes, SLMatrix], R_grid: Sequence[float],
                        field: Optional[FieldDescriptor] = None) -> GraphCheck:
    """Elements with ``mu(phi(g)) >= mu(g) - R`` for each R in the grid.

    Admissible at this scale when, for every R, violations stop at some word
    length strictly below the ball radius.
    """
    field = field or ball0.gens.field
    if set(images) != set(ball0.elements):
        raise GroupSpecError("phi images must be indexed by exactly the ball's elements")
    entries = [e for e in ball0 if e.length > 0]
    mus = compute_mus([e.element for e in entries], field)
    phis = compute_mus([images[e.element.key()] for e in entries], field)
    labels = ball0.gens.labels
    table = []
    admissible = True
    for R in R_grid:
        viol = [
            GraphViolation(e.word.format(labels), e.length, m.scalar, f.scalar)
            for e, m, f in zip(entries, mus, phis)
            if f.scalar >= m.scalar - R
        ]
        max_len = max((v.length for v in viol), default=0)
        confined = max_len < ball0.radius
        admissible &= confined
        table.append({"R": R, "violations": viol, "count": len(viol), "max_length": max_len,
                      "confined": confined, "total": len(entries)})
    return GraphCheck(ball0.radius, table, admissible)


# --- torsion example over F_p((t)) --------------------------------------------


def unipotent(p: int, n: int) -> SLMatrix:
    """``(1, t^-n; 0, 1)`` over F_p[t, 1/t]."""
    dom = LaurentDomain(p)
    return SLMatrix([[dom.one, LaurentPoly.monomial(p, -n)], [dom.zero, dom.one]], dom)


def default_pairs(n_set: Sequence[int]):
    out = []
    for n in sorted(set(n_set)):
        out.append((n, 2 * n))
        out.append((2 * n, n))
    return out


def torsion_generators(p: int, pairs: Sequence[tuple]) -> GeneratorSet:
    labels = []
    for a, b in pairs:
        labels.append(f"u{a}" if b == 2 * a else f"v{b}" if a == 2 * b else f"w{a}_{b}")
    field = FieldDescriptor.laurent(p)
    left = GeneratorSet(field, 2, tuple(unipotent(p, a) for a, _ in pairs), tuple(labels))
    right = GeneratorSet(field, 2, tuple(unipotent(p, b) for _, b in pairs), tuple(labels))
    return pair_group(left, right, labels)


DISCREPANCY = (
    "DISCREPANCY: the generators are pairs of commuting unipotents, so products such as "
    "(g_n, g_2n)*(g_2n, g_n) = (g_n g_2n, g_n g_2n) lie in the diagonal; margin-0 elements of "
    "unbounded norm contradict the claim that this group acts properly discontinuously"
)


@dataclass
class TorsionDemoResult:
    p: int
    pairs: List[tuple]
    gens: GeneratorSet
    ball: Ball
    power_checks: List[dict]
    all_order_p: bool
    order_failures: List[str]
    report: MarginReport
    diagonal_intersections: List[dict]
    wall_elements: List[str]
    component_norms: Dict[str, List[float]]
    discrepancy: Optional[str]


def torsion_demo(p: int, n_set: Sequence[int], radius: int, pairs: Optional[Sequence[tuple]] = None,
                 thresholds=None, workers: int = 1, max_elements: Optional[int] = None) -> TorsionDemoResult:
    pairs = list(pairs) if pairs else default_pairs(n_set)
    field = FieldDescriptor.laurent(p)
    gens = torsion_generators(p, pairs)

    exponents = sorted({e for pr in pairs for e in pr})
    power_checks = []
    for n in exponents:
        g = unipotent(p, n)
        for r in range(1, p):
            mu = cartan_projection(g ** r, field)
            power_checks.append({"n": n, "r": r, "mu": mu.format(), "scalar": mu.scalar, "ok": mu.scalar == 2 * n})

    cfg = EnumConfig(radius, max_elements or max_elements_from_env(), parallel=workers > 1, workers=workers)
    ball = generate_ball(gens, cfg)
    order_failures = [
        e.word.format(gens.labels) for e in ball
        if e.length > 0 and element_order(e.element, p) != p
    ]
    s = Scenario.double_rank_one()
    report = properness_report(ball, s, thresholds, field, workers)

    rows_by_key = {r.key: r for r in report.rows}
    diagonal = []
    for e in ball:
        if e.length > 0 and e.element.is_diagonal():
            r = rows_by_key[e.element.key()]
            diagonal.append({"word": r.word, "mu": r.mu.format(), "norm": r.norm,
                             "left_equals_right": e.element.left == e.element.right})
    walls = [r.word for r in report.rows if not r.is_identity and r.margin == 0]
    comp_norms = {c: sorted({round(r.norm, 12) for r in report.rows if r.label == c}) for c in (C_PLUS, C_MINUS)}
    discrepancy = DISCREPANCY if (diagonal or report.verdict == VIOLATION) else None
    if discrepancy:
        report.notes.append(discrepancy)
    return TorsionDemoResult(p, pairs, gens, ball, power_checks, not order_failures, order_failures,
                             report, diagonal, walls, comp_norms, discrepancy)


# --- quadric x1 x4 - x2 x3 -----------------------------------------------------


def quadric_form(u) -> object:
    (x1, x2), (x3, x4) = u
    return x1 * x4 - x2 * x3


def quadric_action(g1: SLMatrix, g2: SLMatrix, u):
    """``(g1, g2) . u = g1 u g2^-1`` on 2x2 matrices, i.e. on 4-vectors ``(x1, x2, x3, x4)``."""
    if g1.n != 2 or g2.n != 2:
        raise DimensionMismatchError("the quadric action uses SL_2 x SL_2")
    h = g2.inverse().rows
    a = g1.rows
    zero = g1.domain.zero
    au = [[sum((a[i][k] * u[k][j] for k in range(2)), zero) for j in range(2)] for i in range(2)]
    return [[sum((au[i][k] * h[k][j] for k in range(2)), zero) for j in range(2)] for i in range(2)]


def quadric_check(g1: SLMatrix, g2: SLMatrix, u) -> bool:
    if g1.domain is not g2.domain:
        raise DimensionMismatchError("g1 and g2 must share a coefficient domain")
    u = [[g1.domain.coerce(x) for x in row] for row in u]
    return quadric_form(quadric_action(g1, g2, u)) == quadric_form(u)
