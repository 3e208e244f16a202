"""The Ollivier-Ricci idleness function p -> kappa_p(x, y) as exact piecewise-linear data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactnum import RationalLike, as_rational
from .graphkit import Graph, GraphError, girth
from .transport import (
    check_slackness,
    dual_potential,
    edge_measures,
    floor_potential,
    has_diagonal_property,
    lipschitz_check,
    maximize_over_lipschitz,
    normalize_plan,
    w1_edge_profile,
    w1_primal,
)

JS = (-1, 0, 1)


@dataclass(frozen=True)
class Line:
    slope: Fraction
    intercept: Fraction

    def __call__(self, p: RationalLike) -> Fraction:
        return self.slope * as_rational(p) + self.intercept

    def intersect(self, other: "Line") -> Optional[Fraction]:
        if self.slope == other.slope:
            return None
        return (other.intercept - self.intercept) / (self.slope - other.slope)


@dataclass(frozen=True)
class Piece:
    lo: Fraction
    hi: Fraction
    line: Line


@dataclass(frozen=True)
class IdlenessFunction:
    """Concave piecewise-linear ``p -> kappa_p(x, y)`` on [0, 1].

    ``edge`` is oriented so that ``d_x >= d_y``.  ``c`` holds
    ``(c_-1, c_0, c_1)`` when the function was built from them, and is
    ``None`` for functions assembled from a closed formula.
    """

    edge: Optional[Tuple[int, int]]
    d_x: int
    d_y: int
    c: Optional[Tuple[int, int, int]]
    pieces: Tuple[Piece, ...]

    def __post_init__(self):
        ps = self.pieces
        if not (ps and ps[0].lo == 0 and ps[-1].hi == 1):
            raise ValueError("pieces must cover [0, 1]")
        for a, b in zip(ps, ps[1:]):
            if a.hi != b.lo:
                raise ValueError("pieces must be contiguous")
            if a.line(a.hi) != b.line(b.lo):
                raise ValueError("discontinuity at a breakpoint")
            if a.line.slope <= b.line.slope:
                raise ValueError("slopes must strictly decrease")
        if any(q.lo >= q.hi for q in ps):
            raise ValueError("empty piece")
        if len(ps) > 3:
            raise ValueError("more than three linear parts")
        if ps[-1].line(1) != 0:
            raise ValueError("kappa_1 must vanish")
        if self.c is not None:
            cm, c0, c1 = self.c
            if not c1 >= c0 >= cm:
                raise ValueError("c_1 >= c_0 >= c_-1 violated")
            g = math.gcd(self.d_x, self.d_y)
            if any(cj % g for cj in self.c):
                raise ValueError("gcd(d_x, d_y) must divide each c_j")

    def __call__(self, p: RationalLike) -> Fraction:
        p = as_rational(p)
        if not 0 <= p <= 1:
            raise ValueError(f"idleness {p} outside [0, 1]")
        for piece in self.pieces:
            if p <= piece.hi:
                return piece.line(p)
        raise AssertionError("unreachable")

    def piece_index(self, p: RationalLike) -> int:
        p = as_rational(p)
        for k, piece in enumerate(self.pieces):
            if p <= piece.hi:
                return k
        raise ValueError(f"idleness {p} outside [0, 1]")

    @property
    def breakpoints(self) -> Tuple[Fraction, ...]:
        return tuple(q.hi for q in self.pieces[:-1])

    def same_function(self, other: "IdlenessFunction") -> bool:
        return [(q.lo, q.hi, q.line) for q in self.pieces] == [(q.lo, q.hi, q.line) for q in other.pieces]


@dataclass(frozen=True)
class EdgeReport:
    idleness: IdlenessFunction
    kappa0: Fraction
    kappa_lly: Fraction
    bone_idle: bool
    three_piece: bool
    theorem_checks: Dict[str, Optional[bool]] = field(default_factory=dict)

    @property
    def checks_pass(self) -> bool:
        return all(v is not False for v in self.theorem_checks.values())


def _require_edge(g: Graph, x: int, y: int) -> None:
    for v in (x, y):
        if not 0 <= v < g.vertex_count:
            raise GraphError(f"vertex {v} out of range")
    if not g.adjacent(x, y):
        raise GraphError(f"({x},{y}) is not an edge")


def canonical_orientation(g: Graph, x: int, y: int) -> Tuple[int, int]:
    """Orient so the first endpoint has the larger degree; ties go to the smaller index."""
    _require_edge(g, x, y)
    dx, dy = g.degree(x), g.degree(y)
    if dx > dy or (dx == dy and x < y):
        return x, y
    return y, x


def f_objective(g: Graph, x: int, y: int) -> Dict[int, int]:
    """Coefficients of ``F(phi) = d_y sum_{z~x, z!=y} phi(z) - d_x sum_{z~y, z!=x} phi(z)``."""
    _require_edge(g, x, y)
    dx, dy = g.degree(x), g.degree(y)
    support = sorted({x, y} | set(g.neighbors(x)) | set(g.neighbors(y)))
    coeffs = dict.fromkeys(support, 0)
    for z in g.neighbors(x):
        if z != y:
            coeffs[z] += dy
    for z in g.neighbors(y):
        if z != x:
            coeffs[z] -= dx
    return coeffs


def compute_c(g: Graph, x: int, y: int, j: int) -> int:
    """``max F(phi)`` over 1-Lipschitz ``phi`` with ``phi(x) = j``, ``phi(y) = 0``.

    Solved as an LP over the difference-constraint polytope; its vertex
    optimum is integral, which is checked.
    """
    if j not in JS:
        raise ValueError("j must be -1, 0 or 1")
    coeffs = f_objective(g, x, y)
    value, phi = maximize_over_lipschitz(g, coeffs, coeffs, {x: j, y: 0})
    if value.denominator != 1 or not phi.is_integral():
        raise AssertionError(f"non-integral LP vertex for edge ({x},{y}), j={j}: {phi.values}")
    return int(value)


def line_fj(j: int, c_j: int, d_x: int, d_y: int) -> Line:
    """``f_j(p) = (p - (1-p)/d_y) j + (1-p) c_j / (d_x d_y)``."""
    if j not in JS:
        raise ValueError("j must be -1, 0 or 1")
    share = Fraction(c_j, d_x * d_y)
    return Line(j * (1 + Fraction(1, d_y)) - share, Fraction(-j, d_y) + share)


def _upper_envelope(lines: Sequence[Line]) -> List[Piece]:
    """Exact upper envelope of ``lines`` on [0, 1], collinear pieces merged."""
    cuts = {Fraction(0), Fraction(1)}
    for a in range(len(lines)):
        for b in range(a + 1, len(lines)):
            p = lines[a].intersect(lines[b])
            if p is not None and 0 < p < 1:
                cuts.add(p)
    cuts = sorted(cuts)
    pieces: List[Piece] = []
    for lo, hi in zip(cuts, cuts[1:]):
        mid = (lo + hi) / 2
        top = max(lines, key=lambda ln: (ln(mid), ln.slope))
        if pieces and pieces[-1].line == top:
            pieces[-1] = Piece(pieces[-1].lo, hi, top)
        else:
            pieces.append(Piece(lo, hi, top))
    return pieces


def _kappa_pieces(envelope: Sequence[Piece]) -> Tuple[Piece, ...]:
    return tuple(Piece(q.lo, q.hi, Line(-q.line.slope, 1 - q.line.intercept)) for q in envelope)


def idleness_function(g: Graph, x: int, y: int) -> IdlenessFunction:
    """``kappa_p = 1 - max_j f_j(p)`` with exact breakpoints."""
    x, y = canonical_orientation(g, x, y)
    dx, dy = g.degree(x), g.degree(y)
    c = tuple(compute_c(g, x, y, j) for j in JS)
    lines = [line_fj(j, cj, dx, dy) for j, cj in zip(JS, c)]
    return IdlenessFunction((x, y), dx, dy, c, _kappa_pieces(_upper_envelope(lines)))


def kappa_zero(fn: IdlenessFunction) -> Fraction:
    return fn.pieces[0].line(0)


def kappa_lly(fn: IdlenessFunction) -> Fraction:
    """Lin-Lu-Yau curvature: minus the slope of the last linear part."""
    return -fn.pieces[-1].line.slope


def _two_part(d_x: int, kappa0: Fraction, kappa: Fraction, edge, d_y: int) -> IdlenessFunction:
    knee = Fraction(1, d_x + 1)
    head = Line(d_x * kappa - (d_x + 1) * kappa0, kappa0)
    tail = Line(-kappa, kappa)
    if head == tail:
        pieces = (Piece(Fraction(0), Fraction(1), tail),)
    else:
        pieces = (Piece(Fraction(0), knee, head), Piece(knee, Fraction(1), tail))
    return IdlenessFunction(edge, d_x, d_y, None, pieces)


def closed_form_divisible(g: Graph, x: int, y: int) -> IdlenessFunction:
    """Two-part closed form from ``kappa_0`` and ``kappa`` when ``d_y | d_x``.

    Both curvatures come from the primal transport oracle, so this is an
    independent route to :func:`idleness_function`.
    """
    x, y = canonical_orientation(g, x, y)
    dx, dy = g.degree(x), g.degree(y)
    if dx % dy:
        raise ValueError(f"degree {dy} does not divide {dx}")
    w0, _ = w1_primal(g, *edge_measures(g, x, y, 0))
    knee = Fraction(1, dx + 1)
    wk, _ = w1_primal(g, *edge_measures(g, x, y, knee))
    kappa0 = 1 - w0
    kappa = (1 - wk) / (1 - knee)
    return _two_part(dx, kappa0, kappa, (x, y), dy)


def product_idleness(fn_g: IdlenessFunction, d_g: int, d_h: int) -> IdlenessFunction:
    """Idleness function of ``((x1, y), (x2, y))`` in ``G x H`` for regular factors."""
    if d_g < 1 or d_h < 1:
        raise ValueError("degrees must be positive")
    d = d_g + d_h
    scale = Fraction(d_g, d)
    k0, k = kappa_zero(fn_g), kappa_lly(fn_g)
    knee = Fraction(1, d + 1)
    # on [0, knee] kappa^G_p is still on its first part, since knee <= 1/(d_g + 1)
    assert fn_g.pieces[0].hi >= knee, "source function is not from a regular graph"
    first = fn_g.pieces[0].line
    head = Line(scale * first.slope + d_g * d_h * (k - k0) / d, scale * first.intercept)
    tail = Line(-scale * k, scale * k)
    if head == tail:
        pieces = (Piece(Fraction(0), Fraction(1), tail),)
    else:
        pieces = (Piece(Fraction(0), knee, head), Piece(knee, Fraction(1), tail))
    return IdlenessFunction(None, d, d, None, pieces)


def _is_k_form(p: Fraction, lcm: int) -> bool:
    # p = K / (lcm + K)  <=>  K = p * lcm / (1 - p)
    k = p * lcm / (1 - p)
    return k.denominator == 1 and k > 0


def verify_structure(fn: IdlenessFunction) -> Dict[str, Optional[bool]]:
    """Exact checks of the structure theorems; ``None`` marks a check that does not apply."""
    dx, dy = fn.d_x, fn.d_y
    lcm = dx * dy // math.gcd(dx, dy)
    head_end = Fraction(1, lcm + 1)
    tail_start = Fraction(1, max(dx, dy) + 1)
    bps = fn.breakpoints
    k0, k = kappa_zero(fn), kappa_lly(fn)
    last = fn.pieces[-1]
    checks: Dict[str, Optional[bool]] = {}
    checks["linear_first_part"] = not any(0 < b < head_end for b in bps)
    checks["linear_last_part"] = not any(tail_start < b < 1 for b in bps)
    checks["tail_is_scaled_lly"] = last.lo <= tail_start and last.line == Line(-k, k)
    slopes = [q.line.slope for q in fn.pieces]
    checks["concave_at_most_3"] = len(fn.pieces) <= 3 and all(a > b for a, b in zip(slopes, slopes[1:]))
    checks["lly_bounds"] = k0 <= k <= k0 + Fraction(2, max(dx, dy))
    checks["breakpoint_form"] = all(_is_k_form(b, lcm) for b in bps)
    checks["equal_degree_two_parts"] = len(fn.pieces) <= 2 if dx == dy else None
    if dx == dy:
        d = dx
        c_gap = (k - k0) * d
        checks["regular_identities"] = (
            k == 2 * fn(Fraction(1, 2))
            and k == Fraction(d + 1, d) * fn(Fraction(1, d + 1))
            and c_gap in (0, 1, 2)
        )
    else:
        checks["regular_identities"] = None
    if fn.c is not None:
        cm, c0, c1 = fn.c
        g = math.gcd(dx, dy)
        checks["c_ordering"] = c1 >= c0 >= cm and 2 * c0 >= cm + c1
        checks["c_divisible"] = all(cj % g == 0 for cj in fn.c)
        checks["lly_from_c1"] = k == Fraction(dx * dy + dx - c1, dx * dy)
    return checks


def edge_report(g: Graph, x: int, y: int) -> EdgeReport:
    fn = idleness_function(g, x, y)
    k0, k = kappa_zero(fn), kappa_lly(fn)
    return EdgeReport(
        idleness=fn,
        kappa0=k0,
        kappa_lly=k,
        bone_idle=k0 == 0 and k == 0,
        three_piece=len(fn.pieces) == 3,
        theorem_checks=verify_structure(fn),
    )


@dataclass(frozen=True)
class ScanSummary:
    edge_count: int
    bone_idle: bool
    open_question_hits: Tuple[Tuple[int, int], ...]
    girth: Optional[int]
    regular_degree: Optional[int]
    checks_pass: bool


def scan(g: Graph) -> Tuple[List[EdgeReport], ScanSummary]:
    """Report every edge (sorted by endpoints) plus graph-level flags.

    An edge with ``kappa > 0`` and ``kappa_0 < 0`` answers an open question
    and is listed in ``open_question_hits``.
    """
    reports = [edge_report(g, u, v) for u, v in g.edges()]
    hits = tuple(
        tuple(sorted(r.idleness.edge)) for r in reports if r.kappa_lly > 0 and r.kappa0 < 0
    )
    summary = ScanSummary(
        edge_count=len(reports),
        bone_idle=all(r.bone_idle for r in reports),
        open_question_hits=hits,
        girth=girth(g),
        regular_degree=g.regular_degree(),
        checks_pass=all(r.checks_pass for r in reports),
    )
    return reports, summary


ORACLE_CHECKS = (
    "oracle_equivalence",
    "strong_duality",
    "complementary_slackness",
    "integer_potential",
    "diagonal_plan",
    "unit_gap",
    "closed_form",
)


@dataclass(frozen=True)
class OracleReport:
    """Outcome of :func:`oracle_suite` for one edge.

    ``checks`` maps each name in ``ORACLE_CHECKS`` to ``True``, ``False`` or
    ``None`` (never applicable on the grid).  ``failures`` lists
    ``(check, p)`` for every exact mismatch, ``p`` being ``None`` for
    per-edge checks.
    """

    edge: Tuple[int, int]
    grid: Tuple[Fraction, ...]
    checks: Dict[str, Optional[bool]]
    failures: Tuple[Tuple[str, Optional[Fraction]], ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def default_grid(fn: IdlenessFunction, density: int = 12, offset: Fraction = Fraction(1, 1000)) -> Tuple[Fraction, ...]:
    """``k / density`` for ``k = 0..density`` plus every breakpoint and its ``+- offset`` neighbours."""
    if density < 1:
        raise ValueError("grid density must be positive")
    pts = {Fraction(k, density) for k in range(density + 1)}
    for b in fn.breakpoints:
        pts.update(q for q in (b - offset, b, b + offset) if 0 <= q <= 1)
    return tuple(sorted(pts))


def oracle_suite(
    g: Graph,
    x: int,
    y: int,
    grid: Optional[Sequence[RationalLike]] = None,
    fn: Optional[IdlenessFunction] = None,
) -> OracleReport:
    """Check the envelope against the primal transport oracle and the duality lemmas.

    At every ``p`` in ``grid``: ``1 - W1`` equals ``fn(p)``; primal and dual
    optima agree; the plan and potential are complementary; the floored
    potential is still optimal; the rerouted plan keeps ``pi(w, w) = mu1(w)``
    wherever ``mu1(w) <= mu2(w)``; and for ``p > 1/(d_x + 1)`` both the LP
    potential and its floor have ``phi(x) - phi(y) = 1``.  When ``d_y | d_x``
    the two-part closed form is compared once per edge.
    """
    if fn is None:
        fn = idleness_function(g, x, y)
    x, y = fn.edge
    ps = default_grid(fn) if grid is None else tuple(sorted({as_rational(p) for p in grid}))
    knee = Fraction(1, fn.d_x + 1)
    failures: List[Tuple[str, Optional[Fraction]]] = []
    seen: Dict[str, Optional[bool]] = dict.fromkeys(ORACLE_CHECKS)

    def record(name: str, p: Optional[Fraction], ok: bool) -> None:
        seen[name] = bool(ok) and seen[name] is not False
        if not ok:
            failures.append((name, p))

    for p, (w, plan) in zip(ps, w1_edge_profile(g, x, y, ps)):
        mu1, mu2 = plan.source, plan.target
        record("oracle_equivalence", p, 1 - w == fn(p))
        value, phi = dual_potential(g, mu1, mu2)
        record("strong_duality", p, value == w == phi.dual_value(mu1, mu2))
        record("complementary_slackness", p, check_slackness(g, plan, phi))
        try:
            ip = floor_potential(phi, g)
            ok = ip.is_integral() and lipschitz_check(g, ip) and ip.dual_value(mu1, mu2) == w
        except AssertionError:
            ip, ok = None, False
        record("integer_potential", p, ok)
        try:
            ok = has_diagonal_property(normalize_plan(g, plan))
        except AssertionError:
            ok = False
        record("diagonal_plan", p, ok)
        if p > knee:
            gaps = [phi[x] - phi[y]] + ([] if ip is None else [ip[x] - ip[y]])
            record("unit_gap", p, all(gap == 1 for gap in gaps))
    if fn.d_x % fn.d_y == 0:
        record("closed_form", None, closed_form_divisible(g, x, y).same_function(fn))
    return OracleReport((x, y), ps, seen, tuple(failures))
