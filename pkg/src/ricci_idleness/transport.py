"""Lazy random-walk measures, exact W1 transport and Kantorovich potentials."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exactnum import (
    Constraint,
    LinearProgram,
    RationalLike,
    as_rational,
    ceil,
    floor,
    solve_lp,
    solve_lp_sequence,
)
from .graphkit import Graph, GraphError, distances_from


@dataclass(frozen=True)
class ProbMeasure:
    support: Tuple[Tuple[int, Fraction], ...]

    def __post_init__(self):
        support = tuple((int(v), as_rational(m)) for v, m in self.support)
        vertices = [v for v, _ in support]
        if vertices != sorted(set(vertices)):
            raise ValueError("support must be sorted with distinct vertices")
        if any(m <= 0 for _, m in support):
            raise ValueError("support masses must be strictly positive")
        if sum((m for _, m in support), Fraction(0)) != 1:
            raise ValueError("masses must sum to exactly 1")
        object.__setattr__(self, "support", support)

    @classmethod
    def from_masses(cls, masses: Mapping[int, RationalLike]) -> "ProbMeasure":
        return cls(tuple(sorted((v, as_rational(m)) for v, m in masses.items() if as_rational(m) != 0)))

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(v for v, _ in self.support)

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.support)

    def mass(self, v: int) -> Fraction:
        for w, m in self.support:
            if w == v:
                return m
        return Fraction(0)


@dataclass(frozen=True)
class TransportPlan:
    entries: Tuple[Tuple[int, int, Fraction], ...]
    source: ProbMeasure
    target: ProbMeasure

    def __post_init__(self):
        entries = tuple(sorted((int(u), int(v), as_rational(m)) for u, v, m in self.entries))
        if any(m <= 0 for _, _, m in entries):
            raise ValueError("plan masses must be strictly positive")
        if len({(u, v) for u, v, _ in entries}) != len(entries):
            raise ValueError("duplicate plan entry")
        rows: Dict[int, Fraction] = {}
        cols: Dict[int, Fraction] = {}
        for u, v, m in entries:
            rows[u] = rows.get(u, 0) + m
            cols[v] = cols.get(v, 0) + m
        if rows != self.source.as_dict() or cols != self.target.as_dict():
            raise ValueError("plan marginals do not match the measures")
        object.__setattr__(self, "entries", entries)

    def cost(self, g: Graph) -> Fraction:
        total = Fraction(0)
        for u, v, m in self.entries:
            total += m * _dist(g, u, v)
        return total

    def mass(self, u: int, v: int) -> Fraction:
        for a, b, m in self.entries:
            if (a, b) == (u, v):
                return m
        return Fraction(0)


@dataclass(frozen=True)
class Potential:
    values: Mapping[int, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "values", {int(k): as_rational(v) for k, v in sorted(self.values.items())})

    def __getitem__(self, v: int) -> Fraction:
        return self.values[v]

    @property
    def domain(self) -> Tuple[int, ...]:
        return tuple(self.values)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values.values())

    def dual_value(self, mu1: ProbMeasure, mu2: ProbMeasure) -> Fraction:
        """``sum phi(w) (mu1(w) - mu2(w))``."""
        total = Fraction(0)
        for v, m in mu1.support:
            total += self.values[v] * m
        for v, m in mu2.support:
            total -= self.values[v] * m
        return total


def _dist(g: Graph, u: int, v: int) -> int:
    d = distances_from(g, u)[v]
    if d is None:
        raise GraphError(f"vertices {u} and {v} lie in different components")
    return d


def vertex_measure(g: Graph, x: int, p: RationalLike) -> ProbMeasure:
    p = as_rational(p)
    if not 0 <= p <= 1:
        raise ValueError(f"idleness {p} outside [0, 1]")
    dx = g.degree(x)
    if dx == 0:
        raise GraphError(f"vertex {x} is isolated")
    masses = {}
    if p:
        masses[x] = p
    if p != 1:
        share = (1 - p) / dx
        for z in g.neighbors(x):
            masses[z] = share
    return ProbMeasure(tuple(sorted(masses.items())))


def edge_measures(g: Graph, x: int, y: int, p: RationalLike) -> Tuple[ProbMeasure, ProbMeasure]:
    return vertex_measure(g, x, p), vertex_measure(g, y, p)


def _transport_lp(g: Graph, mu1: ProbMeasure, mu2: ProbMeasure):
    src, dst = mu1.support, mu2.support
    pairs = [(u, v) for u, _ in src for v, _ in dst]
    cost = [_dist(g, u, v) for u, v in pairs]
    nd = len(dst)
    rows = []
    for i, (_, m) in enumerate(src):
        coeffs = [0] * len(pairs)
        for k in range(i * nd, (i + 1) * nd):
            coeffs[k] = 1
        rows.append(Constraint(coeffs, "=", m))
    for j, (_, m) in enumerate(dst):
        coeffs = [0] * len(pairs)
        for k in range(j, len(pairs), nd):
            coeffs[k] = 1
        rows.append(Constraint(coeffs, "=", m))
    return LinearProgram(cost, rows, maximize=False), pairs


def _plan_from(sol, pairs, mu1: ProbMeasure, mu2: ProbMeasure) -> Tuple[Fraction, TransportPlan]:
    assert sol.optimal, f"transport LP reported {sol.status}"
    entries = tuple((u, v, m) for (u, v), m in zip(pairs, sol.primal_point) if m)
    assert len(entries) <= len(mu1.support) + len(mu2.support) - 1, "plan is not a basic solution"
    return sol.value, TransportPlan(entries, mu1, mu2)


def w1_primal(g: Graph, mu1: ProbMeasure, mu2: ProbMeasure) -> Tuple[Fraction, TransportPlan]:
    """Exact W1 by the transport LP; returns the optimum and a vertex plan."""
    lp, pairs = _transport_lp(g, mu1, mu2)
    return _plan_from(solve_lp(lp), pairs, mu1, mu2)


def w1_edge_profile(
    g: Graph, x: int, y: int, ps: Sequence[RationalLike]
) -> List[Tuple[Fraction, TransportPlan]]:
    """``w1_primal`` of the edge measures at every idleness in ``ps``.

    For ``0 < p < 1`` all transport LPs of one edge share their matrix and
    costs, so they are solved as one warm-started sequence.
    """
    ps = [as_rational(p) for p in ps]
    out: List = [None] * len(ps)
    inner = [k for k, p in enumerate(ps) if 0 < p < 1]
    for k, p in enumerate(ps):
        if not 0 < p < 1:
            out[k] = w1_primal(g, *edge_measures(g, x, y, p))
    if inner:
        measures = [edge_measures(g, x, y, ps[k]) for k in inner]
        lp, pairs = _transport_lp(g, *measures[0])
        rhs_list = [[m for _, m in a.support] + [m for _, m in b.support] for a, b in measures]
        for k, sol, (a, b) in zip(inner, solve_lp_sequence(lp, rhs_list), measures):
            out[k] = _plan_from(sol, pairs, a, b)
    return out


def essential_pairs(g: Graph, domain: Sequence[int]) -> List[Tuple[int, int]]:
    """Ordered pairs of ``domain`` whose Lipschitz constraint is not implied.

    ``phi(u) - phi(v) <= d(u, v)`` follows from the constraints through ``w``
    whenever some other ``w`` in the domain lies on a ``u``-``v`` geodesic.
    """
    dom = list(domain)
    dist = {u: distances_from(g, u) for u in dom}
    out = []
    for u in dom:
        du = dist[u]
        for v in dom:
            if u == v or du[v] is None:
                continue
            duv = du[v]
            if any(
                w != u and w != v and du[w] is not None and dist[w][v] is not None
                and du[w] + dist[w][v] == duv
                for w in dom
            ):
                continue
            out.append((u, v))
    return out


def maximize_over_lipschitz(
    g: Graph,
    domain: Iterable[int],
    objective: Mapping[int, RationalLike],
    pins: Mapping[int, RationalLike],
) -> Tuple[Fraction, Potential]:
    """Maximise ``sum objective[w] * phi(w)`` over 1-Lipschitz ``phi`` on ``domain``.

    ``pins`` fixes some values.  The difference constraints use host-graph
    distances.  Returns the optimum (including pinned terms) and a basic
    optimal potential.
    """
    dom = sorted(set(domain) | set(pins))
    pins = {v: as_rational(val) for v, val in pins.items()}
    free = [w for w in dom if w not in pins]
    index = {w: k for k, w in enumerate(free)}

    bounds = []
    for w in free:
        dw = distances_from(g, w)
        lo = hi = None
        for v, val in pins.items():
            if dw[v] is None:
                continue
            lo = val - dw[v] if lo is None else max(lo, val - dw[v])
            hi = val + dw[v] if hi is None else min(hi, val + dw[v])
        bounds.append((lo, hi))

    rows = []
    for u, v in essential_pairs(g, dom):
        if u in pins or v in pins:
            continue
        coeffs = [0] * len(free)
        coeffs[index[u]] = 1
        coeffs[index[v]] = -1
        rows.append(Constraint(coeffs, "<=", distances_from(g, u)[v]))
    for u in pins:
        for v in pins:
            if u != v:
                d = distances_from(g, u)[v]
                if d is not None and pins[u] - pins[v] > d:
                    raise ValueError("pinned values violate the Lipschitz condition")

    obj = [as_rational(objective.get(w, 0)) for w in free]
    constant = sum((as_rational(objective.get(v, 0)) * val for v, val in pins.items()), Fraction(0))
    sol = solve_lp(LinearProgram(obj, rows, maximize=True, bounds=bounds))
    if not sol.optimal:
        raise ValueError(f"Lipschitz LP is {sol.status}")
    values = dict(pins)
    values.update(zip(free, sol.primal_point))
    phi = Potential(values)
    assert lipschitz_check(g, phi), "presolved constraint set admitted a non-Lipschitz point"
    return sol.value + constant, phi


def dual_potential(
    g: Graph, mu1: ProbMeasure, mu2: ProbMeasure, pin: Optional[int] = None
) -> Tuple[Fraction, Potential]:
    """Dual optimum and a basic optimal potential with ``phi(pin) = 0``."""
    domain = sorted(set(mu1.vertices) | set(mu2.vertices))
    if pin is None:
        pin = domain[0]
    elif pin not in domain:
        raise ValueError(f"pin vertex {pin} is outside the measure supports")
    for v in domain:
        _dist(g, pin, v)
    weights: Dict[int, Fraction] = {}
    for v, m in mu1.support:
        weights[v] = weights.get(v, 0) + m
    for v, m in mu2.support:
        weights[v] = weights.get(v, 0) - m
    return maximize_over_lipschitz(g, domain, weights, {pin: 0})


def optimal_potential(
    g: Graph, mu1: ProbMeasure, mu2: ProbMeasure, pin: Optional[int] = None
) -> Potential:
    """Optimal Kantorovich potential on ``supp mu1 | supp mu2`` with ``phi(pin) = 0``.

    The dual optimum is checked against :func:`w1_primal` exactly.
    """
    value, phi = dual_potential(g, mu1, mu2, pin)
    primal, _ = w1_primal(g, mu1, mu2)
    assert value == primal == phi.dual_value(mu1, mu2), "Kantorovich duality gap"
    return phi


def lipschitz_check(g: Graph, phi: Potential) -> bool:
    items = list(phi.values.items())
    for u, fu in items:
        du = distances_from(g, u)
        for v, fv in items:
            if du[v] is not None and abs(fu - fv) > du[v]:
                return False
    return True


def floor_potential(phi: Potential, g: Optional[Graph] = None) -> Potential:
    out = Potential({v: floor(val) for v, val in phi.values.items()})
    if g is not None:
        assert lipschitz_check(g, out), "floor broke the Lipschitz condition"
    return out


def ceil_potential(phi: Potential, g: Optional[Graph] = None) -> Potential:
    out = Potential({v: ceil(val) for v, val in phi.values.items()})
    if g is not None:
        assert lipschitz_check(g, out), "ceiling broke the Lipschitz condition"
    return out


def integerize_potential(g: Graph, phi: Potential, mu1: ProbMeasure, mu2: ProbMeasure) -> Potential:
    """Integer-valued optimal potential obtained as the pointwise floor of ``phi``."""
    target, _ = w1_primal(g, mu1, mu2)
    if not lipschitz_check(g, phi) or phi.dual_value(mu1, mu2) != target:
        raise ValueError("potential is not an optimal Kantorovich potential")
    out = floor_potential(phi, g)
    assert out.dual_value(mu1, mu2) == target, "floored potential lost optimality"
    return out


def check_slackness(g: Graph, plan: TransportPlan, phi: Potential) -> bool:
    """True iff ``phi(u) - phi(v) = d(u, v)`` wherever the plan moves mass."""
    for u, v, _ in plan.entries:
        if u not in phi.values or v not in phi.values:
            raise KeyError(f"potential undefined on plan vertex {u if u not in phi.values else v}")
        if phi[u] - phi[v] != _dist(g, u, v):
            return False
    return True


def has_diagonal_property(plan: TransportPlan) -> bool:
    mu1, mu2 = plan.source.as_dict(), plan.target.as_dict()
    return all(plan.mass(x, x) == m for x, m in mu1.items() if m <= mu2.get(x, 0))


def normalize_plan(g: Graph, plan: TransportPlan) -> TransportPlan:
    """Reroute mass so ``pi(x, x) = mu1(x)`` wherever ``mu1(x) <= mu2(x)``.

    Mass arriving at ``x`` from elsewhere is sent straight on to wherever ``x``
    was shipping its own mass.  The cost must not change.
    """
    mu1, mu2 = plan.source.as_dict(), plan.target.as_dict()
    flow: Dict[Tuple[int, int], Fraction] = {(u, v): m for u, v, m in plan.entries}
    for x in sorted(mu1):
        if mu1[x] > mu2.get(x, 0) or flow.get((x, x), 0) == mu1[x]:
            continue
        inflow = sorted((u, m) for (u, v), m in flow.items() if v == x and u != x)
        outflow = sorted((v, m) for (u, v), m in flow.items() if u == x and v != x)
        if {u for u, _ in inflow} & {v for v, _ in outflow}:
            raise AssertionError("plan routes mass through a vertex and back; not optimal")
        i = 0
        for w, need in outflow:
            del flow[(x, w)]
            while need:
                z, avail = inflow[i]
                moved = min(avail, need)
                flow[(z, x)] -= moved
                if not flow[(z, x)]:
                    del flow[(z, x)]
                flow[(z, w)] = flow.get((z, w), 0) + moved
                flow[(x, x)] = flow.get((x, x), 0) + moved
                need -= moved
                if moved == avail:
                    i += 1
                else:
                    inflow[i] = (z, avail - moved)
    out = TransportPlan(tuple((u, v, m) for (u, v), m in flow.items()), plan.source, plan.target)
    before, after = plan.cost(g), out.cost(g)
    if after != before:
        raise AssertionError(f"rerouting changed the plan cost from {before} to {after}")
    assert has_diagonal_property(out)
    return out
