"""Exact rational scalars and a small exact simplex solver.

Rationals are :class:`fractions.Fraction`.  The solver works on an integer
tableau with integer-preserving (Edmonds/Bareiss) pivots: every row is scaled
to integers once, and the true tableau is ``T / D`` where ``D`` is the last
pivot element.  All divisions in the pivot update are exact.  The tableau
starts as ``int64`` and is promoted to Python integers as soon as an entry
could overflow, so results are never wrapped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

Rational = Fraction
RationalLike = Union[int, Fraction, str]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

RELATIONS = ("<=", "=", ">=")

# entries at or above this bound switch the tableau to arbitrary precision
_INT64_SAFE = 1 << 31


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    num, sep, den = text.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except ZeroDivisionError:
        raise
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None


def render(q: Fraction) -> str:
    """Canonical text form: ``num/den``, denominator dropped when 1."""
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def floor(q: Fraction) -> Fraction:
    return Fraction(math.floor(q))


def ceil(q: Fraction) -> Fraction:
    return Fraction(math.ceil(q))


def is_integral(q: Fraction) -> bool:
    return as_rational(q).denominator == 1


def _exact(value):
    # ints stay ints: the LP setup is hot and Fraction(int) is not free
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return value
    return as_rational(value)


@dataclass(frozen=True)
class Constraint:
    coefficients: Tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "coefficients", tuple(_exact(a) for a in self.coefficients))
        object.__setattr__(self, "rhs", _exact(self.rhs))

    def _with_rhs(self, rhs: RationalLike) -> "Constraint":
        # coefficients are already validated
        out = object.__new__(Constraint)
        object.__setattr__(out, "coefficients", self.coefficients)
        object.__setattr__(out, "relation", self.relation)
        object.__setattr__(out, "rhs", _exact(rhs))
        return out

    def lhs(self, point: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.coefficients, point) if a), Fraction(0))

    def holds(self, point: Sequence[Fraction]) -> bool:
        lhs = self.lhs(point)
        if self.relation == "<=":
            return lhs <= self.rhs
        if self.relation == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


Bound = Tuple[Optional[RationalLike], Optional[RationalLike]]


@dataclass(frozen=True)
class LinearProgram:
    """``maximize`` (or minimize) ``objective . x`` subject to ``constraints``.

    ``bounds`` gives ``(lower, upper)`` per variable, ``None`` meaning
    unbounded on that side.  When ``bounds`` is omitted every variable is
    nonnegative.
    """

    objective: Tuple[Fraction, ...]
    constraints: Tuple[Constraint, ...] = ()
    maximize: bool = True
    bounds: Optional[Tuple[Tuple[Optional[Fraction], Optional[Fraction]], ...]] = None

    def __post_init__(self):
        obj = tuple(_exact(c) for c in self.objective)
        object.__setattr__(self, "objective", obj)
        rows = []
        for con in self.constraints:
            if not isinstance(con, Constraint):
                coeffs, rel, rhs = con
                con = Constraint(tuple(coeffs), rel, rhs)
            if len(con.coefficients) != len(obj):
                raise ValueError(
                    f"constraint width {len(con.coefficients)} != objective width {len(obj)}"
                )
            rows.append(con)
        object.__setattr__(self, "constraints", tuple(rows))
        if self.bounds is None:
            bounds = tuple((0, None) for _ in obj)
        else:
            if len(self.bounds) != len(obj):
                raise ValueError("one (lower, upper) bound pair is needed per variable")
            bounds = tuple(
                (None if lo is None else _exact(lo), None if hi is None else _exact(hi))
                for lo, hi in self.bounds
            )
        object.__setattr__(self, "bounds", bounds)

    @property
    def width(self) -> int:
        return len(self.objective)

    def with_rhs(self, rhs: Sequence[RationalLike]) -> "LinearProgram":
        if len(rhs) != len(self.constraints):
            raise ValueError("one right-hand side per constraint is needed")
        rows = tuple(c._with_rhs(b) for c, b in zip(self.constraints, rhs))
        out = object.__new__(LinearProgram)
        for name, value in (("objective", self.objective), ("constraints", rows),
                            ("maximize", self.maximize), ("bounds", self.bounds)):
            object.__setattr__(out, name, value)
        return out


@dataclass(frozen=True)
class LpSolution:
    status: str
    value: Optional[Fraction] = None
    primal_point: Tuple[Fraction, ...] = ()
    # shadow prices d(value)/d(rhs), one per constraint
    dual_values: Tuple[Fraction, ...] = ()

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    def reduced_costs(self, lp: LinearProgram) -> Tuple[Fraction, ...]:
        """``c_j - sum_i y_i a_ij`` for every variable."""
        out = list(lp.objective)
        for y, con in zip(self.dual_values, lp.constraints):
            if y:
                for j, a in enumerate(con.coefficients):
                    if a:
                        out[j] -= y * a
        return tuple(Fraction(r) for r in out)

    def dual_objective(self, lp: LinearProgram) -> Fraction:
        """``sum(y_i b_i) + sum(r_j x_j)``; equals ``value`` at an optimum."""
        total = sum((y * c.rhs for y, c in zip(self.dual_values, lp.constraints)), Fraction(0))
        total += sum((r * x for r, x in zip(self.reduced_costs(lp), self.primal_point)), Fraction(0))
        return total

    def dual_feasible(self, lp: LinearProgram) -> bool:
        """Sign conditions on shadow prices and reduced costs."""
        for y, con in zip(self.dual_values, lp.constraints):
            if con.relation == "=":
                continue
            # loosening a <= row can only help a max problem
            shrink = y if con.relation == "<=" else -y
            if (shrink < 0) if lp.maximize else (shrink > 0):
                return False
        for r, x, (lo, hi) in zip(self.reduced_costs(lp), self.primal_point, lp.bounds):
            if r == 0:
                continue
            gain = r if lp.maximize else -r
            # a variable with positive marginal gain must sit at its upper bound
            if gain > 0 and (hi is None or x != hi):
                return False
            if gain < 0 and (lo is None or x != lo):
                return False
        return True


def _lcm_of_denominators(values: Iterable) -> int:
    out = 1
    for v in values:
        if isinstance(v, Fraction):
            d = v.denominator
            if d != 1:
                out = out * d // math.gcd(out, d)
    return out


def _as_int(v) -> int:
    return v if isinstance(v, int) else int(v)


class _Simplex:
    """Two-phase simplex on an integer tableau with integer-preserving pivots.

    The true tableau is ``T / (D * rhs_scale)`` in the right-hand-side column
    and ``T / D`` elsewhere.  Rows are scaled to integers by their own
    coefficient denominators; the right-hand side by one global factor.
    """

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        n = lp.width

        # x_j = offset_j + sum(sign * x'_k)
        self.offsets = []
        self.columns = []
        n_std = 0
        bound_rows = []
        self.bad_bounds = False
        for lo, hi in lp.bounds:
            if lo is not None:
                if hi is not None and hi < lo:
                    self.bad_bounds = True
                self.offsets.append(lo)
                self.columns.append(((n_std, 1),))
                if hi is not None:
                    bound_rows.append((n_std, hi - lo))
                n_std += 1
            elif hi is not None:
                self.offsets.append(hi)
                self.columns.append(((n_std, -1),))
                n_std += 1
            else:
                self.offsets.append(0)
                self.columns.append(((n_std, 1), (n_std + 1, -1)))
                n_std += 2
        self.n_std = n_std
        self.owner = {k: (j, s) for j, cols in enumerate(self.columns) for k, s in cols}
        self.bound_caps = [cap for _, cap in bound_rows]

        # sparse rows over x'
        std_rows = []
        for con in lp.constraints:
            coeffs: dict = {}
            for j, a in enumerate(con.coefficients):
                if not a:
                    continue
                for k, s in self.columns[j]:
                    coeffs[k] = coeffs.get(k, 0) + a * s
            std_rows.append((coeffs, con.relation))
        for k, _ in bound_rows:
            std_rows.append(({k: 1}, "<="))

        cost = [0] * n_std
        self.const = 0
        for j, c in enumerate(lp.objective):
            if not c:
                continue
            self.const += c * self.offsets[j]
            for k, s in self.columns[j]:
                cost[k] += c * s
        if not lp.maximize:
            cost = [-c for c in cost]

        std_rhs = self._std_rhs([c.rhs for c in lp.constraints])
        m = self.m = len(std_rows)
        self.signs = []
        kinds = []  # "slack": +1 unit; "surplus": -1 plus artificial; "eq": artificial
        for (_, rel), rhs in zip(std_rows, std_rhs):
            sign = 1
            if rhs < 0:
                sign = -1
                rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
            self.signs.append(sign)
            kinds.append({"<=": "slack", ">=": "surplus", "=": "eq"}[rel])

        n_slack = sum(1 for k in kinds if k != "eq")
        n_art = sum(1 for k in kinds if k != "slack")
        n_cols = self.n_cols = n_std + n_slack + n_art
        self.rhs_col = n_cols

        rows = []
        self.scales = []
        self.unit_col = []
        basis = []
        next_slack = n_std
        next_art = n_std + n_slack
        for (coeffs, _), sign, kind in zip(std_rows, self.signs, kinds):
            scale = _lcm_of_denominators(coeffs.values())
            self.scales.append(scale)
            row = [0] * (n_cols + 1)
            for k, a in coeffs.items():
                if a:
                    row[k] = _as_int(a * scale * sign)
            if kind == "slack":
                row[next_slack] = 1
                self.unit_col.append(next_slack)
                basis.append(next_slack)
                next_slack += 1
            else:
                if kind == "surplus":
                    row[next_slack] = -1
                    next_slack += 1
                row[next_art] = 1
                self.unit_col.append(next_art)
                basis.append(next_art)
                next_art += 1
            rows.append(row)
        self.rhs_scale, scaled_rhs = self._scaled_rhs(std_rhs)
        for row, b in zip(rows, scaled_rhs):
            row[self.rhs_col] = b

        self.obj_scale = _lcm_of_denominators(cost)
        obj = [0] * (n_cols + 1)
        for k, c in enumerate(cost):
            if c:
                obj[k] = -_as_int(c * self.obj_scale)
        phase1 = [0] * (n_cols + 1)
        for row, kind in zip(rows, kinds):
            if kind == "slack":
                continue
            for k in range(n_std + n_slack):
                phase1[k] -= row[k]
            phase1[self.rhs_col] -= row[self.rhs_col]

        big = max((max(map(abs, row)) for row in rows + [obj, phase1] if row), default=0)
        self.T = np.array(rows + [obj, phase1], dtype=np.int64 if big < _INT64_SAFE else object)
        self.D = 1
        self.basis = basis
        self.n_art = n_art
        self.allowed = np.ones(n_cols, dtype=bool)
        self.allowed[n_std + n_slack:] = False
        self.dead: set = set()

    def _std_rhs(self, rhs: Sequence) -> List:
        if not any(self.offsets):
            return list(rhs) + list(self.bound_caps)
        out = []
        for con, b in zip(self.lp.constraints, rhs):
            shift = 0
            for j, a in enumerate(con.coefficients):
                if a and self.offsets[j]:
                    shift += a * self.offsets[j]
            out.append(b - shift)
        return out + list(self.bound_caps)

    def _scaled_rhs(self, std_rhs: Sequence) -> Tuple[int, List[int]]:
        vals = [b if s == 1 and sign == 1 else b * s * sign for b, s, sign in zip(std_rhs, self.scales, self.signs)]
        lam = _lcm_of_denominators(vals)
        return lam, [_as_int(v * lam) for v in vals]

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        if T.dtype != object and int(np.abs(T).max()) >= _INT64_SAFE:
            T = self.T = T.astype(object)
        a = T[r, c]
        prow = T[r].copy()
        new = a * T - np.outer(T[:, c], prow)
        if self.D != 1:
            new //= self.D
        new[r] = prow
        self.D = int(a)
        if self.D < 0:
            new = -new
            self.D = -self.D
        self.T = new
        self.basis[r] = c

    def primal(self, obj_row: int) -> str:
        """Bland's-rule primal simplex for the objective stored in ``obj_row``."""
        rhs = self.rhs_col
        while True:
            T = self.T
            candidates = np.flatnonzero((T[obj_row, :rhs] < 0) & self.allowed)
            if candidates.size == 0:
                return OPTIMAL
            c = int(candidates[0])
            col = T[:self.m, c]
            best = -1
            for i in np.flatnonzero(col > 0):
                i = int(i)
                if i in self.dead:
                    continue
                if best < 0:
                    best = i
                    continue
                lhs = int(T[i, rhs]) * int(T[best, c])
                cur = int(T[best, rhs]) * int(T[i, c])
                if lhs < cur or (lhs == cur and self.basis[i] < self.basis[best]):
                    best = i
            if best < 0:
                return UNBOUNDED
            self.pivot(best, c)

    def dual(self) -> str:
        """Dual simplex from a dual-feasible basis; smallest-index rules throughout."""
        rhs = self.rhs_col
        obj = self.m
        while True:
            T = self.T
            for i in self.dead:
                if T[i, rhs] != 0:
                    return INFEASIBLE
            rows = [int(i) for i in np.flatnonzero(T[:self.m, rhs] < 0) if int(i) not in self.dead]
            if not rows:
                return OPTIMAL
            r = min(rows, key=lambda i: self.basis[i])
            best = -1
            for j in np.flatnonzero((T[r, :rhs] < 0) & self.allowed):
                j = int(j)
                if best < 0:
                    best = j
                    continue
                # minimise obj[j] / -T[r, j]
                if int(T[obj, j]) * -int(T[r, best]) < int(T[obj, best]) * -int(T[r, j]):
                    best = j
            if best < 0:
                return INFEASIBLE
            self.pivot(r, best)

    def run(self) -> str:
        if self.bad_bounds:
            return INFEASIBLE
        m = self.m
        if self.n_art:
            self.primal(m + 1)
            if self.T[m + 1, self.rhs_col] < 0:
                return INFEASIBLE
            for i in range(m):
                if self.allowed[self.basis[i]]:
                    continue
                nz = np.flatnonzero((self.T[i, :self.n_cols] != 0) & self.allowed)
                if nz.size:
                    self.pivot(i, int(nz[0]))
                else:
                    self.dead.add(i)
        return self.primal(m)

    def resolve(self, rhs: Sequence) -> str:
        """Swap in a new constraint right-hand side and repair by dual simplex."""
        if self.bad_bounds:
            return INFEASIBLE
        lam, scaled = self._scaled_rhs(self._std_rhs(rhs))
        Binv = self.T[:, self.unit_col]
        if not scaled:
            col = np.zeros(self.m + 2, dtype=object)
        elif Binv.dtype != object and int(np.abs(Binv).max()) * sum(map(abs, scaled)) < _INT64_SAFE:
            col = Binv.dot(np.array(scaled, dtype=np.int64))
        else:
            col = Binv.astype(object).dot(np.array(scaled, dtype=object))
        if self.T.dtype != object and col.dtype != object:
            T = self.T.copy()
        else:
            T = self.T.astype(object)
        T[:, self.rhs_col] = col
        # drop back to int64 when it is safe
        if T.dtype == object and int(np.abs(T).max()) < _INT64_SAFE:
            T = T.astype(np.int64)
        self.T = T
        self.rhs_scale = lam
        return self.dual()

    def solution(self, lp: LinearProgram) -> LpSolution:
        T, D, m = self.T, self.D, self.m
        rhs = self.rhs_col
        denom = D * self.rhs_scale
        point = list(self.offsets)
        for i, b in enumerate(self.basis):
            if b < self.n_std:
                num = int(T[i, rhs])
                if num:
                    j, s = self.owner[b]
                    point[j] = point[j] + Fraction(s * num, denom)
        zero = Fraction(0)
        point = tuple(v if isinstance(v, Fraction) else Fraction(v) if v else zero for v in point)

        # value and feasibility in integers: scale the point by a common denominator
        support = [(j, v) for j, v in enumerate(point) if v]
        L = _lcm_of_denominators([v for _, v in support])
        nums = [(j, v.numerator * (L // v.denominator)) for j, v in support]
        obj = lp.objective
        value = Fraction(sum(obj[j] * n for j, n in nums if obj[j])) / L
        internal = Fraction(int(T[m, rhs]), denom * self.obj_scale)
        assert value == self.const + (internal if lp.maximize else -internal), "objective bookkeeping"
        for con in lp.constraints:
            a = con.coefficients
            lhs = sum(a[j] * n for j, n in nums if a[j])
            b = con.rhs * L
            ok = lhs <= b if con.relation == "<=" else lhs >= b if con.relation == ">=" else lhs == b
            assert ok, "simplex returned an infeasible point"

        direction = 1 if lp.maximize else -1
        duals = tuple(
            Fraction(direction * int(T[m, self.unit_col[i]]) * self.scales[i] * self.signs[i], D * self.obj_scale)
            for i in range(len(lp.constraints))
        )
        return LpSolution(OPTIMAL, value, point, duals)


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Solve ``lp`` exactly with a two-phase simplex using Bland's rule.

    Returns a basic optimal solution together with exact shadow prices, or an
    ``infeasible`` / ``unbounded`` status.
    """
    sx = _Simplex(lp)
    status = sx.run()
    if status != OPTIMAL:
        return LpSolution(status)
    return sx.solution(lp)


def solve_lp_sequence(lp: LinearProgram, rhs_list: Sequence[Sequence[RationalLike]]) -> List[LpSolution]:
    """Solve ``lp`` once per right-hand side in ``rhs_list``.

    The optimal basis of each solve stays dual feasible for the next one, so
    later solves are warm-started with dual simplex pivots.  Every returned
    solution is a basic optimum of its own program.
    """
    out = []
    sx = None
    for rhs in rhs_list:
        member = lp.with_rhs(rhs)
        if sx is None:
            sx = _Simplex(member)
            status = sx.run()
            if status != OPTIMAL:
                sx = None
                out.append(LpSolution(status))
                continue
        else:
            status = sx.resolve([c.rhs for c in member.constraints])
            if status != OPTIMAL:
                # unbounded is impossible from a dual-feasible basis; infeasible is final
                out.append(LpSolution(status))
                continue
        out.append(sx.solution(member))
    return out

