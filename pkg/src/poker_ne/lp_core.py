"""Exact rational linear programming.

A dense bounded-variable primal simplex over :class:`fractions.Fraction`.
Entering and leaving choices follow Bland's lowest-index rule, so the
heavily degenerate programs produced by the poker games always terminate.
Every optimal answer is certified before it is returned: the assignment is
substituted into the original constraints, and the dual vector read off the
final basis is checked for sign feasibility and a zero duality gap.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Union

from .exact_arith import format_rational, to_rational

try:  # GMP rationals make pivoting several times faster; Fraction is the fallback
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

logger = logging.getLogger(__name__)

__all__ = [
    "LinearProgram",
    "LPSolution",
    "LPError",
    "LPStructureError",
    "LPCertificateError",
    "solve_lp",
    "dual_program",
]

LE, GE, EQ = "<=", ">=", "="
_REL_ALIASES = {"<=": LE, "≤": LE, "le": LE, ">=": GE, "≥": GE, "ge": GE, "=": EQ, "==": EQ, "eq": EQ}


class LPError(Exception):
    pass


class LPStructureError(LPError, ValueError):
    """The program is malformed (dimension mismatch, bad bounds, ...)."""


class LPCertificateError(LPError):
    """The optimality certificate failed; indicates a solver bug."""


@dataclass
class Constraint:
    coeffs: List[Fraction]
    relation: str
    rhs: Fraction
    name: str = ""


@dataclass
class LinearProgram:
    """``maximize`` or ``minimize`` a linear objective subject to rows and box bounds.

    Variables are added by name; a bound of ``None`` means unbounded on that side.
    Constraint coefficients may be given as a dense sequence or as a
    ``{name: coefficient}`` mapping.
    """

    sense: str = "max"
    variables: List[str] = field(default_factory=list)
    objective: List[Fraction] = field(default_factory=list)
    constraints: List[Constraint] = field(default_factory=list)
    bounds: List[tuple] = field(default_factory=list)

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise LPStructureError(f"sense must be 'max' or 'min', got {self.sense!r}")
        self._index = {name: k for k, name in enumerate(self.variables)}

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        return self._index[name]

    def add_variable(self, name: str, lower=0, upper=None, objective=0) -> int:
        if name in self._index:
            raise LPStructureError(f"duplicate variable {name!r}")
        lo = None if lower is None else to_rational(lower)
        hi = None if upper is None else to_rational(upper)
        if lo is not None and hi is not None and lo > hi:
            raise LPStructureError(f"variable {name!r}: lower bound exceeds upper bound")
        self._index[name] = len(self.variables)
        self.variables.append(name)
        self.bounds.append((lo, hi))
        self.objective.append(to_rational(objective))
        for con in self.constraints:
            con.coeffs.append(Fraction(0))
        return self._index[name]

    def set_objective(self, coeffs: Union[Sequence, Mapping[str, object]]) -> None:
        self.objective = self._dense(coeffs)

    def add_constraint(self, coeffs, relation: str, rhs, name: str = "") -> None:
        rel = _REL_ALIASES.get(relation)
        if rel is None:
            raise LPStructureError(f"unknown relation {relation!r}")
        self.constraints.append(Constraint(self._dense(coeffs), rel, to_rational(rhs), name))

    def _dense(self, coeffs) -> List[Fraction]:
        if isinstance(coeffs, Mapping):
            row = [Fraction(0)] * self.n_vars
            for name, c in coeffs.items():
                if name not in self._index:
                    raise LPStructureError(f"unknown variable {name!r}")
                row[self._index[name]] += to_rational(c)
            return row
        row = [to_rational(c) for c in coeffs]
        if len(row) != self.n_vars:
            raise LPStructureError(
                f"coefficient vector has length {len(row)}, expected {self.n_vars}"
            )
        return row

    def validate(self) -> None:
        n = self.n_vars
        if len(self.objective) != n or len(self.bounds) != n:
            raise LPStructureError("objective/bounds length does not match variable count")
        for k, con in enumerate(self.constraints):
            if len(con.coeffs) != n:
                raise LPStructureError(
                    f"constraint {con.name or k}: {len(con.coeffs)} coefficients, expected {n}"
                )
            if con.relation not in (LE, GE, EQ):
                raise LPStructureError(f"constraint {con.name or k}: bad relation {con.relation!r}")
        for name, (lo, hi) in zip(self.variables, self.bounds):
            if lo is not None and hi is not None and lo > hi:
                raise LPStructureError(f"variable {name!r}: lower bound exceeds upper bound")

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        """Exact substitution check of bounds and every constraint."""
        for v, (lo, hi) in zip(x, self.bounds):
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return False
        for con in self.constraints:
            lhs = sum((a * v for a, v in zip(con.coeffs, x) if a), Fraction(0))
            if con.relation == LE and lhs > con.rhs:
                return False
            if con.relation == GE and lhs < con.rhs:
                return False
            if con.relation == EQ and lhs != con.rhs:
                return False
        return True


@dataclass
class LPSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Optional[Fraction] = None
    assignment: Dict[str, Fraction] = field(default_factory=dict)
    duals: List[Fraction] = field(default_factory=list)
    iterations: int = 0
    debug_dump: str = ""

    def __getitem__(self, name: str) -> Fraction:
        return self.assignment[name]

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    """Bounded simplex tableau in the standard form ``A x = b, 0 <= x <= u``."""

    def __init__(self, rows, rhs, upper, n_art_start):
        self.m = len(rows)
        self.N = len(upper)
        self.T = [[_Q(a) if a else 0 for a in row] for row in rows]
        self.beta = [_Q(v) for v in rhs]
        self.upper = [None if u is None else _Q(u) for u in upper]
        self.art_start = n_art_start
        self.basis: List[int] = []
        self.is_basic = [False] * self.N
        self.at_upper = [False] * self.N
        self.d: List[Fraction] = []
        self.iterations = 0

    def price(self, cost):
        d = [_Q(c) for c in cost]
        for r, bj in enumerate(self.basis):
            cb = cost[bj]
            if cb:
                row = self.T[r]
                for k in range(self.N):
                    a = row[k]
                    if a:
                        d[k] -= cb * a
        self.d = d

    def run(self) -> str:
        T, beta, upper, basis = self.T, self.beta, self.upper, self.basis
        while True:
            d = self.d
            enter = -1
            for j in range(self.N):
                if self.is_basic[j] or upper[j] == 0:
                    continue
                dj = d[j]
                if (dj < 0 and not self.at_upper[j]) or (dj > 0 and self.at_upper[j]):
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            j = enter
            delta = -1 if self.at_upper[j] else 1
            best_t = upper[j]  # bound flip; None means +inf
            leave = -1
            leave_to_upper = False
            for r in range(self.m):
                a = T[r][j]
                if not a:
                    continue
                if delta < 0:
                    a = -a
                ub = upper[basis[r]]
                if a > 0:
                    t = beta[r] / a
                    to_up = False
                elif ub is not None:
                    t = (ub - beta[r]) / (-a)
                    to_up = True
                else:
                    continue
                if best_t is None or t < best_t or (
                    t == best_t and leave >= 0 and basis[r] < basis[leave]
                ):
                    best_t, leave, leave_to_upper = t, r, to_up
            if best_t is None:
                return "unbounded"
            self.iterations += 1
            t = best_t
            if t:
                step = t if delta > 0 else -t
                for r in range(self.m):
                    a = T[r][j]
                    if a:
                        beta[r] -= step * a
            if leave < 0:
                self.at_upper[j] = not self.at_upper[j]
                continue
            entering_value = (upper[j] if self.at_upper[j] else 0) + (t if delta > 0 else -t)
            out = basis[leave]
            self.is_basic[out] = False
            self.at_upper[out] = leave_to_upper
            self._pivot(leave, j)
            basis[leave] = j
            self.is_basic[j] = True
            self.at_upper[j] = False
            beta[leave] = entering_value

    def _pivot(self, r, j):
        T = self.T
        prow = T[r]
        piv = prow[j]
        if piv != 1:
            inv = 1 / piv
            prow = [a * inv if a else a for a in prow]
            T[r] = prow
        nz = [k for k in range(self.N) if prow[k]]
        for i in range(self.m):
            if i == r:
                continue
            row = T[i]
            f = row[j]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
        f = self.d[j]
        if f:
            d = self.d
            for k in nz:
                d[k] -= f * prow[k]

    def values(self):
        x = [_frac(self.upper[k]) if self.at_upper[k] else Fraction(0) for k in range(self.N)]
        for r, bj in enumerate(self.basis):
            x[bj] = _frac(self.beta[r])
        return x

    def dump(self, names) -> str:
        lines = ["basis: " + ", ".join(names[b] for b in self.basis)]
        for r in range(self.m):
            cells = " ".join(format_rational(_frac(a)) for a in self.T[r])
            lines.append(f"{names[self.basis[r]]:>10} = {format_rational(_frac(self.beta[r])):>12} | {cells}")
        lines.append("reduced costs: " + " ".join(format_rational(_frac(a)) for a in self.d))
        return "\n".join(lines)


def _frac(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def solve_lp(lp: LinearProgram, debug: bool = False) -> LPSolution:
    """Solve ``lp`` exactly and return one optimal vertex.

    Raises :class:`LPStructureError` on malformed programs.  Infeasible and
    unbounded programs are reported through ``status``.
    """
    lp.validate()
    n = lp.n_vars
    # Map each original variable onto non-negative standard columns.
    # col_map[k] = list of (column, sign); offsets[k] = constant shift.
    col_map: List[List[tuple]] = []
    offsets: List[Fraction] = []
    std_upper: List[Optional[Fraction]] = []
    names: List[str] = []
    for name, (lo, hi) in zip(lp.variables, lp.bounds):
        if lo is not None:
            col_map.append([(len(std_upper), 1)])
            offsets.append(lo)
            std_upper.append(None if hi is None else hi - lo)
            names.append(name)
        elif hi is not None:
            col_map.append([(len(std_upper), -1)])
            offsets.append(hi)
            std_upper.append(None)
            names.append(f"-{name}")
        else:
            c = len(std_upper)
            col_map.append([(c, 1), (c + 1, -1)])
            offsets.append(Fraction(0))
            std_upper.extend([None, None])
            names.extend([f"{name}+", f"{name}-"])
    n_struct = len(std_upper)
    m = len(lp.constraints)
    n_slack = sum(1 for con in lp.constraints if con.relation != EQ)
    n_cols = n_struct + n_slack + m
    art0 = n_struct + n_slack

    rows: List[List] = []
    rhs: List[Fraction] = []
    signs: List[int] = []
    slack_of_row: List[int] = []
    s = n_struct
    for i, con in enumerate(lp.constraints):
        row: List = [0] * n_cols
        b = con.rhs
        for k, a in enumerate(con.coeffs):
            if not a:
                continue
            b -= a * offsets[k]
            for col, sg in col_map[k]:
                row[col] += a if sg > 0 else -a
        slack = -1
        if con.relation == LE:
            row[s] = 1
            slack = s
            s += 1
        elif con.relation == GE:
            row[s] = -1
            slack = s
            s += 1
        sign = 1
        if b < 0:
            sign = -1
            row = [-a if a else a for a in row]
            b = -b
        row[art0 + i] = 1
        rows.append(row)
        rhs.append(b)
        signs.append(sign)
        slack_of_row.append(slack)
    std_upper.extend([None] * n_slack)
    names.extend(f"s{k}" for k in range(n_slack))
    std_upper.extend([None] * m)
    names.extend(f"a{i}" for i in range(m))

    std_rows = [list(r) for r in rows]  # pristine copy for the certificate
    tab = _Tableau(rows, rhs, std_upper, art0)
    phase1_cost = [0] * n_cols
    for i in range(m):
        sl = slack_of_row[i]
        if sl >= 0 and rows[i][sl] == 1:
            tab.basis.append(sl)
            tab.is_basic[sl] = True
            tab.upper[art0 + i] = _Q(0)
        else:
            tab.basis.append(art0 + i)
            tab.is_basic[art0 + i] = True
            phase1_cost[art0 + i] = 1

    if any(phase1_cost):
        tab.price(phase1_cost)
        tab.run()
        infeas = sum((_frac(tab.beta[r]) for r, bj in enumerate(tab.basis) if bj >= art0), Fraction(0))
        if infeas > 0:
            logger.debug("phase 1 ended with infeasibility %s", infeas)
            return LPSolution("infeasible", iterations=tab.iterations)
    for k in range(art0, n_cols):
        tab.upper[k] = _Q(0)

    cost: List = [0] * n_cols
    flip = 1 if lp.sense == "min" else -1
    for k, c in enumerate(lp.objective):
        if not c:
            continue
        for col, sg in col_map[k]:
            cost[col] += flip * c * sg
    tab.price(cost)
    status = tab.run()
    if status == "unbounded":
        return LPSolution("unbounded", iterations=tab.iterations)

    xs = tab.values()
    x = []
    for k in range(n):
        v = offsets[k]
        for col, sg in col_map[k]:
            v += xs[col] if sg > 0 else -xs[col]
        x.append(v)
    value = sum((c * v for c, v in zip(lp.objective, x) if c), Fraction(0))

    # Dual certificate: y^T = c_B^T B^{-1}, with B^{-1} held in the artificial columns.
    y = [Fraction(0)] * m
    for r, bj in enumerate(tab.basis):
        cb = cost[bj]
        if cb:
            row = tab.T[r]
            for i in range(m):
                a = row[art0 + i]
                if a:
                    y[i] += cb * _frac(a)
    _certify(std_rows, rhs, cost, std_upper[:art0], xs, y, tab, art0)
    if not lp.is_feasible(x):
        raise LPCertificateError("optimal assignment violates the original program")

    duals = [flip * signs[i] * y[i] for i in range(m)]
    sol = LPSolution(
        "optimal",
        value=value,
        assignment=dict(zip(lp.variables, x)),
        duals=duals,
        iterations=tab.iterations,
    )
    if debug:
        sol.debug_dump = tab.dump(names)
    return sol


def _certify(std_rows, rhs, cost, upper, xs, y, tab, art0):
    m = len(std_rows)
    primal = sum((cost[k] * xs[k] for k in range(art0) if cost[k]), Fraction(0))
    dual = sum((y[i] * rhs[i] for i in range(m) if y[i]), Fraction(0))
    for k in range(art0):
        dk = cost[k] - sum((y[i] * std_rows[i][k] for i in range(m) if y[i] and std_rows[i][k]), Fraction(0))
        if tab.is_basic[k]:
            if dk != 0:
                raise LPCertificateError(f"basic column {k} has reduced cost {dk}")
        elif upper[k] == 0:
            continue  # fixed column: either sign is dual feasible
        elif dk < 0:
            if upper[k] is None or not tab.at_upper[k]:
                raise LPCertificateError(f"column {k} prices out negative at its lower bound")
            dual += upper[k] * dk
        elif dk > 0 and tab.at_upper[k]:
            raise LPCertificateError(f"column {k} prices out positive at its upper bound")
    if primal != dual:
        raise LPCertificateError(f"duality gap {primal - dual} at claimed optimum")


def dual_program(lp: LinearProgram) -> LinearProgram:
    """Build the LP dual by hand, with finite bounds moved into explicit rows.

    Intended as an independent check: solving the result must give the same
    optimal value as ``lp``.
    """
    lp.validate()
    rows = [(con.coeffs, con.relation, con.rhs) for con in lp.constraints]
    n = lp.n_vars
    for k, (lo, hi) in enumerate(lp.bounds):
        unit = [Fraction(0)] * n
        unit[k] = Fraction(1)
        if lo is not None:
            rows.append((unit, GE, lo))
        if hi is not None:
            rows.append((unit, LE, hi))
    dual = LinearProgram(sense="min" if lp.sense == "max" else "max")
    for i, (_, rel, rhs) in enumerate(rows):
        if rel == EQ:
            lo, hi = None, None
        elif (rel == LE) == (lp.sense == "max"):
            lo, hi = 0, None
        else:
            lo, hi = None, 0
        dual.add_variable(f"y{i}", lower=lo, upper=hi, objective=rhs)
    for k in range(n):
        dual.add_constraint([r[0][k] for r in rows], EQ, lp.objective[k], name=lp.variables[k])
    return dual
