"""Exact rational linear programming.

Two solvers live here.  ``solve_lp`` is a dense two-phase tableau simplex
over ``Fraction`` with Bland's rule; it accepts models in natural row form
and returns primal values, row duals and, when no optimum exists, a ray.
``CoalitionLp`` is a small revised simplex specialised to the certificate
LP over coalitions that the search modules solve thousands of times.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

LE, EQ, GE = "<=", "=", ">="
OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass int, str or Fraction")
    return Fraction(value)


@dataclass(frozen=True)
class Constraint:
    """One row ``sum coeffs[j] * x[j] (sense) rhs``; coefficients are sparse."""

    coeffs: tuple  # ((index, Fraction), ...) sorted by index, no zeros
    sense: str
    rhs: Fraction
    name: str = ""

    def dense(self, width: int) -> list:
        row = [Fraction(0)] * width
        for j, a in self.coeffs:
            row[j] = a
        return row

    def activity(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * x[j] for j, a in self.coeffs), Fraction(0))


@dataclass(frozen=True)
class LpModel:
    sense: str
    objective: tuple
    constraints: tuple
    lower: tuple
    upper: tuple
    names: tuple

    @property
    def num_vars(self) -> int:
        return len(self.objective)


def _sparse(row, width: int) -> tuple:
    if isinstance(row, dict):
        items = sorted(row.items())
    else:
        if len(row) != width:
            raise ValueError(f"row width {len(row)} does not match {width} variables")
        items = list(enumerate(row))
    out = []
    for j, a in items:
        if not 0 <= j < width:
            raise ValueError(f"column index {j} outside 0..{width - 1}")
        a = as_fraction(a)
        if a:
            out.append((j, a))
    return tuple(out)


def make_model(sense: str, objective, rows, lower=None, upper=None, names=None) -> LpModel:
    """Build a model.  ``rows`` holds ``(coeffs, sense, rhs)`` or ``(coeffs, sense, rhs, name)``
    where ``coeffs`` is a dense list or a ``{index: value}`` dict.  Lower bounds
    default to 0; ``None`` marks a free side."""
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    objective = tuple(as_fraction(c) for c in objective)
    width = len(objective)
    cons = []
    for k, row in enumerate(rows):
        coeffs, rel, rhs = row[0], row[1], row[2]
        name = row[3] if len(row) > 3 else f"c{k}"
        if rel not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {rel!r}")
        cons.append(Constraint(_sparse(coeffs, width), rel, as_fraction(rhs), name))
    lower = tuple(Fraction(0) for _ in range(width)) if lower is None else tuple(
        None if v is None else as_fraction(v) for v in lower)
    upper = tuple(None for _ in range(width)) if upper is None else tuple(
        None if v is None else as_fraction(v) for v in upper)
    if len(lower) != width or len(upper) != width:
        raise ValueError("bound vectors must match the number of variables")
    for lo, hi in zip(lower, upper):
        if lo is not None and hi is not None and lo > hi:
            raise ValueError("lower bound exceeds upper bound")
    names = tuple(f"x{j}" for j in range(width)) if names is None else tuple(names)
    if len(names) != width:
        raise ValueError("one name per variable is required")
    return LpModel(sense, objective, tuple(cons), lower, upper, names)


@dataclass(frozen=True)
class LpSolution:
    status: str
    x: Optional[tuple] = None
    duals: Optional[tuple] = None
    objective: Optional[Fraction] = None
    ray: Optional[tuple] = None
    # Farkas data for infeasible models: multipliers on lower/upper bounds.
    ray_lower: Optional[tuple] = None
    ray_upper: Optional[tuple] = None


# ---------------------------------------------------------------------------
# dense two-phase tableau simplex


class _Tableau:
    """Rows of Fractions; last entry of each row is the right-hand side."""

    def __init__(self, rows, basis, ncols):
        self.rows = rows
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r: int, q: int) -> None:
        rows = self.rows
        prow = rows[r]
        p = prow[q]
        if p != 1:
            prow = [a / p for a in prow]
            rows[r] = prow
        nz = [j for j, a in enumerate(prow) if a]
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[q]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        self.basis[r] = q

    def reduced_costs(self, cost, allowed):
        """Reduced costs d_j = c_j - c_B B^-1 a_j for columns in ``allowed``."""
        cb = [cost[b] for b in self.basis]
        active = [(i, c) for i, c in enumerate(cb) if c]
        out = {}
        for j in allowed:
            d = cost[j]
            for i, c in active:
                a = self.rows[i][j]
                if a:
                    d -= c * a
            out[j] = d
        return out

    def run(self, cost, allowed) -> Optional[int]:
        """Minimise ``cost`` with Bland's rule.  Returns an entering column
        certifying unboundedness, or None at optimality."""
        allowed = sorted(allowed)
        while True:
            d = self.reduced_costs(cost, allowed)
            q = next((j for j in allowed if d[j] < 0), None)
            if q is None:
                return None
            best, r = None, None
            for i, row in enumerate(self.rows):
                a = row[q]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[r]):
                        best, r = ratio, i
            if r is None:
                return q
            self.pivot(r, q)


def solve_lp(model: LpModel) -> LpSolution:
    """Solve ``model`` exactly.

    Row duals are reported as sensitivities of the optimal objective to the
    right-hand side, in the model's own sense.  Infeasible models carry a
    Farkas certificate (``ray`` on rows plus bound multipliers); unbounded ones
    carry an improving primal direction in ``ray``.
    """
    width = model.num_vars
    for con in model.constraints:
        for j, _ in con.coeffs:
            if j >= width:
                raise ValueError("constraint references a missing variable")

    # Column map: original variable -> list of (std column, sign); plus offsets.
    cols = []        # (orig var, sign)
    offset = []
    ub_rows = []     # (std column, span)
    var_cols = []
    for j in range(width):
        lo, hi = model.lower[j], model.upper[j]
        if lo is not None:
            offset.append(lo)
            var_cols.append([(len(cols), 1)])
            if hi is not None:
                ub_rows.append((len(cols), hi - lo))
            cols.append((j, 1))
        elif hi is not None:
            offset.append(hi)
            var_cols.append([(len(cols), -1)])
            cols.append((j, -1))
        else:
            offset.append(Fraction(0))
            var_cols.append([(len(cols), 1), (len(cols) + 1, -1)])
            cols.append((j, 1))
            cols.append((j, -1))
    nstd = len(cols)

    # Standard rows: (coeff dict over std cols, sense, rhs, origin)
    std_rows = []
    for i, con in enumerate(model.constraints):
        coeff = {}
        rhs = con.rhs
        for j, a in con.coeffs:
            rhs -= a * offset[j]
            for c, s in var_cols[j]:
                coeff[c] = coeff.get(c, 0) + a * s
        std_rows.append((coeff, con.sense, rhs, ("row", i)))
    for c, span in ub_rows:
        std_rows.append(({c: Fraction(1)}, LE, span, ("ub", c)))

    m = len(std_rows)
    # Layout: std vars | one slack per inequality row | one artificial per row
    slack_of = {}
    ncol = nstd
    for r, (_, sense, _, _) in enumerate(std_rows):
        if sense != EQ:
            slack_of[r] = ncol
            ncol += 1
    art_start = ncol
    total = ncol + m
    rows, basis, flips, init = [], [], [], []
    for r, (coeff, sense, rhs, _) in enumerate(std_rows):
        row = [Fraction(0)] * (total + 1)
        for c, a in coeff.items():
            row[c] = Fraction(a)
        if sense == LE:
            row[slack_of[r]] = Fraction(1)
        elif sense == GE:
            row[slack_of[r]] = Fraction(-1)
        row[-1] = rhs
        flip = 1
        if rhs < 0:
            row = [-a for a in row]
            flip = -1
        flips.append(flip)
        row[art_start + r] = Fraction(1)
        if sense != EQ and row[slack_of[r]] == 1:
            basis.append(slack_of[r])
            init.append(slack_of[r])
        else:
            basis.append(art_start + r)
            init.append(art_start + r)
        rows.append(row)
    tab = _Tableau(rows, basis, total)

    structural = list(range(art_start))
    phase1_cost = [Fraction(0)] * art_start + [Fraction(1)] * m
    artificial_in_use = any(b >= art_start for b in basis)
    if artificial_in_use:
        tab.run(phase1_cost, structural + [b for b in basis if b >= art_start])
        infeas = sum((rows[i][-1] for i, b in enumerate(tab.basis) if b >= art_start), Fraction(0))
        if infeas > 0:
            y = _row_duals(tab, phase1_cost, init)
            return _farkas(model, std_rows, flips, y, cols, var_cols)
        # Drive remaining artificials out of the basis.
        for i in range(m):
            b = tab.basis[i]
            if b >= art_start:
                q = next((j for j in structural if tab.rows[i][j]), None)
                if q is not None:
                    tab.pivot(i, q)

    sign = 1 if model.sense == "min" else -1
    cost = [Fraction(0)] * total
    for c, (j, s) in enumerate(cols):
        cost[c] = sign * s * model.objective[j]
    q = tab.run(cost, structural)
    if q is not None:
        direction = [Fraction(0)] * total
        direction[q] = Fraction(1)
        for i, b in enumerate(tab.basis):
            direction[b] = -tab.rows[i][q]
        ray = [Fraction(0)] * width
        for c, (j, s) in enumerate(cols):
            ray[j] += s * direction[c]
        x = _primal(tab, cols, offset, width, total)
        return LpSolution(UNBOUNDED, x=x, ray=tuple(ray))

    x = _primal(tab, cols, offset, width, total)
    y = _row_duals(tab, cost, init)
    duals = [Fraction(0)] * len(model.constraints)
    for r, (_, _, _, origin) in enumerate(std_rows):
        if origin[0] == "row":
            duals[origin[1]] = sign * flips[r] * y[r]
    obj = sum((c * v for c, v in zip(model.objective, x)), Fraction(0))
    return LpSolution(OPTIMAL, x=x, duals=tuple(duals), objective=obj)


def _primal(tab, cols, offset, width, total):
    val = [Fraction(0)] * total
    for i, b in enumerate(tab.basis):
        val[b] = tab.rows[i][-1]
    x = list(offset)
    for c, (j, s) in enumerate(cols):
        x[j] += s * val[c]
    return tuple(x)


def _row_duals(tab, cost, init):
    """y_r = c_k - d_k for the column k that formed the initial identity in row r."""
    d = tab.reduced_costs(cost, init)
    return [cost[k] - d[k] for k in init]


def _farkas(model, std_rows, flips, y, cols, var_cols):
    width = model.num_vars
    lam = [Fraction(0)] * len(model.constraints)
    lam_ub = {}
    for r, (_, _, _, origin) in enumerate(std_rows):
        if origin[0] == "row":
            lam[origin[1]] = flips[r] * y[r]
        else:
            lam_ub[origin[1]] = flips[r] * y[r]
    g = [Fraction(0)] * width
    for i, con in enumerate(model.constraints):
        if lam[i]:
            for j, a in con.coeffs:
                g[j] += lam[i] * a
    ray_lower = [Fraction(0)] * width
    ray_upper = [Fraction(0)] * width
    for j in range(width):
        lo, hi = model.lower[j], model.upper[j]
        if lo is not None:
            s = -lam_ub.get(var_cols[j][0][0], Fraction(0))
            ray_upper[j] = s
            ray_lower[j] = s - g[j]
        elif hi is not None:
            ray_upper[j] = g[j]
    return LpSolution(INFEASIBLE, ray=tuple(lam), ray_lower=tuple(ray_lower), ray_upper=tuple(ray_upper))


# ---------------------------------------------------------------------------
# independent verification


def reduced_costs(model: LpModel, duals: Sequence[Fraction]) -> list:
    d = list(model.objective)
    for y, con in zip(duals, model.constraints):
        if y:
            for j, a in con.coeffs:
                d[j] -= y * a
    return d


def check_primal(model: LpModel, x: Sequence[Fraction]) -> bool:
    if len(x) != model.num_vars:
        return False
    for v, lo, hi in zip(x, model.lower, model.upper):
        if lo is not None and v < lo:
            return False
        if hi is not None and v > hi:
            return False
    for con in model.constraints:
        act = con.activity(x)
        if con.sense == LE and act > con.rhs:
            return False
        if con.sense == GE and act < con.rhs:
            return False
        if con.sense == EQ and act != con.rhs:
            return False
    return True


def verify_solution(model: LpModel, solution: LpSolution) -> bool:
    """Re-check a claimed solution without trusting the solver.

    Optimal: primal feasibility, dual sign conditions, complementary
    slackness and equality of primal and dual objective values.  Infeasible:
    the Farkas combination.  Unbounded: feasible point plus improving ray.
    """
    if solution.status == OPTIMAL:
        return _verify_optimal(model, solution)
    if solution.status == INFEASIBLE:
        return _verify_farkas(model, solution)
    if solution.status == UNBOUNDED:
        return _verify_ray(model, solution)
    return False


def _verify_optimal(model, sol) -> bool:
    x, y = sol.x, sol.duals
    if x is None or y is None or len(y) != len(model.constraints):
        return False
    if not check_primal(model, x):
        return False
    s = 1 if model.sense == "min" else -1
    for yi, con in zip(y, model.constraints):
        # for min: >= rows carry y >= 0, <= rows y <= 0; max flips.
        if con.sense == GE and s * yi < 0:
            return False
        if con.sense == LE and s * yi > 0:
            return False
        if yi and con.activity(x) != con.rhs:
            return False
    d = reduced_costs(model, y)
    dual_obj = sum((yi * con.rhs for yi, con in zip(y, model.constraints)), Fraction(0))
    for j, dj in enumerate(d):
        if not dj:
            continue
        lo, hi = model.lower[j], model.upper[j]
        if s * dj > 0:
            if lo is None or x[j] != lo:
                return False
            dual_obj += dj * lo
        else:
            if hi is None or x[j] != hi:
                return False
            dual_obj += dj * hi
    primal_obj = sum((c * v for c, v in zip(model.objective, x)), Fraction(0))
    return primal_obj == dual_obj and (sol.objective is None or sol.objective == primal_obj)


def _verify_farkas(model, sol) -> bool:
    lam, r, s = sol.ray, sol.ray_lower, sol.ray_upper
    if lam is None or r is None or s is None:
        return False
    width = model.num_vars
    for li, con in zip(lam, model.constraints):
        if con.sense == GE and li < 0:
            return False
        if con.sense == LE and li > 0:
            return False
    g = [Fraction(0)] * width
    for li, con in zip(lam, model.constraints):
        if li:
            for j, a in con.coeffs:
                g[j] += li * a
    total = sum((li * con.rhs for li, con in zip(lam, model.constraints)), Fraction(0))
    for j in range(width):
        if r[j] < 0 or s[j] < 0:
            return False
        if r[j] and model.lower[j] is None:
            return False
        if s[j] and model.upper[j] is None:
            return False
        if g[j] + r[j] - s[j] != 0:
            return False
        if r[j]:
            total += r[j] * model.lower[j]
        if s[j]:
            total -= s[j] * model.upper[j]
    return total > 0


def _verify_ray(model, sol) -> bool:
    x, ray = sol.x, sol.ray
    if x is None or ray is None or not check_primal(model, x):
        return False
    for v, lo, hi in zip(ray, model.lower, model.upper):
        if lo is not None and v < 0:
            return False
        if hi is not None and v > 0:
            return False
    for con in model.constraints:
        act = con.activity(ray)
        if (con.sense == LE and act > 0) or (con.sense == GE and act < 0) or (con.sense == EQ and act != 0):
            return False
    gain = sum((c * v for c, v in zip(model.objective, ray)), Fraction(0))
    return gain < 0 if model.sense == "min" else gain > 0


# ---------------------------------------------------------------------------
# text export


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _term_list(pairs, names) -> str:
    parts = []
    for j, a in pairs:
        mag = format_fraction(abs(a))
        sign = "-" if a < 0 else "+"
        coef = "" if abs(a) == 1 else mag + " "
        parts.append(f"{sign} {coef}{names[j]}")
    if not parts:
        return "0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def export_lp_text(model: LpModel, binaries: Iterable[int] = ()) -> str:
    """Human-readable LP layout: objective, ``subject to``, ``bounds`` and
    optionally a ``binary`` section.  Coefficients are exact fractions."""
    names = model.names
    lines = ["maximize" if model.sense == "max" else "minimize"]
    obj = [(j, c) for j, c in enumerate(model.objective) if c]
    lines.append(" obj: " + _term_list(obj, names))
    lines.append("subject to")
    for con in model.constraints:
        lines.append(f" {con.name}: {_term_list(con.coeffs, names)} {con.sense} {format_fraction(con.rhs)}")
    lines.append("bounds")
    for j in range(model.num_vars):
        lo, hi = model.lower[j], model.upper[j]
        if lo is None and hi is None:
            lines.append(f" {names[j]} free")
        elif hi is None:
            if lo != 0:
                lines.append(f" {names[j]} >= {format_fraction(lo)}")
        elif lo is None:
            lines.append(f" -inf <= {names[j]} <= {format_fraction(hi)}")
        else:
            lines.append(f" {format_fraction(lo)} <= {names[j]} <= {format_fraction(hi)}")
    bins = sorted(set(binaries))
    if bins:
        lines.append("binary")
        for j in bins:
            lines.append(f" {names[j]}")
    lines.append("end")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# implicit-column simplex for certificate LPs over coalitions


def incidence_matrix(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.int64)


def bits_to_array(bits: int, size: int) -> np.ndarray:
    raw = bits.to_bytes((size + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size].astype(bool)


_SAFE = 1 << 52


@dataclass(frozen=True)
class Basis:
    cols: tuple
    inv: tuple      # integer matrix rows; B^-1 = inv / det
    det: int


@dataclass
class CoalitionLpResult:
    status: str          # "optimal" or "cutoff"
    value: Fraction      # optimum, or an upper bound when cut off
    basis: Basis
    u: dict
    v: dict
    duals: tuple         # Fractions, one per row (row 0 is the v-budget row)


class CoalitionLp:
    """max sum_S u_S subject to

        sum_S u_S R a(S) - sum_T v_T R a(T) <= 0,   sum_T v_T <= 1,   u, v >= 0,

    where ``a(S)`` is the 0/1 incidence vector of coalition S and R is a fixed
    integer row transform (identity for non-negative weights, prefix sums for
    ordered weights, [I; -I] for signed weights).  Columns are never stored:
    callers pass boolean masks saying which coalitions may carry u and v.

    Pivoting is fraction-free (integer adjugate and determinant), so every
    value is exact.  A warm basis whose columns were later forbidden is
    repaired by dual simplex steps, which also allows early exit once the
    dual bound drops to a cutoff.
    """

    def __init__(self, n: int, transform: Sequence[Sequence[int]]):
        self.n = n
        self.R = [list(map(int, row)) for row in transform]
        self.k = len(self.R)
        self.m = self.k + 1
        self.size = 1 << n
        self.ind = incidence_matrix(n)
        self.RT = np.array(self.R, dtype=np.int64).T if self.k else np.zeros((n, 0), dtype=np.int64)
        self._colcache = {}

    # column ids: [0, m) slacks, then u masks, then v masks
    def column(self, cid: int) -> tuple:
        col = self._colcache.get(cid)
        if col is not None:
            return col
        m, size = self.m, self.size
        if cid < m:
            col = tuple(1 if r == cid else 0 for r in range(m))
        else:
            s = cid - m
            neg = s >= size
            mask = s - size if neg else s
            a = [0] + [sum(row[i] for i in range(self.n) if mask >> i & 1) for row in self.R]
            if neg:
                a = [1] + [-x for x in a[1:]]
            col = tuple(a)
        self._colcache[cid] = col
        return col

    def _transform(self, vec) -> list:
        """Row vector over rows 1..k mapped to per-voter coefficients."""
        out = [0] * self.n
        for r in range(self.k):
            c = vec[r + 1]
            if c:
                row = self.R[r]
                for i in range(self.n):
                    if row[i]:
                        out[i] += c * row[i]
        return out

    def _coalition_values(self, z: list, *scalars: int) -> np.ndarray:
        # int64 while every intermediate provably fits, Python ints otherwise
        big = max((abs(t) for t in z), default=0) * (self.n + 1)
        big = max([big] + [abs(t) * 2 for t in scalars])
        if big < _SAFE:
            return self.ind @ np.array(z, dtype=np.int64)
        return self.ind.astype(object) @ np.array(z, dtype=object)

    def slack_basis(self) -> Basis:
        m = self.m
        return Basis(tuple(range(m)), tuple(tuple(1 if i == j else 0 for j in range(m)) for i in range(m)), 1)

    def solve(self, allow_u: np.ndarray, allow_v: np.ndarray, basis: Optional[Basis] = None,
              cutoff: Optional[Fraction] = None) -> CoalitionLpResult:
        if basis is None:
            basis = self.slack_basis()
        try:
            return self._solve(allow_u, allow_v, basis, cutoff)
        except _Restart:
            return self._solve(allow_u, allow_v, self.slack_basis(), cutoff, bland=True)

    def _solve(self, allow_u, allow_v, basis, cutoff, bland=False):
        m, size = self.m, self.size
        cols = list(basis.cols)
        inv = [list(r) for r in basis.inv]
        det = basis.det

        def allowed(cid):
            if cid < m:
                return True
            s = cid - m
            return bool(allow_v[s - size]) if s >= size else bool(allow_u[s])

        def cost(cid):
            return 1 if m <= cid < m + size else 0

        def pivot(r, q, g):
            nonlocal det
            gr = g[r]
            pr = inv[r]
            for i in range(m):
                if i != r:
                    gi = g[i]
                    row = inv[i]
                    if gi:
                        inv[i] = [(gr * a - gi * b) // det for a, b in zip(row, pr)]
                    else:
                        inv[i] = [(gr * a) // det for a in row]
            det = gr
            if det < 0:
                det = -det
                for i in range(m):
                    inv[i] = [-a for a in inv[i]]
            cols[r] = q

        def ftran(q):
            col = self.column(q)
            return [sum(a * b for a, b in zip(row, col) if b) for row in inv]

        steps = 0
        degenerate = 0
        limit = 50 * (m + 10) * (m + 10)
        while True:
            steps += 1
            if steps > limit:
                raise _Restart()
            xb = [row[0] for row in inv]  # B^-1 e_0, scaled by det
            basic = set(cols)
            # dual simplex repair: negative basics or forbidden basics above zero
            bad = None
            for r in range(m):
                if xb[r] < 0 or (xb[r] > 0 and not allowed(cols[r])):
                    if bad is None or cols[r] < cols[bad]:
                        bad = r
            priced = [inv[r] for r in range(m) if m <= cols[r] < m + size]
            y = [sum(col) for col in zip(*priced)] if priced else [0] * m
            if bad is not None:
                if cutoff is not None and self._price(y, det, allow_u, allow_v, basic, False) is None:
                    # dual feasible, so the current objective bounds the optimum from above
                    if Fraction(sum(xb[r] for r in range(m) if cost(cols[r])), det) <= cutoff:
                        return self._result("cutoff", cols, inv, det, allow_u, allow_v, cutoff)
                rho = inv[bad]
                want_negative = xb[bad] < 0
                q = self._dual_ratio(rho, y, det, want_negative, allow_u, allow_v, basic)
                if q is None:
                    raise _Restart()
                pivot(bad, q, ftran(q))
                continue
            q = self._price(y, det, allow_u, allow_v, basic, bland or degenerate > 2 * m)
            if q is None:
                return self._result(OPTIMAL, cols, inv, det, allow_u, allow_v, None)
            g = ftran(q)
            r, zero = None, False
            for i in range(m):
                gi = g[i]
                if not gi:
                    continue
                if not allowed(cols[i]):
                    cand = (Fraction(0), cols[i])
                elif gi > 0:
                    cand = (Fraction(xb[i], gi), cols[i])
                else:
                    continue
                if r is None or cand < best:
                    best, r = cand, i
            if r is None:
                raise ValueError("certificate LP unbounded; a coalition without members is allowed")
            degenerate = degenerate + 1 if best[0] == 0 else 0
            pivot(r, q, g)

    def _price(self, y, det, allow_u, allow_v, basic, bland):
        m, size = self.m, self.size
        z = self._transform(y)
        vals = self._coalition_values(z, det, y[0])
        rc_u = det - vals            # reduced cost * det for u columns
        rc_v = vals - y[0]           # for v columns
        cu = np.flatnonzero(allow_u & (rc_u > 0).astype(bool))
        cv = np.flatnonzero(allow_v & (rc_v > 0).astype(bool))
        cands = []
        for r in range(m):
            if -y[r] > 0 and r not in basic:
                cands.append((-y[r], r))
        if bland:
            ids = [r for _, r in cands]
            ids += [m + int(s) for s in cu if m + int(s) not in basic]
            ids += [m + size + int(t) for t in cv if m + size + int(t) not in basic]
            return min(ids) if ids else None
        best = None
        if cands:
            best = max(cands, key=lambda c: (c[0], -c[1]))
        if cu.size:
            i = int(cu[np.argmax(rc_u[cu])])
            val = int(rc_u[i])
            if m + i not in basic and (best is None or val > best[0]):
                best = (val, m + i)
        if cv.size:
            i = int(cv[np.argmax(rc_v[cv])])
            val = int(rc_v[i])
            if m + size + i not in basic and (best is None or val > best[0]):
                best = (val, m + size + i)
        return None if best is None else best[1]

    def _dual_ratio(self, rho, y, det, want_negative, allow_u, allow_v, basic):
        """Entering column for a dual simplex step on the row ``rho`` of B^-1."""
        m, size = self.m, self.size
        z = self._transform(y)
        zr = self._transform(rho)
        scal = [det, y[0], rho[0]] + [max(map(abs, zr), default=0)]
        vals = self._coalition_values(z, *scal)
        rvals = self._coalition_values(zr, *scal)
        if vals.dtype == object or rvals.dtype == object:
            vals, rvals = vals.astype(object), rvals.astype(object)
        # row entries alpha_q (scaled by det) and reduced costs (scaled by det, <= 0)
        alpha_u, rc_u = rvals, det - vals
        alpha_v, rc_v = rho[0] - rvals, vals - y[0]
        entries = []     # (numerator, denominator, column) of ratios -rc/|alpha|
        for r in range(m):
            if r in basic:
                continue
            a, rc = rho[r], -y[r]
            if (a < 0) if want_negative else (a > 0):
                entries.append((-rc, abs(a), r))
        for alpha, rc, offset, allow in ((alpha_u, rc_u, m, allow_u), (alpha_v, rc_v, m + size, allow_v)):
            sel = allow & ((alpha < 0) if want_negative else (alpha > 0)).astype(bool)
            idx = np.flatnonzero(sel)
            if not idx.size:
                continue
            ratios = np.abs(rc[idx].astype(float)) / np.abs(alpha[idx].astype(float))
            lo = ratios.min()
            near = idx[ratios <= lo * (1 + 1e-9) + 1e-12]
            for s in near:
                cid = offset + int(s)
                if cid in basic:
                    continue
                entries.append((-int(rc[s]), abs(int(alpha[s])), cid))
        if not entries:
            return None
        best = entries[0]
        for e in entries[1:]:
            lhs, rhs = e[0] * best[1], best[0] * e[1]
            if lhs < rhs or (lhs == rhs and e[2] < best[2]):
                best = e
        return best[2]

    def _result(self, status, cols, inv, det, allow_u, allow_v, cutoff):
        m, size = self.m, self.size
        u, v = {}, {}
        total = Fraction(0)
        for r, c in enumerate(cols):
            val = Fraction(inv[r][0], det)
            if c >= m and val:
                s = c - m
                if s >= size:
                    v[s - size] = val
                else:
                    u[s] = val
                    total += val
        y = tuple(Fraction(sum((1 if m <= cols[r] < m + size else 0) * inv[r][j] for r in range(m)), det)
                  for j in range(m))
        basis = Basis(tuple(cols), tuple(tuple(r) for r in inv), det)
        return CoalitionLpResult(status, total, basis, u, v, y)


class _Restart(Exception):
    pass
