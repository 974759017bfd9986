"""Exact-rational linear programming with primal/dual certificates.

A two-phase simplex over `fractions.Fraction` with Bland's anti-cycling
rule.  Optimal solutions come back with dual multipliers whose objective
equals the primal objective as a rational, with no tolerance; infeasible
and unbounded problems come back with a Farkas-type certificate ray.

On top of the solver sits a bilinear minimax over a vertex-polytope /
polytope pair.  The minimax value is computed twice, once per quantifier
order, and the two values are asserted to be exactly equal before being
returned; this is the finite-dimensional sup-inf exchange.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch, EmptyPolytope

ZERO = Fraction(0)
ONE = Fraction(1)

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = (LE, EQ, GE)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def __init__(self, coeffs: Iterable, relation: str, rhs):
        if relation not in _RELATIONS:
            raise ValueError(f"relation must be one of {_RELATIONS}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))
        object.__setattr__(self, "relation", relation)
        object.__setattr__(self, "rhs", Fraction(rhs))


@dataclass(frozen=True)
class LinearProgram:
    """General-form LP: optimize c.x subject to rows and per-variable bounds."""

    objective: tuple[Fraction, ...]
    sense: str  # "max" | "min"
    constraints: tuple[Constraint, ...]
    lower: tuple[Optional[Fraction], ...]
    upper: tuple[Optional[Fraction], ...]

    def __init__(
        self,
        objective: Iterable,
        sense: str,
        constraints: Sequence[Constraint],
        lower: Optional[Sequence] = None,
        upper: Optional[Sequence] = None,
    ):
        objective = tuple(Fraction(c) for c in objective)
        n = len(objective)
        if sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        constraints = tuple(constraints)
        for row in constraints:
            if len(row.coeffs) != n:
                raise DimensionMismatch(
                    f"constraint has {len(row.coeffs)} coefficients, expected {n}"
                )
        lo = tuple(
            None if b is None else Fraction(b)
            for b in (lower if lower is not None else [None] * n)
        )
        up = tuple(
            None if b is None else Fraction(b)
            for b in (upper if upper is not None else [None] * n)
        )
        if len(lo) != n or len(up) != n:
            raise DimensionMismatch("one bound entry per variable required")
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "sense", sense)
        object.__setattr__(self, "constraints", constraints)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpSolution:
    """Solver output.

    For Optimal: `primal` is a feasible point, `dual` holds one multiplier
    per constraint row, `reduced_costs` one per variable (zero for free
    variables), and primal and dual objectives agree exactly in `value`.
    For Infeasible, `dual` carries a Farkas certificate over the rows; for
    Unbounded, `primal` carries an improving ray.
    """

    status: str  # "Optimal" | "Infeasible" | "Unbounded"
    primal: tuple[Fraction, ...] = ()
    dual: tuple[Fraction, ...] = ()
    value: Optional[Fraction] = None
    reduced_costs: tuple[Fraction, ...] = ()
    upper_dual: tuple[Fraction, ...] = ()


# ---------------------------------------------------------------------------
# simplex
# ---------------------------------------------------------------------------


class _Tableau:
    """Dense simplex tableau for min c.z, A z = b, z >= 0 over Fractions."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], ncols: int):
        self.A = rows
        self.b = rhs
        self.m = len(rows)
        self.ncols = ncols
        # artificial columns are ncols .. ncols+m-1, identity basis
        self.basis = [ncols + i for i in range(self.m)]
        for i in range(self.m):
            row = self.A[i]
            row.extend(ONE if j == i else ZERO for j in range(self.m))
        self.total = ncols + self.m

    def pivot(self, r: int, j: int, red: list[Fraction], const: list[Fraction]) -> None:
        A, b = self.A, self.b
        piv = A[r][j]
        inv = ONE / piv
        A[r] = [a * inv for a in A[r]]
        b[r] *= inv
        prow = A[r]
        for k in range(self.m):
            if k == r:
                continue
            f = A[k][j]
            if f:
                A[k] = [a - f * p for a, p in zip(A[k], prow)]
                b[k] -= f * b[r]
        f = red[j]
        if f:
            for c in range(self.total):
                red[c] -= f * prow[c]
            const[0] -= f * b[r]
        self.basis[r] = j

    def reduced_costs(self, cost: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
        # cost has length total; returns (reduced row, [objective constant])
        red = list(cost)
        const = [ZERO]
        for r, bv in enumerate(self.basis):
            f = red[bv]
            if f:
                prow = self.A[r]
                for c in range(self.total):
                    red[c] -= f * prow[c]
                const[0] -= f * self.b[r]
        return red, const

    def run(
        self,
        cost: list[Fraction],
        allow_enter: list[bool],
    ) -> tuple[str, list[Fraction], list[Fraction], Optional[int]]:
        """Bland-rule simplex; returns (status, reduced_row, const, entering).

        status "optimal" or "unbounded"; on "unbounded" `entering` is the
        column whose increase improves without bound.
        """
        red, const = self.reduced_costs(cost)
        while True:
            enter = -1
            for j in range(self.total):
                if allow_enter[j] and red[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal", red, const, None
            leave = -1
            best: Optional[Fraction] = None
            for r in range(self.m):
                a = self.A[r][enter]
                if a > 0:
                    ratio = self.b[r] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[r] < self.basis[leave])
                    ):
                        best = ratio
                        leave = r
            if leave < 0:
                return "unbounded", red, const, enter
            self.pivot(leave, enter, red, const)


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Exact two-phase simplex with Bland's rule and dual extraction."""
    n = lp.num_vars
    minimize = lp.sense == "min"
    c = [f if minimize else -f for f in lp.objective]

    # Variable handling: a lower bound is shifted away (x = lo + u, u >= 0);
    # an unbounded-below variable is split into u+ - u-; an upper bound
    # becomes an appended constraint row.  Column map entries are
    # (var, sign) pairs contributing sign * z_col to x_var.
    col_of_var: list[list[tuple[int, int]]] = []
    shift = [ZERO] * n
    cols: list[tuple[int, int]] = []
    for j in range(n):
        if lp.lower[j] is not None:
            shift[j] = lp.lower[j]
            col_of_var.append([(len(cols), 1)])
            cols.append((j, 1))
        else:
            col_of_var.append([(len(cols), 1), (len(cols) + 1, -1)])
            cols.append((j, 1))
            cols.append((j, -1))

    rows: list[tuple[tuple[Fraction, ...], str, Fraction]] = [
        (row.coeffs, row.relation, row.rhs) for row in lp.constraints
    ]
    upper_rows: list[int] = []  # variable index per appended upper row
    for j in range(n):
        if lp.upper[j] is not None:
            unit = tuple(ONE if k == j else ZERO for k in range(n))
            rows.append((unit, LE, lp.upper[j]))
            upper_rows.append(j)
    m = len(rows)

    nz = len(cols)
    # slack columns: one per inequality row
    slack_of_row: list[Optional[int]] = []
    nslack = 0
    for _, rel, _ in rows:
        if rel == EQ:
            slack_of_row.append(None)
        else:
            slack_of_row.append(nz + nslack)
            nslack += 1
    ncols = nz + nslack

    tab_rows: list[list[Fraction]] = []
    tab_rhs: list[Fraction] = []
    flip: list[int] = []
    for r, (coeffs, rel, rhs) in enumerate(rows):
        row = [ZERO] * ncols
        for col, (j, s) in enumerate(cols):
            if coeffs[j]:
                row[col] = s * coeffs[j]
        sc = slack_of_row[r]
        if sc is not None:
            row[sc] = ONE if rel == LE else -ONE
        b = rhs - sum(coeffs[j] * shift[j] for j in range(n))
        if b < 0:
            row = [-a for a in row]
            b = -b
            flip.append(-1)
        else:
            flip.append(1)
        tab_rows.append(row)
        tab_rhs.append(b)

    tab = _Tableau(tab_rows, tab_rhs, ncols)
    total = tab.total

    # phase 1
    cost1 = [ZERO] * ncols + [ONE] * m
    allow = [True] * total
    status, red1, _const1, _ = tab.run(cost1, allow)
    assert status == "optimal"
    phase1_value = sum(
        tab.b[r] for r in range(m) if tab.basis[r] >= ncols
    )
    if phase1_value > 0:
        # Farkas certificate: multipliers from phase-1 reduced costs of the
        # artificial columns, mapped back through the row flips.
        lam = [flip[i] * (ONE - red1[ncols + i]) for i in range(m)]
        return LpSolution(status="Infeasible", dual=tuple(lam[: len(lp.constraints)]))

    # drive artificials out of the basis where possible (zero-level pivots)
    red_dummy = [ZERO] * total
    const_dummy = [ZERO]
    for r in range(m):
        if tab.basis[r] >= ncols:
            for j in range(ncols):
                if tab.A[r][j]:
                    tab.pivot(r, j, red_dummy, const_dummy)
                    break

    # phase 2: artificial columns stay in the tableau (they carry the dual
    # multipliers) but may not enter
    cost2 = [ZERO] * total
    for col, (j, s) in enumerate(cols):
        cost2[col] = s * c[j]
    allow2 = [True] * ncols + [False] * m
    status, red2, const2, enter = tab.run(cost2, allow2)

    if status == "unbounded":
        assert enter is not None
        ray = [ZERO] * n
        if enter < nz:
            j, s = cols[enter]
            ray[j] += s
        for r in range(m):
            a = tab.A[r][enter]
            bv = tab.basis[r]
            if a and bv < nz:
                vj, vs = cols[bv]
                ray[vj] += vs * (-a)
        return LpSolution(status="Unbounded", primal=tuple(ray))

    # optimal: recover primal, duals, reduced costs
    z = [ZERO] * total
    for r, bv in enumerate(tab.basis):
        z[bv] = tab.b[r]
    x = list(shift)
    for col, (j, s) in enumerate(cols):
        x[j] += s * z[col]

    obj_shift = sum(c[j] * shift[j] for j in range(n))
    value_min = -const2[0] + obj_shift
    value = value_min if minimize else -value_min

    lam = [-red2[ncols + i] for i in range(m)]  # artificial cost 0 in phase 2
    lam = [flip[i] * lam[i] for i in range(m)]
    if not minimize:
        lam = [-v for v in lam]
    dual = tuple(lam[: len(lp.constraints)])
    upper_dual_full = [ZERO] * n
    for k, j in enumerate(upper_rows):
        upper_dual_full[j] = lam[len(lp.constraints) + k]

    reduced = [ZERO] * n
    for j in range(n):
        r = lp.objective[j] - sum(
            lam[i] * rows[i][0][j] for i in range(m)
        )
        reduced[j] = r

    sol = LpSolution(
        status="Optimal",
        primal=tuple(x),
        dual=dual,
        value=value,
        reduced_costs=tuple(reduced),
        upper_dual=tuple(upper_dual_full),
    )
    check_optimal(lp, sol)
    return sol


def check_optimal(lp: LinearProgram, sol: LpSolution) -> None:
    """Exact verification of an Optimal solution against the original LP.

    Checks primal feasibility, dual sign conventions, stationarity of the
    reduced costs, and equality of primal and dual objectives; raises
    AssertionError on any exact violation.
    """
    assert sol.status == "Optimal"
    n = lp.num_vars
    x = sol.primal
    for row in lp.constraints:
        lhs = sum(a * v for a, v in zip(row.coeffs, x))
        if row.relation == LE:
            assert lhs <= row.rhs, "primal infeasible (<= row)"
        elif row.relation == GE:
            assert lhs >= row.rhs, "primal infeasible (>= row)"
        else:
            assert lhs == row.rhs, "primal infeasible (= row)"
    for j in range(n):
        if lp.lower[j] is not None:
            assert x[j] >= lp.lower[j], "primal below lower bound"
        if lp.upper[j] is not None:
            assert x[j] <= lp.upper[j], "primal above upper bound"

    maximize = lp.sense == "max"
    # row multipliers: for max, y >= 0 on <= rows, y <= 0 on >= rows
    for y, row in zip(sol.dual, lp.constraints):
        if row.relation == LE:
            assert (y >= 0) if maximize else (y <= 0), "dual sign (<= row)"
        elif row.relation == GE:
            assert (y <= 0) if maximize else (y >= 0), "dual sign (>= row)"
    for j in range(n):
        mu_up = sol.upper_dual[j]
        if lp.upper[j] is None:
            assert mu_up == 0
        else:
            assert (mu_up >= 0) if maximize else (mu_up <= 0), "dual sign (upper)"
        r = (
            lp.objective[j]
            - sum(y * row.coeffs[j] for y, row in zip(sol.dual, lp.constraints))
            - mu_up
        )
        assert r == sol.reduced_costs[j], "stored reduced cost mismatch"
        if lp.lower[j] is None:
            assert r == 0, "free variable has nonzero reduced cost"
        else:
            assert (r <= 0) if maximize else (r >= 0), "reduced cost sign"

    dual_obj = sum(y * row.rhs for y, row in zip(sol.dual, lp.constraints))
    dual_obj += sum(
        mu * up
        for mu, up in zip(sol.upper_dual, lp.upper)
        if up is not None
    )
    for j in range(n):
        if lp.lower[j] is not None:
            r = (
                lp.objective[j]
                - sum(y * row.coeffs[j] for y, row in zip(sol.dual, lp.constraints))
                - sol.upper_dual[j]
            )
            dual_obj += r * lp.lower[j]
    primal_obj = sum(cj * xj for cj, xj in zip(lp.objective, x))
    assert primal_obj == sol.value, "stored value differs from primal objective"
    assert dual_obj == sol.value, "strong duality gap"


# ---------------------------------------------------------------------------
# rational linear algebra helpers
# ---------------------------------------------------------------------------


def solve_square(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve a square rational system by Gaussian elimination.

    Returns the solution vector or None when the matrix is singular.
    """
    n = len(rhs)
    A = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        inv = ONE / A[col][col]
        A[col] = [a * inv for a in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [a - f * p for a, p in zip(A[r], A[col])]
    return [A[r][n] for r in range(n)]


def matrix_rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(r) for r in matrix]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = ONE / rows[rank][col]
        rows[rank] = [a * inv for a in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * p for a, p in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def enumerate_basic_feasible(
    eq_rows: Sequence[Sequence[Fraction]], eq_rhs: Sequence[Fraction]
) -> list[tuple[Fraction, ...]]:
    """Vertices of {q >= 0 : A q = b} via basis enumeration.

    Desk-scale method: every column subset of size rank(A) is tried as a
    basis; duplicate vertices are removed.
    """
    nvars = len(eq_rows[0])
    # reduce to an independent subset of rows; bail out if inconsistent
    work = [list(row) + [b] for row, b in zip(eq_rows, eq_rhs)]
    indep: list[int] = []
    rank = 0
    for col in range(nvars):
        piv = next(
            (r for r in range(len(work)) if r >= rank and work[r][col] != 0), None
        )
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = ONE / work[rank][col]
        work[rank] = [a * inv for a in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                f = work[r][col]
                work[r] = [a - f * p for a, p in zip(work[r], work[rank])]
        rank += 1
    if any(all(a == 0 for a in row[:nvars]) and row[nvars] != 0 for row in work):
        return []
    A_ind = [row[:nvars] for row in work[:rank]]
    b_ind = [row[nvars] for row in work[:rank]]
    if rank == 0:
        return [tuple([ZERO] * nvars)]

    seen: set[tuple[Fraction, ...]] = set()
    out: list[tuple[Fraction, ...]] = []
    for basis in combinations(range(nvars), rank):
        square = [[row[j] for j in basis] for row in A_ind]
        sol = solve_square(square, b_ind)
        if sol is None or any(v < 0 for v in sol):
            continue
        q = [ZERO] * nvars
        for j, v in zip(basis, sol):
            q[j] = v
        key = tuple(q)
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


# ---------------------------------------------------------------------------
# bilinear minimax
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexPolytope:
    vertices: tuple[tuple[Fraction, ...], ...]

    def __init__(self, vertices: Iterable[Iterable]):
        vs = tuple(tuple(Fraction(v) for v in vert) for vert in vertices)
        object.__setattr__(self, "vertices", vs)

    @property
    def dim(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0


@dataclass(frozen=True)
class HPolytope:
    """Polytope over free variables given purely by constraint rows."""

    dim: int
    constraints: tuple[Constraint, ...]

    def __init__(self, dim: int, constraints: Sequence[Constraint]):
        constraints = tuple(constraints)
        for row in constraints:
            if len(row.coeffs) != dim:
                raise DimensionMismatch("constraint dimension mismatch")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "constraints", constraints)


@dataclass(frozen=True)
class MinimaxInstance:
    """Bilinear game f(x, y) = y . B x over x in X (vertices), y in Y."""

    payoff: tuple[tuple[Fraction, ...], ...]
    X: VertexPolytope
    Y: object  # VertexPolytope | HPolytope

    def __init__(self, payoff: Iterable[Iterable], X: VertexPolytope, Y):
        B = tuple(tuple(Fraction(v) for v in row) for row in payoff)
        object.__setattr__(self, "payoff", B)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)


@dataclass(frozen=True)
class MinimaxResult:
    value: Fraction
    x_star: tuple[Fraction, ...]
    x_weights: tuple[Fraction, ...]
    y_star: tuple[Fraction, ...]


def _bx(B, x):
    return tuple(sum(row[j] * x[j] for j in range(len(x))) for row in B)


def minimax_value(inst: MinimaxInstance) -> MinimaxResult:
    """Common value of sup_x inf_y and inf_y sup_x of y.Bx, computed as two
    LPs (the inner problem of each order is dualized or vertex-enumerated);
    their exact equality is asserted before returning."""
    B = inst.payoff
    xverts = inst.X.vertices
    if not xverts:
        raise EmptyPolytope("X has no vertices")
    ydim = len(B)
    for row in B:
        if len(row) != inst.X.dim:
            raise DimensionMismatch("payoff columns must match X dimension")

    bx_list = [_bx(B, x) for x in xverts]  # B x_k, one per X vertex

    # Route 1: inf over y of max over X-vertices  (sup over a polytope of a
    # linear functional is a max over its vertices)
    if isinstance(inst.Y, VertexPolytope):
        yverts = inst.Y.vertices
        if not yverts:
            raise EmptyPolytope("Y has no vertices")
        L = len(yverts)
        # variables (mu_1..mu_L, s): min s, s >= sum_l mu_l (v_l . B x_k)
        cons = []
        for bx in bx_list:
            coeffs = [-sum(v[i] * bx[i] for i in range(ydim)) for v in yverts]
            cons.append(Constraint(coeffs + [ONE], GE, 0))
        cons.append(Constraint([ONE] * L + [ZERO], EQ, 1))
        lp1 = LinearProgram(
            objective=[ZERO] * L + [ONE],
            sense="min",
            constraints=cons,
            lower=[ZERO] * L + [None],
        )
        sol1 = solve_lp(lp1)
        if sol1.status != "Optimal":
            raise EmptyPolytope("inner minimization over Y failed")
        mu = sol1.primal[:L]
        y_star = tuple(
            sum(mu[l] * yverts[l][i] for l in range(L)) for i in range(ydim)
        )
        value1 = sol1.value
    else:
        Y: HPolytope = inst.Y
        if Y.dim != ydim:
            raise DimensionMismatch("payoff rows must match Y dimension")
        # variables (y, s): min s subject to s >= y . B x_k and y in Y
        cons = []
        for bx in bx_list:
            cons.append(Constraint([-v for v in bx] + [ONE], GE, 0))
        for row in Y.constraints:
            cons.append(Constraint(list(row.coeffs) + [ZERO], row.relation, row.rhs))
        lp1 = LinearProgram(
            objective=[ZERO] * ydim + [ONE],
            sense="min",
            constraints=cons,
        )
        sol1 = solve_lp(lp1)
        if sol1.status == "Infeasible":
            raise EmptyPolytope("Y is empty")
        if sol1.status != "Optimal":
            raise EmptyPolytope("inner minimization over Y unbounded")
        y_star = sol1.primal[:ydim]
        value1 = sol1.value

    # Route 2: sup over conv(X) of inf over y, with the inner inf dualized
    K = len(xverts)
    if isinstance(inst.Y, VertexPolytope):
        yverts = inst.Y.vertices
        # max t s.t. t <= v_l . B (X lambda), sum lambda = 1
        cons = []
        for v in yverts:
            coeffs = [
                sum(v[i] * bx_list[k][i] for i in range(ydim)) for k in range(K)
            ]
            cons.append(Constraint(coeffs + [-ONE], GE, 0))
        cons.append(Constraint([ONE] * K + [ZERO], EQ, 1))
        lp2 = LinearProgram(
            objective=[ZERO] * K + [ONE],
            sense="max",
            constraints=cons,
            lower=[ZERO] * K + [None],
        )
        sol2 = solve_lp(lp2)
        if sol2.status != "Optimal":
            raise EmptyPolytope("outer maximization over X failed")
        lam = sol2.primal[:K]
        value2 = sol2.value
    else:
        Y = inst.Y
        R = len(Y.constraints)
        # inner LP (y free):  min (Bx) . y  s.t.  a_r . y rel_r b_r
        # its dual: max sum_r mu_r b_r  s.t.  sum_r mu_r a_r = Bx,
        #           mu_r <= 0 for <=, free for =, >= 0 for >=
        # combined with x = sum_k lambda_k x_k:
        cons = []
        for i in range(ydim):
            coeffs = [Y.constraints[r].coeffs[i] for r in range(R)]
            coeffs += [-bx_list[k][i] for k in range(K)]
            cons.append(Constraint(coeffs, EQ, 0))
        cons.append(Constraint([ZERO] * R + [ONE] * K, EQ, 1))
        lower: list[Optional[Fraction]] = []
        upper: list[Optional[Fraction]] = []
        for r in range(R):
            rel = Y.constraints[r].relation
            lower.append(ZERO if rel == GE else None)
            upper.append(ZERO if rel == LE else None)
        lower += [ZERO] * K
        upper += [None] * K
        lp2 = LinearProgram(
            objective=[row.rhs for row in Y.constraints] + [ZERO] * K,
            sense="max",
            constraints=cons,
            lower=lower,
            upper=upper,
        )
        sol2 = solve_lp(lp2)
        if sol2.status == "Infeasible":
            raise EmptyPolytope("inner problem over Y is unbounded below")
        if sol2.status != "Optimal":
            raise EmptyPolytope("outer maximization over X failed")
        lam = sol2.primal[R : R + K]
        value2 = sol2.value

    assert value1 == value2, "minimax exchange failed: sup-inf != inf-sup"
    x_star = tuple(
        sum(lam[k] * xverts[k][j] for k in range(K)) for j in range(inst.X.dim)
    )
    return MinimaxResult(
        value=value1, x_star=x_star, x_weights=tuple(lam), y_star=tuple(y_star)
    )
