"""One-period robust market: no-arbitrage, martingale measures, superhedging.

The market carries a deterministic initial price vector, a payoff matrix
over the outcomes and a polytope of candidate laws.  All verdicts come
with machine-checkable witnesses: an explicit arbitrage strategy, the
vertex list of the martingale-measure polytope, or a superhedge whose
price is cross-checked against vertex enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (
    DimensionMismatch,
    EmptyMartingalePolytope,
    EnumerationCapExceeded,
    NaViolated,
)
from .lp_core import (
    Constraint,
    EQ,
    GE,
    LinearProgram,
    enumerate_basic_feasible,
    solve_lp,
)
from .measures import (
    AmbiguitySet,
    BoundedFunction,
    ProbabilityMeasure,
    SampleSpace,
    quasi_sure_support,
)

DEFAULT_MAX_ENUM = 20

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Market:
    """One-period market: d assets, outcome-indexed payoffs, ambiguity set."""

    space: SampleSpace
    d: int
    s0: tuple[Fraction, ...]
    s1: tuple[tuple[Fraction, ...], ...]  # |outcomes| rows x d columns
    P: AmbiguitySet

    def __init__(
        self,
        space: SampleSpace,
        s0: Iterable,
        s1: Iterable[Iterable],
        P: AmbiguitySet,
    ):
        s0 = tuple(Fraction(v) for v in s0)
        s1 = tuple(tuple(Fraction(v) for v in row) for row in s1)
        d = len(s0)
        if len(s1) != space.size or any(len(row) != d for row in s1):
            raise DimensionMismatch("payoff matrix must be |outcomes| x d")
        if P.space != space:
            raise DimensionMismatch("ambiguity set on a different space")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "s0", s0)
        object.__setattr__(self, "s1", s1)
        object.__setattr__(self, "P", P)

    def delta_s(self, outcome: str) -> tuple[Fraction, ...]:
        row = self.s1[self.space.index(outcome)]
        return tuple(x - y for x, y in zip(row, self.s0))

    def gain(self, H: Sequence[Fraction], outcome: str) -> Fraction:
        return sum(
            (h * d for h, d in zip(H, self.delta_s(outcome))), ZERO
        )

    @property
    def support(self) -> tuple[str, ...]:
        sup = quasi_sure_support(self.P)
        return tuple(o for o in self.space.outcomes if o in sup)


@dataclass(frozen=True)
class ArbitrageWitness:
    H: tuple[Fraction, ...]
    strict_outcome: str


@dataclass(frozen=True)
class MartingalePolytope:
    """All probability measures on the quasi-sure support with zero expected
    increments, given by the vertex list of the defining polytope."""

    market: Market
    vertices: tuple[ProbabilityMeasure, ...]

    def contains(self, q: ProbabilityMeasure) -> bool:
        m = self.market
        support = set(m.support)
        if any(
            mass > 0 and o not in support
            for o, mass in zip(q.space.outcomes, q.mass)
        ):
            return False
        if sum(q.mass) != 1 or any(mass < 0 for mass in q.mass):
            return False
        for i in range(m.d):
            if sum(
                q.mass_of(o) * m.delta_s(o)[i] for o in support
            ) != 0:
                return False
        return True


@dataclass(frozen=True)
class HedgeCertificate:
    price: Fraction
    H: tuple[Fraction, ...]
    payoff: BoundedFunction
    attaining_q: ProbabilityMeasure


def check_na(m: Market) -> tuple[bool, Optional[ArbitrageWitness]]:
    """Robust no-arbitrage: no H with nonnegative gain quasi-surely and a
    strictly positive gain on a support outcome.

    The arbitrage cone is scale invariant, so H is normalized into the box
    [-1, 1]^d to keep each LP bounded; one LP per candidate strict outcome.
    """
    support = m.support
    if m.d == 0:
        return True, None
    base = [
        Constraint(m.delta_s(o), GE, 0) for o in support
    ]
    lower = [-ONE] * m.d
    upper = [ONE] * m.d
    for o in support:
        lp = LinearProgram(m.delta_s(o), "max", base, lower=lower, upper=upper)
        sol = solve_lp(lp)
        assert sol.status == "Optimal"
        if sol.value > 0:
            return False, ArbitrageWitness(H=sol.primal, strict_outcome=o)
    return True, None


def martingale_polytope(
    m: Market, max_enum: int = DEFAULT_MAX_ENUM
) -> MartingalePolytope:
    """Vertex list of {q >= 0 on the support, sum q = 1, E_q[increments] = 0}.

    Basis enumeration over all candidate active sets; adequate and exact at
    desk scale.
    """
    support = m.support
    if len(support) > max_enum:
        raise EnumerationCapExceeded(len(support), max_enum)
    n = len(support)
    rows = [[ONE] * n]
    rhs = [ONE]
    for i in range(m.d):
        rows.append([m.delta_s(o)[i] for o in support])
        rhs.append(ZERO)
    verts = enumerate_basic_feasible(rows, rhs)
    measures = []
    for q in verts:
        mass = [ZERO] * m.space.size
        for o, v in zip(support, q):
            mass[m.space.index(o)] = v
        measures.append(ProbabilityMeasure(m.space, mass))
    return MartingalePolytope(market=m, vertices=tuple(measures))


def find_dominating_martingale(
    m: Market, vertex_p: ProbabilityMeasure
) -> Optional[ProbabilityMeasure]:
    """A martingale measure Q with Q > 0 on the support of vertex_p, if any.

    Maximizes the minimal mass t on supp(vertex_p) subject to the
    martingale constraints; vertex_p << Q exactly when the optimum is
    positive.
    """
    support = m.support
    n = len(support)
    p_support = [o for o in support if vertex_p.mass_of(o) > 0]
    if vertex_p.support - set(support):
        return None
    # variables: q over support, then t
    cons = [Constraint([ONE] * n + [ZERO], EQ, 1)]
    for i in range(m.d):
        cons.append(
            Constraint([m.delta_s(o)[i] for o in support] + [ZERO], EQ, 0)
        )
    for o in p_support:
        row = [ONE if s == o else ZERO for s in support] + [-ONE]
        cons.append(Constraint(row, GE, 0))
    lp = LinearProgram(
        [ZERO] * n + [ONE],
        "max",
        cons,
        lower=[ZERO] * n + [None],
        upper=[None] * n + [ONE],
    )
    sol = solve_lp(lp)
    if sol.status != "Optimal" or sol.value <= 0:
        return None
    mass = [ZERO] * m.space.size
    for o, v in zip(support, sol.primal[:n]):
        mass[m.space.index(o)] = v
    return ProbabilityMeasure(m.space, mass)


def check_ftap(
    m: Market,
) -> tuple[bool, list[tuple[ProbabilityMeasure, Optional[ProbabilityMeasure]]]]:
    """Both sides of the one-period FTAP equivalence, reported per P-vertex.

    The verdicts must agree (no-arbitrage holds iff every P-vertex admits a
    martingale measure dominating it); their agreement is asserted.
    """
    na_holds, _ = check_na(m)
    per_vertex = []
    all_dominated = True
    for vp in m.P.vertices:
        q = find_dominating_martingale(m, vp)
        per_vertex.append((vp, q))
        if q is None:
            all_dominated = False
    assert na_holds == all_dominated, "FTAP equivalence failed on this market"
    return na_holds == all_dominated, per_vertex


def superhedge(
    m: Market, f: BoundedFunction, max_enum: int = DEFAULT_MAX_ENUM
) -> HedgeCertificate:
    """Least price x admitting H with x + H . increments >= f quasi-surely.

    The LP dual produces a martingale measure attaining sup E_Q[f]; the
    price is additionally cross-checked against the vertex-enumerated
    martingale polytope, exactly.
    """
    na_holds, _ = check_na(m)
    if not na_holds:
        raise NaViolated("superhedging duality requires no-arbitrage")
    if f.space != m.space:
        raise DimensionMismatch("payoff on a different space")
    support = m.support
    # variables: (x, H); minimize x subject to x + H . dS(o) >= f(o)
    cons = [
        Constraint((ONE,) + m.delta_s(o), GE, f.value_at(o)) for o in support
    ]
    lp = LinearProgram([ONE] + [ZERO] * m.d, "min", cons)
    sol = solve_lp(lp)
    assert sol.status == "Optimal", "superhedging LP must be solvable under NA"
    price = sol.value
    H = sol.primal[1:]
    q_mass = [ZERO] * m.space.size
    for o, y in zip(support, sol.dual):
        q_mass[m.space.index(o)] = y
    attaining = ProbabilityMeasure(m.space, q_mass)

    poly = martingale_polytope(m, max_enum)
    if not poly.vertices:
        raise EmptyMartingalePolytope("no martingale measure under NA?")
    assert poly.contains(attaining), "dual solution is not a martingale measure"
    best = max(v.expectation(f) for v in poly.vertices)
    assert best == price, "LP price differs from vertex-enumeration price"
    assert attaining.expectation(f) == price
    for o in support:
        assert price + m.gain(H, o) >= f.value_at(o)
    return HedgeCertificate(price=price, H=H, payoff=f, attaining_q=attaining)
