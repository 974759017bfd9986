"""Quantitative Halmos-Savage machinery with constructive witnesses.

Hypothesis checking over all events (by exhaustive subset enumeration of
the quasi-sure support), the primal/dual test-function polytopes, the
inf-sup / sup-inf values of the expectation game, and witness measures
that are verified exhaustively before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from .errors import (
    BoundViolated,
    DimensionMismatch,
    EnumerationCapExceeded,
    HypothesisViolated,
)
from .lp_core import (
    Constraint,
    GE,
    HPolytope,
    LE,
    MinimaxInstance,
    MinimaxResult,
    VertexPolytope,
    minimax_value,
)
from .measures import (
    AmbiguitySet,
    ProbabilityMeasure,
    dominated_by,
    mix,
    quasi_sure_support,
)

DEFAULT_MAX_ENUM = 20

#: Sentinel for "no event qualifies": a value no probability can reach.
NO_QUALIFYING_SET = Fraction(2)

PRIMAL, DUAL = "primal", "dual"


@dataclass(frozen=True)
class HsInstance:
    """A pair of ambiguity sets with quantitative levels epsilon, delta."""

    space: object
    P: AmbiguitySet
    Q: AmbiguitySet
    epsilon: Fraction
    delta: Fraction

    def __init__(self, P: AmbiguitySet, Q: AmbiguitySet, epsilon, delta):
        epsilon, delta = Fraction(epsilon), Fraction(delta)
        if P.space != Q.space:
            raise DimensionMismatch("P and Q live on different spaces")
        if not (0 < epsilon < 1) or not (0 < delta < 1):
            raise ValueError("epsilon and delta must lie in (0, 1)")
        for v in Q.vertices:
            if not dominated_by(v, P):
                raise ValueError(
                    "every Q-vertex must be dominated by the P ambiguity set"
                )
        object.__setattr__(self, "space", P.space)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "epsilon", epsilon)
        object.__setattr__(self, "delta", delta)


@dataclass(frozen=True)
class HsWitness:
    """Mixture over Q-vertices certifying a quantitative conclusion.

    Primal kind: every event A with forVertexP(A) >= 2*epsilon carries
    q_star mass >= guaranteed_bound.  Dual kind: every event with
    forVertexP(A) < epsilon*delta carries q_star mass < guaranteed_bound.
    """

    kind: str
    for_vertex_p: ProbabilityMeasure
    q_star: ProbabilityMeasure
    weights: tuple[Fraction, ...]
    guaranteed_bound: Fraction


def _support_subsets(support: tuple[str, ...], cap: int):
    if len(support) > cap:
        raise EnumerationCapExceeded(len(support), cap)
    n = len(support)
    for size in range(n + 1):
        for combo in combinations(support, size):
            yield frozenset(combo)


def _sorted_support(P: AmbiguitySet) -> tuple[str, ...]:
    sup = quasi_sure_support(P)
    return tuple(o for o in P.space.outcomes if o in sup)


def check_hypothesis_primal(
    inst: HsInstance, max_enum: int = DEFAULT_MAX_ENUM
) -> tuple[bool, frozenset[str]]:
    """Check: every event with some P-mass >= epsilon has some Q-mass >= delta.

    Linear functionals on a polytope attain their extremes at vertices, so
    "exists P in the set" is a max over P-vertices, same for Q.  Returns the
    verdict and the qualifying event whose best Q-mass is smallest.
    """
    support = _sorted_support(inst.P)
    holds = True
    worst: frozenset[str] = frozenset()
    worst_val: Optional[Fraction] = None
    for A in _support_subsets(support, max_enum):
        p_max = max(v(A) for v in inst.P.vertices)
        if p_max < inst.epsilon:
            continue
        q_max = max(v(A) for v in inst.Q.vertices)
        if worst_val is None or q_max < worst_val:
            worst_val = q_max
            worst = A
        if q_max < inst.delta:
            holds = False
    return holds, worst


def check_hypothesis_dual(
    inst: HsInstance, max_enum: int = DEFAULT_MAX_ENUM
) -> tuple[bool, frozenset[str]]:
    """Check: every event with some P-mass < delta has some Q-mass < epsilon.

    Returns the verdict and the qualifying event whose best (smallest)
    Q-mass is largest; on failure that event violates the condition.
    """
    support = _sorted_support(inst.P)
    holds = True
    worst: frozenset[str] = frozenset()
    worst_val: Optional[Fraction] = None
    for A in _support_subsets(support, max_enum):
        p_min = min(v(A) for v in inst.P.vertices)
        if not (p_min < inst.delta):
            continue
        q_min = min(v(A) for v in inst.Q.vertices)
        if worst_val is None or q_min > worst_val:
            worst_val = q_min
            worst = A
        if not (q_min < inst.epsilon):
            holds = False
    return holds, worst


def _d_set_polytope(
    inst: HsInstance, vertex_p: ProbabilityMeasure, kind: str
) -> tuple[tuple[str, ...], HPolytope]:
    """The primal/dual test-function polytope restricted to the support.

    Off-support coordinates are fixed to 0, so each h is a deterministic
    representative of its equivalence class modulo the polar set.
    """
    support = _sorted_support(inst.P)
    n = len(support)
    cons: list[Constraint] = []
    for i in range(n):
        unit = [Fraction(1) if j == i else Fraction(0) for j in range(n)]
        cons.append(Constraint(unit, GE, 0))
        cons.append(Constraint(unit, LE, 1))
    weights = [vertex_p.mass_of(o) for o in support]
    if kind == PRIMAL:
        cons.append(Constraint(weights, GE, 2 * inst.epsilon))
    elif kind == DUAL:
        cons.append(Constraint(weights, LE, inst.epsilon * inst.delta))
    else:
        raise ValueError("kind must be 'primal' or 'dual'")
    return support, HPolytope(n, cons)


def _q_vertex_polytope(inst: HsInstance, support: tuple[str, ...]) -> VertexPolytope:
    return VertexPolytope(
        [[v.mass_of(o) for o in support] for v in inst.Q.vertices]
    )


def _expectation_game(
    inst: HsInstance, vertex_p: ProbabilityMeasure, kind: str
) -> tuple[tuple[str, ...], MinimaxResult]:
    """Solve the expectation game between Q-mixtures and D-set functions.

    Primal kind returns the game for E_Q[h]; the dual kind is realized by
    negating the payoff, so the caller negates the value back.
    """
    support, dset = _d_set_polytope(inst, vertex_p, kind)
    n = len(support)
    sign = Fraction(1) if kind == PRIMAL else Fraction(-1)
    payoff = [
        [sign if i == j else Fraction(0) for j in range(n)] for i in range(n)
    ]
    res = minimax_value(
        MinimaxInstance(payoff, _q_vertex_polytope(inst, support), dset)
    )
    return support, res


def basic_lemma_value(
    inst: HsInstance, vertex_p: ProbabilityMeasure, kind: str
) -> Fraction:
    """Primal: inf over D-set h of sup over Q of E_Q[h].
    Dual: sup over the dual D-set of inf over Q of E_Q[h]."""
    _, res = _expectation_game(inst, vertex_p, kind)
    return res.value if kind == PRIMAL else -res.value


def construct_hs_witness(
    inst: HsInstance,
    vertex_p: ProbabilityMeasure,
    max_enum: int = DEFAULT_MAX_ENUM,
) -> HsWitness:
    """Witness measure for the primal quantitative conclusion.

    Solves sup over Q-mixtures of inf over the primal D-set of E_Q[h]; the
    attaining mixture guarantees Q(A) >= value for every event A with
    vertex_p(A) >= 2*epsilon, and the value is at least epsilon*delta/2.
    Both facts are verified before returning.
    """
    holds, _ = check_hypothesis_primal(inst, max_enum)
    if not holds:
        raise HypothesisViolated(
            "the primal epsilon-delta hypothesis fails on this instance"
        )
    threshold = 2 * inst.epsilon
    if threshold > 1:
        # no event can reach mass 2*epsilon; any mixture works vacuously
        k = len(inst.Q.vertices)
        weights = tuple(Fraction(1, k) for _ in range(k))
        q_star = mix(inst.Q.vertices, weights)
        return HsWitness(PRIMAL, vertex_p, q_star, weights, NO_QUALIFYING_SET)
    support, res = _expectation_game(inst, vertex_p, PRIMAL)
    bound = res.value
    if bound < inst.epsilon * inst.delta / 2:
        raise BoundViolated(
            f"sup-inf value {bound} below epsilon*delta/2 "
            f"= {inst.epsilon * inst.delta / 2}"
        )
    q_star = mix(inst.Q.vertices, res.x_weights)
    for A in _support_subsets(support, max_enum):
        if vertex_p(A) >= threshold and q_star(A) < bound:
            raise BoundViolated(f"witness fails on event {sorted(A)}")
    return HsWitness(PRIMAL, vertex_p, q_star, res.x_weights, bound)


def construct_dual_hs_witness(
    inst: HsInstance,
    vertex_p: ProbabilityMeasure,
    max_enum: int = DEFAULT_MAX_ENUM,
) -> HsWitness:
    """Witness measure for the dual quantitative conclusion.

    Solves inf over Q-mixtures of sup over the dual D-set of E_Q[h]; the
    value is at most (2 - epsilon) * epsilon, and the attaining mixture
    satisfies Q(A) < 2*epsilon whenever vertex_p(A) < epsilon*delta.
    """
    holds, _ = check_hypothesis_dual(inst, max_enum)
    if not holds:
        raise HypothesisViolated(
            "the dual epsilon-delta hypothesis fails on this instance"
        )
    support, res = _expectation_game(inst, vertex_p, DUAL)
    value = -res.value  # inf over Q of sup over the dual D-set
    if value > (2 - inst.epsilon) * inst.epsilon:
        raise BoundViolated(
            f"inf-sup value {value} above (2-epsilon)*epsilon "
            f"= {(2 - inst.epsilon) * inst.epsilon}"
        )
    q_star = mix(inst.Q.vertices, res.x_weights)
    bound = 2 * inst.epsilon
    strict = inst.epsilon * inst.delta
    for A in _support_subsets(support, max_enum):
        if vertex_p(A) < strict and not (q_star(A) < bound):
            raise BoundViolated(f"dual witness fails on event {sorted(A)}")
    return HsWitness(DUAL, vertex_p, q_star, res.x_weights, bound)


def hs_modulus(
    P: AmbiguitySet,
    Q: AmbiguitySet,
    epsilon,
    max_enum: int = DEFAULT_MAX_ENUM,
) -> Fraction:
    """Worst-case best Q-mass over events carrying P-mass at least epsilon.

    Returns min over qualifying events A of max over Q-vertices of Q(A);
    the sentinel value 2 (impossible for a probability) signals that no
    event qualifies.
    """
    epsilon = Fraction(epsilon)
    if P.space != Q.space:
        raise DimensionMismatch("P and Q live on different spaces")
    support = _sorted_support(P)
    best: Optional[Fraction] = None
    for A in _support_subsets(support, max_enum):
        if max(v(A) for v in P.vertices) < epsilon:
            continue
        q_max = max(v(A) for v in Q.vertices)
        if best is None or q_max < best:
            best = q_max
    return NO_QUALIFYING_SET if best is None else best


def indicator_restricted_value(
    inst: HsInstance,
    vertex_p: ProbabilityMeasure,
    max_enum: int = DEFAULT_MAX_ENUM,
) -> Optional[Fraction]:
    """Primal inf-sup restricted to indicator test functions.

    min over events A with vertex_p(A) >= 2*epsilon of max over Q-vertices
    of Q(A); None when no indicator is admissible.  Always an upper bound
    for the continuous D-set optimum.
    """
    support = _sorted_support(inst.P)
    best: Optional[Fraction] = None
    for A in _support_subsets(support, max_enum):
        if vertex_p(A) < 2 * inst.epsilon:
            continue
        q_max = max(v(A) for v in inst.Q.vertices)
        if best is None or q_max < best:
            best = q_max
    return best
