"""Quantitative domination: hypothesis checks, game values, witnesses,
and the modulus function."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from robust_ftap.errors import HypothesisViolated
from robust_ftap.halmos_savage import (
    NO_QUALIFYING_SET,
    HsInstance,
    basic_lemma_value,
    check_hypothesis_dual,
    check_hypothesis_primal,
    construct_dual_hs_witness,
    construct_hs_witness,
    hs_modulus,
    indicator_restricted_value,
)
from robust_ftap.measures import (
    AmbiguitySet,
    ProbabilityMeasure,
    SampleSpace,
    quasi_sure_support,
)

F = Fraction

W2 = SampleSpace(["w1", "w2"])


def pm(space, *mass):
    return ProbabilityMeasure(space, mass)


def amb(space, *vertices):
    return AmbiguitySet(space, [pm(space, *v) for v in vertices])


def all_events(support):
    support = sorted(support)
    for size in range(len(support) + 1):
        yield from (frozenset(c) for c in combinations(support, size))


class TestHsInstance:
    def test_levels_validated(self):
        P = amb(W2, (F(1, 2), F(1, 2)))
        with pytest.raises(ValueError):
            HsInstance(P, P, 0, F(1, 2))
        with pytest.raises(ValueError):
            HsInstance(P, P, F(1, 2), 1)

    def test_domination_required(self):
        P = amb(W2, (1, 0))
        Q = amb(W2, (F(1, 2), F(1, 2)))
        with pytest.raises(ValueError):
            HsInstance(P, Q, F(1, 2), F(1, 2))


class TestHypothesisPrimal:
    def test_dirac_pair(self):
        inst = HsInstance(
            amb(W2, (1, 0), (0, 1)), amb(W2, (F(1, 3), F(2, 3))), F(1, 2), F(1, 3)
        )
        holds, worst = check_hypothesis_primal(inst)
        assert holds
        assert worst == {"w1"}

    def test_singleton_enumeration(self):
        inst = HsInstance(
            amb(W2, (F(1, 2), F(1, 2))),
            amb(W2, (F(9, 10), F(1, 10))),
            F(2, 5),
            F(1, 10),
        )
        holds, worst = check_hypothesis_primal(inst)
        assert holds
        assert worst == {"w2"}

    def test_null_q_mass_fails(self):
        inst = HsInstance(
            amb(W2, (F(1, 2), F(1, 2))), amb(W2, (1, 0)), F(2, 5), F(1, 100)
        )
        holds, worst = check_hypothesis_primal(inst)
        assert not holds
        assert worst == {"w2"}


class TestHypothesisDual:
    def test_only_empty_set_qualifies(self):
        inst = HsInstance(
            amb(W2, (F(1, 2), F(1, 2))),
            amb(W2, (F(9, 10), F(1, 10)), (F(1, 10), F(9, 10))),
            F(3, 20),
            F(2, 5),
        )
        holds, _ = check_hypothesis_dual(inst)
        assert holds

    def test_dirac_q_fails(self):
        inst = HsInstance(
            amb(W2, (F(1, 2), F(1, 2))), amb(W2, (1, 0)), F(1, 2), F(3, 5)
        )
        holds, worst = check_hypothesis_dual(inst)
        assert not holds
        assert worst == {"w1"}

    def test_q_contains_p(self):
        rng = random.Random(41)
        for _ in range(50):
            n = rng.randint(1, 4)
            space = SampleSpace([f"o{i}" for i in range(n)])
            p_verts = [_random_measure(space, rng) for _ in range(rng.randint(1, 2))]
            P = AmbiguitySet(space, p_verts)
            # Q contains every P-vertex, so the qualifying P works as Q
            Q = AmbiguitySet(space, p_verts + [p_verts[0]])
            level = F(rng.randint(1, 5), 10)
            inst = HsInstance(P, Q, level, level)
            assert check_hypothesis_dual(inst)[0]
            assert check_hypothesis_primal(inst)[0]


def _random_measure(space, rng, denom=None):
    denom = denom or rng.randint(1, 10)
    counts = [0] * space.size
    for _ in range(denom):
        counts[rng.randrange(space.size)] += 1
    return ProbabilityMeasure(space, [F(c, denom) for c in counts])


def _random_instance(rng, max_outcomes=6):
    n = rng.randint(1, max_outcomes)
    space = SampleSpace([f"o{i}" for i in range(n)])
    p_verts = [_random_measure(space, rng) for _ in range(rng.randint(1, 3))]
    P = AmbiguitySet(space, p_verts)
    support = sorted(quasi_sure_support(P), key=space.index)
    q_verts = []
    for _ in range(rng.randint(1, 3)):
        denom = rng.randint(1, 10)
        counts = [0] * len(support)
        for _ in range(denom):
            counts[rng.randrange(len(support))] += 1
        mass = [F(0)] * n
        for o, c in zip(support, counts):
            mass[space.index(o)] = F(c, denom)
        q_verts.append(ProbabilityMeasure(space, mass))
    Q = AmbiguitySet(space, q_verts)
    eps = F(rng.randint(1, 5), 10)
    delta = F(rng.randint(1, 5), 10)
    return HsInstance(P, Q, eps, delta)


class TestBasicLemmaValue:
    def test_one_sided_q(self):
        inst = HsInstance(
            amb(W2, (F(1, 2), F(1, 2))),
            amb(W2, (F(9, 10), F(1, 10))),
            F(1, 4),
            F(1, 10),
        )
        assert basic_lemma_value(inst, inst.P.vertices[0], "primal") == F(1, 10)

    def test_q_equals_p(self):
        inst = HsInstance(
            amb(W2, (F(1, 2), F(1, 2))),
            amb(W2, (F(1, 2), F(1, 2))),
            F(1, 4),
            F(1, 10),
        )
        assert basic_lemma_value(inst, inst.P.vertices[0], "primal") == F(1, 2)

    def test_dirac_q_family(self):
        # Q = all Dirac measures on supp(P): sup over Q of E_Q[h] is the
        # max of h, and min max h over {E_P[h] >= 2*eps} is exactly 2*eps
        space = SampleSpace(["a", "b", "c"])
        P = amb(space, (F(1, 3), F(1, 3), F(1, 3)))
        Q = amb(space, (1, 0, 0), (0, 1, 0), (0, 0, 1))
        for eps in (F(1, 4), F(1, 10), F(2, 5)):
            inst = HsInstance(P, Q, eps, F(1, 2))
            assert basic_lemma_value(inst, P.vertices[0], "primal") == 2 * eps

    def test_conditional_bounds_randomized(self):
        rng = random.Random(7)
        primal_seen = dual_seen = 0
        while primal_seen < 40 or dual_seen < 40:
            inst = _random_instance(rng)
            if check_hypothesis_primal(inst)[0] and primal_seen < 40:
                primal_seen += 1
                for vp in inst.P.vertices:
                    value = basic_lemma_value(inst, vp, "primal")
                    assert value >= inst.epsilon * inst.delta
            if check_hypothesis_dual(inst)[0] and dual_seen < 40:
                dual_seen += 1
                for vp in inst.P.vertices:
                    value = basic_lemma_value(inst, vp, "dual")
                    assert value <= 2 * inst.epsilon

    def test_indicator_relaxation_consistency(self):
        rng = random.Random(17)
        for _ in range(60):
            inst = _random_instance(rng, max_outcomes=5)
            vp = inst.P.vertices[0]
            indicator = indicator_restricted_value(inst, vp)
            if indicator is None:
                continue
            continuous = basic_lemma_value(inst, vp, "primal")
            assert indicator >= continuous


class TestConstructWitness:
    def test_dirac_pair_witness(self):
        inst = HsInstance(
            amb(W2, (1, 0), (0, 1)), amb(W2, (F(1, 3), F(2, 3))), F(1, 2), F(1, 3)
        )
        w = construct_hs_witness(inst, inst.P.vertices[0])
        assert w.q_star.mass == (F(1, 3), F(2, 3))
        assert w.guaranteed_bound >= F(1, 12)  # epsilon*delta/2
        for A in all_events(["w1", "w2"]):
            if inst.P.vertices[0](A) >= 1:
                assert w.q_star(A) >= F(1, 3)

    def test_q_equals_p_single(self):
        # with Q = P a singleton, the hypothesis holds whenever delta <= eps
        # and the sup-inf value is inf{E_P[h] : E_P[h] >= 2*eps} = 2*eps
        P = amb(W2, (F(1, 2), F(1, 2)))
        for eps in (F(1, 10), F(1, 4), F(2, 5)):
            inst = HsInstance(P, P, eps, eps)
            w = construct_hs_witness(inst, P.vertices[0])
            assert w.q_star.mass == P.vertices[0].mass
            assert w.guaranteed_bound == 2 * eps

    def test_threshold_formula(self):
        eps, delta = F(1, 10), F(1, 5)
        assert eps * delta / 2 == F(1, 100)
        P = amb(W2, (F(1, 2), F(1, 2)))
        inst = HsInstance(P, P, eps, delta)
        w = construct_hs_witness(inst, P.vertices[0])
        assert w.guaranteed_bound >= F(1, 100)

    def test_precondition_enforced(self):
        inst = HsInstance(
            amb(W2, (F(1, 2), F(1, 2))), amb(W2, (1, 0)), F(2, 5), F(1, 100)
        )
        with pytest.raises(HypothesisViolated):
            construct_hs_witness(inst, inst.P.vertices[0])

    def test_witness_soundness_randomized(self):
        rng = random.Random(29)
        seen = 0
        while seen < 40:
            inst = _random_instance(rng)
            if not check_hypothesis_primal(inst)[0]:
                continue
            seen += 1
            vp = inst.P.vertices[0]
            w = construct_hs_witness(inst, vp)
            support = quasi_sure_support(inst.P)
            for A in all_events(support):
                if vp(A) >= 2 * inst.epsilon:
                    assert w.q_star(A) >= w.guaranteed_bound
                    assert w.q_star(A) >= inst.epsilon * inst.delta / 2


class TestConstructDualWitness:
    def test_vacuous_qualifying_family(self):
        inst = HsInstance(
            amb(W2, (F(1, 2), F(1, 2))),
            amb(W2, (F(9, 10), F(1, 10)), (F(1, 10), F(9, 10))),
            F(3, 20),
            F(2, 5),
        )
        w = construct_dual_hs_witness(inst, inst.P.vertices[0])
        assert w.guaranteed_bound == 2 * inst.epsilon
        assert w.q_star(frozenset()) < 2 * inst.epsilon

    def test_q_equals_p_single(self):
        P = amb(W2, (F(1, 2), F(1, 2)))
        inst = HsInstance(P, P, F(1, 4), F(1, 3))
        w = construct_dual_hs_witness(inst, P.vertices[0])
        assert w.q_star.mass == P.vertices[0].mass

    def test_inner_value_threshold_formula(self):
        eps = F(1, 10)
        assert (2 - eps) * eps == F(19, 100)

    def test_witness_soundness_randomized(self):
        rng = random.Random(31)
        seen = 0
        while seen < 40:
            inst = _random_instance(rng)
            if not check_hypothesis_dual(inst)[0]:
                continue
            seen += 1
            vp = inst.P.vertices[0]
            w = construct_dual_hs_witness(inst, vp)
            support = quasi_sure_support(inst.P)
            for A in all_events(support):
                if vp(A) < inst.epsilon * inst.delta:
                    assert w.q_star(A) < 2 * inst.epsilon


class TestHsModulus:
    def test_dirac_pair(self):
        P = amb(W2, (1, 0), (0, 1))
        Q = amb(W2, (F(1, 3), F(2, 3)))
        assert hs_modulus(P, Q, F(1, 2)) == F(1, 3)

    def test_q_equals_p_lower_bound(self):
        rng = random.Random(37)
        for _ in range(40):
            n = rng.randint(1, 4)
            space = SampleSpace([f"o{i}" for i in range(n)])
            P = AmbiguitySet(space, [_random_measure(space, rng)])
            eps = F(rng.randint(1, 9), 10)
            value = hs_modulus(P, P, eps)
            assert value == NO_QUALIFYING_SET or value >= eps

    def test_null_qualifying_set(self):
        P = amb(W2, (F(1, 2), F(1, 2)))
        Q = amb(W2, (1, 0))
        assert hs_modulus(P, Q, F(1, 4)) == 0

    def test_monotone_in_epsilon(self):
        rng = random.Random(43)
        for _ in range(30):
            inst = _random_instance(rng, max_outcomes=5)
            grid = sorted(F(k, 10) for k in range(1, 10))
            values = [hs_modulus(inst.P, inst.Q, e) for e in grid]
            for a, b in zip(values, values[1:]):
                assert a <= b
