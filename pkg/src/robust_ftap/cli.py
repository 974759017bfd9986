"""Batch command-line front-end emitting machine-checkable certificates.

Every subcommand loads rational-valued JSON inputs, dispatches to the
library, and emits a certificate containing the verdict, an explicit
witness, and a transcript of asserted inequalities with both sides as
rational strings.  A separate ``verify`` subcommand re-checks a
certificate without re-running the original computation: it validates
the payload digest, re-evaluates every transcript inequality, and checks
the membership constraints of the witness vectors.

All numbers are serialized as exact rational strings (``p/q`` in lowest
terms, or a plain integer); floats are rejected on input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import tempfile
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    BoundViolated,
    EnumerationCapExceeded,
    HypothesisViolated,
    InputError,
    NaViolated,
    RobustFtapError,
)
from .halmos_savage import (
    NO_QUALIFYING_SET,
    HsInstance,
    _sorted_support,
    _support_subsets,
    check_hypothesis_dual,
    check_hypothesis_primal,
    construct_dual_hs_witness,
    construct_hs_witness,
    hs_modulus,
)
from .large_market import (
    DEFAULT_ALPHA_GRID,
    MarketSequence,
    build_contiguous_sequence,
    certify_moduli,
    scan_aa1,
    scan_aa2,
    weak_contiguity_witness,
)
from .market import (
    Market,
    check_na,
    check_ftap,
    martingale_polytope,
    superhedge,
)
from .measures import AmbiguitySet, BoundedFunction, ProbabilityMeasure, SampleSpace

DEFAULT_MAX_ENUM = 20
ENV_MAX_ENUM = "ROBUST_FTAP_MAX_ENUM"

_RATIONAL_RE = re.compile(r"-?[0-9]+(/[1-9][0-9]*)?\Z")
_DECIMAL_RE = re.compile(r"-?[0-9]+\.[0-9]{1,12}\Z")

_RELATIONS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    "=": lambda a, b: a == b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
}


# ---------------------------------------------------------------------------
# rational (de)serialization


def parse_rational(value, field: str = "value") -> Fraction:
    """Exact rational from a string ``p``, ``p/q`` or a decimal with at most
    12 fractional digits; JSON integers are accepted, floats are not."""
    if isinstance(value, bool):
        raise InputError(f"{field}: expected a rational string, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise InputError(
            f"{field}: floats are not accepted; use a rational string"
        )
    if isinstance(value, str):
        text = value.strip()
        if _RATIONAL_RE.match(text):
            return Fraction(text)
        if _DECIMAL_RE.match(text):
            whole, frac = text.split(".")
            sign = -1 if whole.startswith("-") else 1
            num = abs(int(whole)) * 10 ** len(frac) + int(frac)
            return Fraction(sign * num, 10 ** len(frac))
        raise InputError(f"{field}: {value!r} is not a valid rational string")
    raise InputError(f"{field}: expected a rational string, got {type(value).__name__}")


def format_rational(x: Fraction) -> str:
    """Canonical rational string: lowest terms, `p/q` or a bare integer."""
    return str(Fraction(x))


def _parse_list(values, field: str) -> list[Fraction]:
    if not isinstance(values, list):
        raise InputError(f"{field}: expected a list")
    return [parse_rational(v, f"{field}[{i}]") for i, v in enumerate(values)]


def _parse_grid(text: str, field: str) -> list[Fraction]:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise InputError(f"{field}: empty grid")
    return [parse_rational(t.strip(), field) for t in items]


# ---------------------------------------------------------------------------
# input files


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def load_market(obj, where: str = "market") -> Market:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    for key in ("outcomes", "d", "S0", "S1", "ambiguity_vertices"):
        if key not in obj:
            raise InputError(f"{where}: missing field {key!r}")
    outcomes = obj["outcomes"]
    if not isinstance(outcomes, list) or not all(
        isinstance(o, str) for o in outcomes
    ):
        raise InputError(f"{where}.outcomes: expected a list of strings")
    try:
        space = SampleSpace(outcomes)
    except ValueError as exc:
        raise InputError(f"{where}.outcomes: {exc}") from exc
    d = obj["d"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise InputError(f"{where}.d: expected a nonnegative integer")
    s0 = _parse_list(obj["S0"], f"{where}.S0")
    if len(s0) != d:
        raise InputError(f"{where}.S0: expected {d} entries, got {len(s0)}")
    s1_rows = obj["S1"]
    if not isinstance(s1_rows, list) or len(s1_rows) != space.size:
        raise InputError(f"{where}.S1: expected {space.size} rows")
    s1 = [_parse_list(row, f"{where}.S1[{i}]") for i, row in enumerate(s1_rows)]
    for i, row in enumerate(s1):
        if len(row) != d:
            raise InputError(f"{where}.S1[{i}]: expected {d} entries")
    verts_obj = obj["ambiguity_vertices"]
    if not isinstance(verts_obj, list) or not verts_obj:
        raise InputError(f"{where}.ambiguity_vertices: expected a nonempty list")
    vertices = []
    for i, v in enumerate(verts_obj):
        mass = _parse_list(v, f"{where}.ambiguity_vertices[{i}]")
        try:
            vertices.append(ProbabilityMeasure(space, mass))
        except (ValueError, RobustFtapError) as exc:
            raise InputError(
                f"{where}.ambiguity_vertices[{i}]: {exc}"
            ) from exc
    try:
        return Market(space, s0, s1, AmbiguitySet(space, vertices))
    except (ValueError, RobustFtapError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def market_to_obj(m: Market) -> dict:
    return {
        "outcomes": list(m.space.outcomes),
        "d": m.d,
        "S0": [format_rational(x) for x in m.s0],
        "S1": [[format_rational(x) for x in row] for row in m.s1],
        "ambiguity_vertices": [
            [format_rational(x) for x in v.mass] for v in m.P.vertices
        ],
    }


def load_sequence(obj) -> MarketSequence:
    if not isinstance(obj, dict) or "markets" not in obj:
        raise InputError('sequence file: expected {"markets": [...]}')
    markets_obj = obj["markets"]
    if not isinstance(markets_obj, list) or not markets_obj:
        raise InputError("sequence file: markets must be a nonempty list")
    markets = [
        load_market(mo, f"markets[{i}]") for i, mo in enumerate(markets_obj)
    ]
    try:
        return MarketSequence(markets)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def sequence_to_obj(seq: MarketSequence) -> dict:
    return {"markets": [market_to_obj(m) for m in seq.markets]}


def load_payoff(obj, space: SampleSpace) -> BoundedFunction:
    if not isinstance(obj, dict) or "values" not in obj:
        raise InputError('payoff file: expected {"values": [...]}')
    values = _parse_list(obj["values"], "payoff.values")
    if len(values) != space.size:
        raise InputError(
            f"payoff.values: expected {space.size} entries, got {len(values)}"
        )
    return BoundedFunction(space, values)


def load_hs_pair(obj) -> tuple[SampleSpace, AmbiguitySet, AmbiguitySet]:
    if not isinstance(obj, dict):
        raise InputError("pair file: expected an object")
    for key in ("outcomes", "p_vertices", "q_vertices"):
        if key not in obj:
            raise InputError(f"pair file: missing field {key!r}")
    try:
        space = SampleSpace(obj["outcomes"])
    except (ValueError, TypeError) as exc:
        raise InputError(f"pair.outcomes: {exc}") from exc

    def to_set(rows, name) -> AmbiguitySet:
        if not isinstance(rows, list) or not rows:
            raise InputError(f"pair.{name}: expected a nonempty list")
        vertices = []
        for i, row in enumerate(rows):
            mass = _parse_list(row, f"pair.{name}[{i}]")
            try:
                vertices.append(ProbabilityMeasure(space, mass))
            except (ValueError, RobustFtapError) as exc:
                raise InputError(f"pair.{name}[{i}]: {exc}") from exc
        return AmbiguitySet(space, vertices)

    return space, to_set(obj["p_vertices"], "p_vertices"), to_set(
        obj["q_vertices"], "q_vertices"
    )


def hs_pair_to_obj(space, P: AmbiguitySet, Q: AmbiguitySet) -> dict:
    return {
        "outcomes": list(space.outcomes),
        "p_vertices": [[format_rational(x) for x in v.mass] for v in P.vertices],
        "q_vertices": [[format_rational(x) for x in v.mass] for v in Q.vertices],
    }


# ---------------------------------------------------------------------------
# certificates


def canonical_json(obj) -> bytes:
    return json.dumps(
        obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True
    ).encode("ascii")


def _digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj)).hexdigest()


def entry(description: str, lhs: Fraction, relation: str, rhs: Fraction) -> dict:
    assert relation in _RELATIONS
    assert _RELATIONS[relation](lhs, rhs), (description, lhs, relation, rhs)
    return {
        "description": description,
        "lhs": format_rational(lhs),
        "relation": relation,
        "rhs": format_rational(rhs),
    }


def build_certificate(command, input_obj, verdict, witness, transcript) -> dict:
    payload = {
        "command": command,
        "input_digest": _digest(input_obj),
        "verdict": verdict,
        "witness": witness,
        "transcript": transcript,
    }
    cert = dict(payload)
    cert["payload_sha256"] = _digest(payload)
    return cert


def verify_certificate(cert) -> list[str]:
    """All reasons to reject the certificate; empty means accepted."""
    problems: list[str] = []
    if not isinstance(cert, dict):
        return ["certificate must be a JSON object"]
    for key in ("command", "input_digest", "verdict", "witness", "transcript",
                "payload_sha256"):
        if key not in cert:
            problems.append(f"missing field {key!r}")
    if problems:
        return problems
    payload = {k: cert[k] for k in
               ("command", "input_digest", "verdict", "witness", "transcript")}
    if _digest(payload) != cert["payload_sha256"]:
        problems.append("payload digest mismatch")
    transcript = cert["transcript"]
    if not isinstance(transcript, list):
        return problems + ["transcript must be a list"]
    for i, e in enumerate(transcript):
        try:
            lhs = parse_rational(e["lhs"], f"transcript[{i}].lhs")
            rhs = parse_rational(e["rhs"], f"transcript[{i}].rhs")
            rel = e["relation"]
            if rel not in _RELATIONS:
                raise InputError(f"transcript[{i}]: unknown relation {rel!r}")
        except (InputError, KeyError, TypeError) as exc:
            problems.append(f"transcript[{i}]: malformed entry ({exc})")
            continue
        if not _RELATIONS[rel](lhs, rhs):
            problems.append(
                f"transcript[{i}] fails: {e['lhs']} {rel} {e['rhs']}"
                f" ({e.get('description', '')})"
            )
    witness = cert["witness"]
    if isinstance(witness, dict):
        for field in ("probability_vectors", "weight_vectors"):
            for j, vec in enumerate(witness.get(field, []) or []):
                try:
                    values = _parse_list(vec, f"witness.{field}[{j}]")
                except InputError as exc:
                    problems.append(str(exc))
                    continue
                if any(v < 0 for v in values):
                    problems.append(f"witness.{field}[{j}] has a negative entry")
                if sum(values) != 1:
                    problems.append(f"witness.{field}[{j}] does not sum to 1")
    return problems


# ---------------------------------------------------------------------------
# shared serialization helpers


def _rs(values) -> list[str]:
    return [format_rational(v) for v in values]


def _event_name(event) -> str:
    return "{" + ",".join(sorted(event)) + "}"


def _modulus_str(x: Fraction) -> str:
    return "none-qualifying" if x == NO_QUALIFYING_SET else format_rational(x)


# ---------------------------------------------------------------------------
# subcommand handlers; each returns (verdict, witness, transcript, input_obj)


def _cmd_check_na(args, max_enum):
    m = load_market(_load_json(args.input))
    holds, w = check_na(m)
    transcript = []
    if holds:
        return "NA holds", None, transcript, market_to_obj(m)
    for o in m.support:
        transcript.append(
            entry(f"gain of H at {o}", m.gain(w.H, o), ">=", Fraction(0))
        )
    transcript.append(
        entry(
            f"strict gain at {w.strict_outcome}",
            m.gain(w.H, w.strict_outcome),
            ">",
            Fraction(0),
        )
    )
    witness = {"H": _rs(w.H), "strict_outcome": w.strict_outcome}
    return "NA fails", witness, transcript, market_to_obj(m)


def _martingale_transcript(m: Market, vertices, transcript):
    support = m.support
    for k, q in enumerate(vertices):
        for i in range(m.d):
            lhs = sum(
                (q.mass_of(o) * m.delta_s(o)[i] for o in support), Fraction(0)
            )
            transcript.append(
                entry(f"vertex {k}: expected increment of asset {i}",
                      lhs, "=", Fraction(0))
            )


def _cmd_martingale_polytope(args, max_enum):
    m = load_market(_load_json(args.input))
    poly = martingale_polytope(m, max_enum)
    transcript = []
    _martingale_transcript(m, poly.vertices, transcript)
    witness = {"probability_vectors": [_rs(v.mass) for v in poly.vertices]}
    verdict = f"{len(poly.vertices)} martingale vertices"
    return verdict, witness, transcript, market_to_obj(m)


def _cmd_ftap(args, max_enum):
    m = load_market(_load_json(args.input))
    ok, per_vertex = check_ftap(m)
    na_holds = all(q is not None for _, q in per_vertex)
    transcript = []
    dominating = []
    vectors = []
    for vp, q in per_vertex:
        if q is None:
            dominating.append(None)
            continue
        dominating.append(len(vectors))
        vectors.append(_rs(q.mass))
        for i in range(m.d):
            lhs = sum(
                (q.mass_of(o) * m.delta_s(o)[i] for o in m.support),
                Fraction(0),
            )
            transcript.append(
                entry(f"dominating Q: expected increment of asset {i}",
                      lhs, "=", Fraction(0))
            )
        for o in sorted(vp.support):
            transcript.append(
                entry(f"dominating Q positive at {o}", q.mass_of(o), ">",
                      Fraction(0))
            )
    verdict = (
        "NA holds; every ambiguity vertex admits a dominating martingale measure"
        if na_holds
        else "NA fails; some ambiguity vertex has no dominating martingale measure"
    )
    witness = {
        "probability_vectors": vectors,
        "dominating_index_per_vertex": dominating,
    }
    return verdict, witness, transcript, market_to_obj(m)


def _cmd_superhedge(args, max_enum):
    if not args.payoff:
        raise InputError("superhedge requires --payoff <file>")
    m = load_market(_load_json(args.input))
    f = load_payoff(_load_json(args.payoff), m.space)
    input_obj = {"market": market_to_obj(m),
                 "payoff": {"values": _rs(f.values)}}
    try:
        cert = superhedge(m, f, max_enum)
    except NaViolated:
        return ("NA fails; superhedging duality unavailable", None, [],
                input_obj)
    transcript = []
    for o in m.support:
        transcript.append(
            entry(f"hedge dominates payoff at {o}",
                  cert.price + m.gain(cert.H, o), ">=", f.value_at(o))
        )
    transcript.append(
        entry("attaining measure reaches the price",
              cert.attaining_q.expectation(f), "=", cert.price)
    )
    for i in range(m.d):
        lhs = sum(
            (cert.attaining_q.mass_of(o) * m.delta_s(o)[i] for o in m.support),
            Fraction(0),
        )
        transcript.append(
            entry(f"attaining measure: expected increment of asset {i}",
                  lhs, "=", Fraction(0))
        )
    witness = {
        "price": format_rational(cert.price),
        "H": _rs(cert.H),
        "probability_vectors": [_rs(cert.attaining_q.mass)],
    }
    return f"superhedging price {format_rational(cert.price)}", witness, \
        transcript, input_obj


def _hs_instance(args):
    space, P, Q = load_hs_pair(_load_json(args.input))
    if args.epsilon is None or args.delta is None:
        raise InputError("this subcommand requires --epsilon and --delta")
    eps = parse_rational(args.epsilon, "--epsilon")
    delta = parse_rational(args.delta, "--delta")
    try:
        inst = HsInstance(P, Q, eps, delta)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    input_obj = {
        "pair": hs_pair_to_obj(space, P, Q),
        "epsilon": format_rational(eps),
        "delta": format_rational(delta),
    }
    return inst, input_obj


def _cmd_hs_check(args, max_enum):
    inst, input_obj = _hs_instance(args)
    if args.kind == "primal":
        holds, worst = check_hypothesis_primal(inst, max_enum)
    else:
        holds, worst = check_hypothesis_dual(inst, max_enum)
    verdict = f"{args.kind} hypothesis {'holds' if holds else 'fails'}"
    witness = {"worst_event": sorted(worst)}
    input_obj = dict(input_obj, kind=args.kind)
    return verdict, witness, [], input_obj


def _cmd_hs_witness(args, max_enum):
    inst, input_obj = _hs_instance(args)
    vertex_p = inst.P.vertices[args.vertex_index]
    try:
        w = construct_hs_witness(inst, vertex_p, max_enum)
    except HypothesisViolated:
        return "primal hypothesis fails; no witness", None, [], input_obj
    transcript = []
    if w.guaranteed_bound != NO_QUALIFYING_SET:
        transcript.append(
            entry("guaranteed bound at least epsilon*delta/2",
                  w.guaranteed_bound, ">=", inst.epsilon * inst.delta / 2)
        )
        support = _sorted_support(inst.P)
        for A in _support_subsets(support, max_enum):
            if vertex_p(A) >= 2 * inst.epsilon:
                transcript.append(
                    entry(f"Qstar mass of {_event_name(A)}",
                          w.q_star(A), ">=", w.guaranteed_bound)
                )
    witness = {
        "probability_vectors": [_rs(w.q_star.mass)],
        "weight_vectors": [_rs(w.weights)],
        "guaranteed_bound": format_rational(w.guaranteed_bound),
        "for_vertex_p": _rs(vertex_p.mass),
    }
    verdict = (
        "no event reaches mass 2*epsilon; conclusion vacuous"
        if w.guaranteed_bound == NO_QUALIFYING_SET
        else f"witness with guaranteed bound {format_rational(w.guaranteed_bound)}"
    )
    input_obj = dict(input_obj, vertex_index=args.vertex_index)
    return verdict, witness, transcript, input_obj


def _cmd_hs_dual_witness(args, max_enum):
    inst, input_obj = _hs_instance(args)
    vertex_p = inst.P.vertices[args.vertex_index]
    try:
        w = construct_dual_hs_witness(inst, vertex_p, max_enum)
    except HypothesisViolated:
        return "dual hypothesis fails; no witness", None, [], input_obj
    transcript = []
    strict = inst.epsilon * inst.delta
    support = _sorted_support(inst.P)
    for A in _support_subsets(support, max_enum):
        if vertex_p(A) < strict:
            transcript.append(
                entry(f"Qstar mass of {_event_name(A)}",
                      w.q_star(A), "<", w.guaranteed_bound)
            )
    witness = {
        "probability_vectors": [_rs(w.q_star.mass)],
        "weight_vectors": [_rs(w.weights)],
        "guaranteed_bound": format_rational(w.guaranteed_bound),
        "for_vertex_p": _rs(vertex_p.mass),
    }
    verdict = f"dual witness with strict bound {format_rational(w.guaranteed_bound)}"
    input_obj = dict(input_obj, vertex_index=args.vertex_index)
    return verdict, witness, transcript, input_obj


def _cmd_hs_modulus(args, max_enum):
    space, P, Q = load_hs_pair(_load_json(args.input))
    if args.epsilon is None:
        raise InputError("hs-modulus requires --epsilon")
    eps = parse_rational(args.epsilon, "--epsilon")
    value = hs_modulus(P, Q, eps, max_enum)
    input_obj = {
        "pair": hs_pair_to_obj(space, P, Q),
        "epsilon": format_rational(eps),
    }
    witness = {"modulus": format_rational(value)}
    return f"modulus {_modulus_str(value)}", witness, [], input_obj


def _alpha_grid(args):
    if args.alpha_grid:
        return _parse_grid(args.alpha_grid, "--alpha-grid")
    return list(DEFAULT_ALPHA_GRID)


def _cmd_scan_aa1(args, max_enum):
    seq = load_sequence(_load_json(args.input))
    c_schedule = (
        _parse_grid(args.c_schedule, "--c-schedule") if args.c_schedule else None
    )
    try:
        w = scan_aa1(seq, _alpha_grid(args), c_schedule, max_enum)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    input_obj = sequence_to_obj(seq)
    if w is None:
        return "no first-kind witness on this family", None, [], input_obj
    transcript = []
    for k, (n, H, c_k, vert) in enumerate(
        zip(w.indices, w.strategies, w.bounds, w.measures)
    ):
        m = seq.markets[n - 1]
        gain_event = frozenset(o for o in m.support if m.gain(H, o) >= w.alpha)
        transcript.append(
            entry(f"slot {k + 1} (market {n}): P-mass of the high-gain event",
                  vert(gain_event), ">=", w.alpha)
        )
        worst = min(m.gain(H, o) for o in m.support)
        transcript.append(
            entry(f"slot {k + 1} (market {n}): worst-case gain",
                  worst, ">=", -c_k)
        )
    witness = {
        "alpha": format_rational(w.alpha),
        "indices": list(w.indices),
        "strategies": [_rs(H) for H in w.strategies],
        "bounds": _rs(w.bounds),
        "probability_vectors": [_rs(v.mass) for v in w.measures],
    }
    verdict = f"first-kind witness at alpha {format_rational(w.alpha)}"
    return verdict, witness, transcript, input_obj


def _cmd_scan_aa2(args, max_enum):
    seq = load_sequence(_load_json(args.input))
    targets = (
        _parse_grid(args.target_levels, "--target-levels")
        if args.target_levels
        else None
    )
    try:
        w = scan_aa2(seq, _alpha_grid(args), targets, max_enum)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    input_obj = sequence_to_obj(seq)
    if w is None:
        return "no second-kind witness on this family", None, [], input_obj
    transcript = []
    for k, (n, H, vert, p_k) in enumerate(
        zip(w.indices, w.strategies, w.measures, w.attained)
    ):
        m = seq.markets[n - 1]
        gain_event = frozenset(o for o in m.support if m.gain(H, o) >= w.alpha)
        transcript.append(
            entry(f"slot {k + 1} (market {n}): attained P-mass",
                  vert(gain_event), ">=", p_k)
        )
        worst = min(m.gain(H, o) for o in m.support)
        transcript.append(
            entry(f"slot {k + 1} (market {n}): worst-case gain",
                  worst, ">=", Fraction(-1))
        )
    witness = {
        "alpha": format_rational(w.alpha),
        "indices": list(w.indices),
        "strategies": [_rs(H) for H in w.strategies],
        "attained": _rs(w.attained),
        "probability_vectors": [_rs(v.mass) for v in w.measures],
    }
    verdict = f"second-kind witness at alpha {format_rational(w.alpha)}"
    return verdict, witness, transcript, input_obj


def _epsilon_grid(args):
    if args.epsilon_grid:
        return _parse_grid(args.epsilon_grid, "--epsilon-grid")
    return list(DEFAULT_ALPHA_GRID)


def _cmd_certify(args, max_enum, kind):
    seq = load_sequence(_load_json(args.input))
    grid = _epsilon_grid(args)
    table = certify_moduli(seq, grid, kind, max_enum)
    input_obj = dict(sequence_to_obj(seq), epsilon_grid=_rs(grid), kind=kind)
    transcript = []
    positive = all(u > 0 for u in table.uniform_delta)
    for eps, u in zip(table.epsilon_grid, table.uniform_delta):
        if u > 0:
            transcript.append(
                entry(f"uniform modulus at epsilon {format_rational(eps)}",
                      u, ">", Fraction(0))
            )
    witness = {
        "epsilon_grid": _rs(table.epsilon_grid),
        "per_market": [
            [_modulus_str(x) for x in row] for row in table.per_market
        ],
        "uniform_delta": [_modulus_str(x) for x in table.uniform_delta],
    }
    label = "first" if kind == "primal" else "second"
    verdict = (
        f"uniform positive moduli: finite-horizon certificate of no "
        f"{label}-kind asymptotic arbitrage"
        if positive
        else "no uniform positive modulus on this grid"
    )
    return verdict, witness, transcript, input_obj


def _cmd_build_contiguous(args, max_enum):
    seq = load_sequence(_load_json(args.input))
    try:
        cs = build_contiguous_sequence(seq, max_enum=max_enum)
    except HypothesisViolated as exc:
        return f"construction unavailable: {exc}", None, [], sequence_to_obj(seq)
    transcript = []
    for n, (q_n, weights) in enumerate(
        zip(cs.per_market, cs.mixture_weights), start=1
    ):
        transcript.append(
            entry(f"market {n}: mixture weights sum",
                  sum(weights, Fraction(0)), "=", Fraction(1))
        )
        market = seq.markets[n - 1]
        p_base = market.P.vertices[0]
        for m_level in range(1, n + 1):
            e, d = cs.schedule[m_level - 1]
            if 2 * e > 1:
                continue
            beta = Fraction(1, 2**m_level) * (e * d / 2)
            worst = None
            for A in _support_subsets(market.support, max_enum):
                if p_base(A) >= 2 * e:
                    val = q_n(A)
                    if worst is None or val < worst:
                        worst = val
            if worst is not None:
                transcript.append(
                    entry(
                        f"market {n}, level {m_level}: least mixture mass on "
                        f"qualifying events",
                        worst, ">=", beta,
                    )
                )
    witness = {
        "probability_vectors": [_rs(q.mass) for q in cs.per_market],
        "weight_vectors": [_rs(w) for w in cs.mixture_weights],
        "schedule": [
            [format_rational(e), format_rational(d)] for e, d in cs.schedule
        ],
    }
    verdict = f"contiguous dominating mixtures built for {len(seq)} markets"
    return verdict, witness, transcript, sequence_to_obj(seq)


def _cmd_weak_contiguity(args, max_enum):
    seq = load_sequence(_load_json(args.input))
    if args.epsilon is None:
        raise InputError("weak-contiguity requires --epsilon")
    eps = parse_rational(args.epsilon, "--epsilon")
    input_obj = dict(sequence_to_obj(seq), epsilon=format_rational(eps))
    try:
        delta, picks = weak_contiguity_witness(
            seq, epsilon=eps, max_enum=max_enum
        )
    except HypothesisViolated as exc:
        return f"certificate unavailable: {exc}", None, [], input_obj
    transcript = []
    for n, q in enumerate(picks, start=1):
        market = seq.markets[n - 1]
        p_base = market.P.vertices[0]
        worst = None
        for A in _support_subsets(market.support, max_enum):
            if p_base(A) < delta:
                val = q(A)
                if worst is None or val > worst:
                    worst = val
        if worst is not None and eps <= 1:
            transcript.append(
                entry(f"market {n}: largest witness mass on small events",
                      worst, "<", eps)
            )
    witness = {
        "delta": format_rational(delta),
        "probability_vectors": [_rs(q.mass) for q in picks],
    }
    verdict = (
        f"finite-horizon weak-contiguity certificate: delta "
        f"{format_rational(delta)} at epsilon {format_rational(eps)}"
    )
    return verdict, witness, transcript, input_obj


_HANDLERS = {
    "check-na": _cmd_check_na,
    "martingale-polytope": _cmd_martingale_polytope,
    "ftap": _cmd_ftap,
    "superhedge": _cmd_superhedge,
    "hs-check": _cmd_hs_check,
    "hs-witness": _cmd_hs_witness,
    "hs-dual-witness": _cmd_hs_dual_witness,
    "hs-modulus": _cmd_hs_modulus,
    "scan-aa1": _cmd_scan_aa1,
    "scan-aa2": _cmd_scan_aa2,
    "certify-naa1": lambda a, c: _cmd_certify(a, c, "primal"),
    "certify-naa2": lambda a, c: _cmd_certify(a, c, "dual"),
    "build-contiguous": _cmd_build_contiguous,
    "weak-contiguity": _cmd_weak_contiguity,
}


# ---------------------------------------------------------------------------
# output


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".robust-ftap-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(cert: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(cert, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"command: {cert['command']}", f"verdict: {cert['verdict']}"]
        if cert["witness"] is not None:
            lines.append("witness:")
            lines.append(
                "  " + json.dumps(cert["witness"], sort_keys=True)
            )
        lines.append(f"transcript: {len(cert['transcript'])} checked inequalities")
        for e in cert["transcript"]:
            lines.append(
                f"  {e['description']}: {e['lhs']} {e['relation']} {e['rhs']}"
            )
        lines.append(f"payload_sha256: {cert['payload_sha256']}")
        text = "\n".join(lines) + "\n"
    if args.output:
        _atomic_write(args.output, text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robust-ftap",
        description=(
            "Exact-rational no-arbitrage, superhedging and contiguity "
            "certificates for finite robust markets."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--input", help="input JSON file")
        p.add_argument("--output", help="write the certificate here (atomic)")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--max-enum", type=int, default=None,
                       help="enumeration cap (default 20; env "
                            f"{ENV_MAX_ENUM} overrides)")
        return p

    add("check-na", help="robust no-arbitrage verdict for one market")
    add("martingale-polytope", help="vertex list of the martingale polytope")
    add("ftap", help="both sides of the one-period FTAP equivalence")
    p = add("superhedge", help="least superhedging price and hedge")
    p.add_argument("--payoff", help="payoff JSON file")

    for name in ("hs-check", "hs-witness", "hs-dual-witness"):
        p = add(name)
        p.add_argument("--epsilon")
        p.add_argument("--delta")
        if name == "hs-check":
            p.add_argument("--kind", choices=("primal", "dual"),
                           default="primal")
        else:
            p.add_argument("--vertex-index", type=int, default=0)
    p = add("hs-modulus", help="worst-case best Q-mass at level epsilon")
    p.add_argument("--epsilon")

    p = add("scan-aa1", help="search for a first-kind asymptotic arbitrage")
    p.add_argument("--alpha-grid")
    p.add_argument("--c-schedule")
    p = add("scan-aa2", help="search for a second-kind asymptotic arbitrage")
    p.add_argument("--alpha-grid")
    p.add_argument("--target-levels")
    p = add("certify-naa1", help="uniform primal moduli over the family")
    p.add_argument("--epsilon-grid")
    p = add("certify-naa2", help="uniform dual moduli over the family")
    p.add_argument("--epsilon-grid")
    add("build-contiguous",
        help="dominating martingale mixtures on the 1/m level schedule")
    p = add("weak-contiguity", help="per-epsilon weak-contiguity certificate")
    p.add_argument("--epsilon")

    p = sub.add_parser("verify", help="re-check an emitted certificate")
    p.add_argument("--certificate", required=True)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--output")
    return parser


def _resolve_max_enum(args) -> int:
    if getattr(args, "max_enum", None) is not None:
        return args.max_enum
    env = os.environ.get(ENV_MAX_ENUM)
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{ENV_MAX_ENUM} must be an integer, got {env!r}")
    return DEFAULT_MAX_ENUM


def _run_verify(args) -> int:
    cert = _load_json(args.certificate)
    problems = verify_certificate(cert)
    if not problems:
        sys.stdout.write("certificate accepted\n")
        return 0
    sys.stdout.write("certificate REJECTED\n")
    for p in problems:
        sys.stdout.write(f"  {p}\n")
    return 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _run_verify(args)
        if not args.input:
            raise InputError(f"{args.command} requires --input <file>")
        max_enum = _resolve_max_enum(args)
        verdict, witness, transcript, input_obj = _HANDLERS[args.command](
            args, max_enum
        )
        cert = build_certificate(
            args.command, input_obj, verdict, witness, transcript
        )
        _emit(cert, args)
        return 0
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 1
    except EnumerationCapExceeded as exc:
        sys.stderr.write(f"enumeration cap exceeded: {exc}\n")
        return 2
    except (BoundViolated, AssertionError, RobustFtapError) as exc:
        sys.stderr.write(f"internal assertion failed: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
