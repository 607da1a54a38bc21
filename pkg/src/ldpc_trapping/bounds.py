"""Girth bounds, the block-length threshold, and constructive failure sets.

``find_guaranteed_failure`` walks the girth-indexed case analysis to propose
candidate failure sets and then lets simulation decide: a candidate is only
reported once the decoders are seen to fail on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .decoders import DecoderConfig, require_rule_a
from .tanner import Cycle, TannerGraph, enumerate_short_cycles, girth
from .trapping import check_trapping_conditions, is_failure_set, search_failure_sets


def girth_upper_bound(n: int, rho: int) -> float:
    """Upper bound on the girth of any (3, rho)-regular Tanner graph on n variables."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if rho < 4:
        raise ValueError("rho must be >= 4")
    return 4.0 * (math.log(n) / math.log(2 * (rho - 1)) + 1.0)


@dataclass
class ThresholdReport:
    alpha: float
    rho: int
    N: int
    bound_at_N: float
    bound_curve: list[tuple[int, float]]

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "rho": self.rho,
            "N": self.N,
            "bound_at_N": self.bound_at_N,
            "boundCurve": [{"n": n, "bound": b} for n, b in self.bound_curve],
        }


def _linear_beats_log(alpha: float, rho: int, N: int) -> bool:
    return alpha * N > 2.0 * (math.log(N) / math.log(2 * (rho - 1)) + 1.0)


def theorem2_threshold(alpha: float, rho: int) -> ThresholdReport:
    """Smallest N with alpha*N > 2(log N / log 2(rho-1) + 1) and alpha*N >= 5.

    ``alpha*N - 2 log N / log 2(rho-1)`` is convex in N, so once its slope is
    positive at N the first inequality holds for every larger n; the scan
    also demands that slope condition.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if rho < 4:
        raise ValueError("rho must be >= 4")
    log_base = math.log(2 * (rho - 1))
    N = max(2, math.ceil(5 / alpha) - 1)
    while True:
        if (
            alpha * N >= 5
            and _linear_beats_log(alpha, rho, N)
            and alpha * N * log_base > 2
        ):
            break
        N += 1
    curve = [(k * N, girth_upper_bound(k * N, rho)) for k in (1, 2, 4, 8)]
    return ThresholdReport(alpha, rho, N, girth_upper_bound(N, rho), curve)


# --------------------------------------------------------------------------
# guaranteed failure sets


SIZE_BOUND = {2: 1, 4: 3, 6: 4, 8: 5}


def size_bound(g: int) -> int:
    return SIZE_BOUND[g] if g in SIZE_BOUND else g // 2


@dataclass
class Candidate:
    T: frozenset[int]
    case_label: str


@dataclass
class GuaranteedFailureReport:
    girth: int | None
    lemma_used: str | None
    candidate_sets: list[Candidate]
    confirmed: frozenset[int] | None
    case_label: str | None
    confirmed_by: tuple[str, ...] = ()
    trapping: bool | None = None
    note: str = ""

    @property
    def size(self) -> int | None:
        return None if self.confirmed is None else len(self.confirmed)

    def as_dict(self) -> dict:
        return {
            "girth": self.girth if self.girth is not None else "acyclic",
            "lemmaUsed": self.lemma_used,
            "caseLabel": self.case_label,
            "confirmed": sorted(self.confirmed) if self.confirmed is not None else None,
            "size": self.size,
            "confirmedBy": list(self.confirmed_by),
            "isTrapping": self.trapping,
            "candidates": [
                {"T": sorted(c.T), "caseLabel": c.case_label} for c in self.candidate_sets
            ],
            "note": self.note,
        }


def _third_check(graph: TannerGraph, v: int, used: set[int]) -> int | None:
    rest = [c for c in graph.var_neighbors(v) if c not in used]
    return rest[0] if len(rest) == 1 else None


def _outside_on(graph: TannerGraph, checks, T) -> dict[int, list[int]]:
    """Outside variable -> list of ``checks`` it touches (with multiplicity)."""
    hits: dict[int, list[int]] = {}
    for c in checks:
        for w in graph.chk_neighbors(c):
            if w not in T:
                hits.setdefault(w, []).append(c)
    return hits


def _lemma1_candidates(graph: TannerGraph) -> list[Candidate]:
    doubles = graph.parallel_edge_variables(2)
    others = [v for v in graph.parallel_edge_variables(None) if v not in doubles]
    return [Candidate(frozenset({v}), "L1-double-edge") for v in doubles] + [
        Candidate(frozenset({v}), "L1-multi-edge") for v in others
    ]


def _lemma2_candidates(graph: TannerGraph, cycles: list[Cycle]) -> list[Candidate]:
    out = []
    for cy in cycles:
        v1, v2 = cy.variables(graph)
        c12 = set(cy.checks(graph))
        c3, c4 = _third_check(graph, v1, c12), _third_check(graph, v2, c12)
        out.append(Candidate(frozenset({v1, v2}), "L2-ts22"))
        if c3 is None or c4 is None or c3 == c4:
            continue
        for w, hit in sorted(_outside_on(graph, [c3, c4], {v1, v2}).items()):
            if len(set(hit)) == 2:
                out.append(Candidate(frozenset({v1, v2, w}), "L2-ts31"))
    return out


def _lemma3_candidates(graph: TannerGraph, cycles: list[Cycle]) -> list[Candidate]:
    out = []
    for cy in cycles:
        T3 = frozenset(cy.variables(graph))
        verdict = check_trapping_conditions(graph, T3)
        if verdict.is_trapping:
            out.append(Candidate(T3, "L3-ts33"))
            continue
        odd = verdict.report.odd_checks
        for w, hit in sorted(_outside_on(graph, odd, T3).items()):
            hs = set(hit)
            if len(hs) == 3:
                out.append(Candidate(T3, "L3-codeword4"))
            elif len(hs) == 2:
                c7 = _third_check(graph, w, hs)
                (c4,) = odd - hs
                T4 = T3 | {w}
                label = "L3-ts42"
                if c7 is not None:
                    shared = [u for u, h in _outside_on(graph, [c4, c7], T4).items() if len(set(h)) == 2]
                    if shared:
                        v5 = min(shared)
                        rest = set(graph.var_neighbors(v5)) - {c4, c7}
                        label = "L3-case-b" if rest & verdict.report.even_checks else "L3-case-a"
                out.append(Candidate(T4, label))
    return out


def _lemma4_candidates(graph: TannerGraph, cycles: list[Cycle]) -> list[Candidate]:
    out = []
    for cy in cycles:
        T1 = frozenset(cy.variables(graph))
        verdict = check_trapping_conditions(graph, T1)
        if verdict.is_trapping:
            out.append(Candidate(T1, "L4-ts44"))
            continue
        odd = verdict.report.odd_checks
        for w, hit in sorted(_outside_on(graph, odd, T1).items()):
            if len(set(hit)) < 2:
                continue
            T2 = T1 | {w}
            v2 = check_trapping_conditions(graph, T2)
            if v2.is_trapping:
                label = "L4-case1-ts53"
            else:
                multi = {u: set(h) for u, h in _outside_on(graph, v2.report.odd_checks, T2).items() if len(set(h)) >= 2}
                if any(len(h) == 3 for h in multi.values()):
                    label = "L4-case2-codeword6"
                elif len(multi) == 1:
                    label = "L4-case3-subcase1"
                else:
                    label = "L4-case3-subcase2"
            out.append(Candidate(T2, label))
    return out


def _lemma5_candidates(graph: TannerGraph, g: int, witness: Cycle, budget: int) -> list[Candidate]:
    first = frozenset(witness.variables(graph))
    out = [Candidate(first, "L5-shortest-cycle")]
    inv = enumerate_short_cycles(graph, g, budget=budget)
    for cy in inv.cycles:
        T = frozenset(cy.variables(graph))
        if T != first:
            out.append(Candidate(T, "L5-shortest-cycle"))
    return out


def _confirm(graph: TannerGraph, T: frozenset[int], config: DecoderConfig, both: bool) -> tuple[str, ...]:
    algos = ("gallager-a", "bit-flip") if both else (config.algorithm,)
    ok = []
    for algo in algos:
        cfg = DecoderConfig(config.max_iterations, algo, config.decision_rule)
        if not is_failure_set(graph, T, cfg).failure:
            return ()
        ok.append(algo)
    return tuple(ok)


LEMMA_FOR_GIRTH = {2: "L1", 4: "L2", 6: "L3", 8: "L4"}


def find_guaranteed_failure(
    graph: TannerGraph,
    config: DecoderConfig = DecoderConfig(),
    both: bool = True,
    cycle_budget: int = 20_000,
    fallback_budget: int = 100_000,
    max_candidates: int = 500,
) -> GuaranteedFailureReport:
    """Guaranteed failure set dictated by the girth of ``graph``.

    Candidates follow the girth-specific case analysis (parallel edge, four-,
    six-, eight-cycle structures, or the shortest cycle when g >= 10).  Each
    is confirmed by simulation, under both decoders when ``both``.  If none
    confirms, a local exhaustive search around the short cycles runs before
    giving up.
    """
    require_rule_a(config)
    rep = girth(graph)
    if rep.girth is None:
        return GuaranteedFailureReport(None, None, [], None, None, note="acyclic graph: no claim")
    g = rep.girth
    lemma = LEMMA_FOR_GIRTH.get(g, "L5")
    if g == 2:
        cands = _lemma1_candidates(graph)
        cycles = []
    elif g in (4, 6, 8):
        inv = enumerate_short_cycles(graph, g, budget=cycle_budget)
        cycles = inv.cycles
        builder = {4: _lemma2_candidates, 6: _lemma3_candidates, 8: _lemma4_candidates}[g]
        cands = builder(graph, cycles)
    else:
        cycles = [rep.witness]
        cands = _lemma5_candidates(graph, g, rep.witness, cycle_budget)

    seen: set[frozenset[int]] = set()
    tried: list[Candidate] = []
    for cand in cands:
        if cand.T in seen:
            continue
        seen.add(cand.T)
        tried.append(cand)
        by = _confirm(graph, cand.T, config, both)
        if by:
            trap = check_trapping_conditions(graph, cand.T).is_trapping
            return GuaranteedFailureReport(g, lemma, tried, cand.T, cand.case_label, by, trap)
        if len(tried) >= max_candidates:
            break

    # local sweep: variables within two variable-hops of the short cycles
    near: set[int] = set()
    for cy in cycles[:50] or [rep.witness]:
        frontier = set(cy.variables(graph))
        near |= frontier
        for _ in range(2):
            frontier = {
                u for v in frontier for c in graph.var_neighbors(v) for u in graph.chk_neighbors(c)
            } - near
            near |= frontier
    bound = size_bound(g)
    report = search_failure_sets(
        graph, bound, config, budget=fallback_budget, variables=near, stop_at_first=True
    )
    for s in report.failing_supports:
        T = frozenset(s)
        by = _confirm(graph, T, config, both)
        if by:
            trap = check_trapping_conditions(graph, T).is_trapping
            tried.append(Candidate(T, "fallback-search"))
            return GuaranteedFailureReport(g, lemma, tried, T, "fallback-search", by, trap)
    return GuaranteedFailureReport(g, lemma, tried, None, None, note="no candidate confirmed")


@dataclass
class Corollary1Result:
    k: int
    girth: int | None
    short_cycle: bool
    witness: frozenset[int] | None
    report: GuaranteedFailureReport | None = None
    regime_warning: str | None = None

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "girth": self.girth if self.girth is not None else "acyclic",
            "result": "witness" if self.short_cycle else "no short cycle",
            "witness": sorted(self.witness) if self.witness is not None else None,
            "regimeWarning": self.regime_warning,
        }


def check_corollary1(graph: TannerGraph, k: int, config: DecoderConfig = DecoderConfig()) -> Corollary1Result:
    """If the girth is at most 2k, exhibit a failure set of size <= k.

    A girth above 2k yields no claim in either direction.
    """
    warning = None
    if k < 5:
        warning = "k < 5: failure sets from short cycles may exceed k"
    g = girth(graph).girth
    if g is None or g > 2 * k:
        return Corollary1Result(k, g, False, None, None, warning)
    rep = find_guaranteed_failure(graph, config)
    return Corollary1Result(k, g, True, rep.confirmed, rep, warning)
