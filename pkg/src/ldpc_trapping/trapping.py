"""Trapping-set verdicts, failure sets and critical numbers.

Induced check degrees always count parallel edges with multiplicity, which
is what the message and XOR semantics of the decoders see.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .decoders import (
    DecodeOutcome,
    DecoderConfig,
    StateCycle,
    decode,
    decode_batch,
    detect_state_cycle,
    require_rule_a,
)
from .tanner import TannerGraph, is_codeword, word_from_support


@dataclass
class InducedSubgraphReport:
    T: frozenset[int]
    even_checks: frozenset[int]
    odd_checks: frozenset[int]
    induced_degree: dict[int, int]
    edges_to_even: dict[int, int]
    edges_to_odd: dict[int, int]

    @property
    def C(self) -> int:
        return len(self.odd_checks)

    @property
    def even_count(self) -> int:
        return len(self.even_checks)

    @property
    def V(self) -> int:
        return len(self.T)


@dataclass
class TrappingVerdict:
    report: InducedSubgraphReport
    condition_a_violations: list[int]
    # (check, check, outside variable); the checks coincide when the
    # outside variable has a double edge into one odd check
    condition_b_violations: list[tuple[int, int, int]]
    is_codeword: bool

    @property
    def is_trapping(self) -> bool:
        return not self.condition_a_violations and not self.condition_b_violations

    @property
    def label(self) -> str:
        return f"({self.report.V},{self.report.C})"

    def as_dict(self) -> dict:
        r = self.report
        violations = [{"condition": "a", "variable": v} for v in self.condition_a_violations]
        violations += [
            {"condition": "b", "checks": [a, b], "variable": w}
            for a, b, w in self.condition_b_violations
        ]
        d = {
            "T": sorted(r.T),
            "E": sorted(r.even_checks),
            "O": sorted(r.odd_checks),
            "C": r.C,
            "evenCount": r.even_count,
            "isTrapping": self.is_trapping,
            "violations": violations,
        }
        if self.is_codeword:
            d["note"] = "indicator is a codeword, not a trapping set of a decoding failure"
        return d


def induced_subgraph(graph: TannerGraph, T: Iterable[int]) -> InducedSubgraphReport:
    T = frozenset(int(v) for v in T)
    deg: dict[int, int] = {}
    for v in T:
        if not 0 <= v < graph.n:
            raise ValueError(f"variable {v} out of range [0, {graph.n})")
        for c in graph.var_neighbors(v):
            deg[c] = deg.get(c, 0) + 1
    even = frozenset(c for c, d in deg.items() if d % 2 == 0)
    odd = frozenset(c for c, d in deg.items() if d % 2 == 1)
    to_even = {v: sum(1 for c in graph.var_neighbors(v) if c in even) for v in T}
    to_odd = {v: sum(1 for c in graph.var_neighbors(v) if c in odd) for v in T}
    return InducedSubgraphReport(T, even, odd, deg, to_even, to_odd)


def check_trapping_conditions(graph: TannerGraph, T: Iterable[int]) -> TrappingVerdict:
    """Structural trapping-set test for column-weight-three graphs.

    (a) every member has at least two edges into even-degree checks;
    (b) no outside variable has two edges into odd-degree checks.
    """
    rep = induced_subgraph(graph, T)
    if not rep.T:
        raise ValueError("T must be nonempty")
    viol_a = sorted(v for v in rep.T if rep.edges_to_even[v] < 2)
    outside: set[int] = set()
    for c in rep.odd_checks:
        outside.update(w for w in graph.chk_neighbors(c) if w not in rep.T)
    viol_b: list[tuple[int, int, int]] = []
    for w in sorted(outside):
        hits = sorted(c for c in graph.var_neighbors(w) if c in rep.odd_checks)
        if len(hits) >= 2:
            viol_b.extend(sorted({(a, b, w) for a, b in itertools.combinations(hits, 2)}))
    return TrappingVerdict(rep, viol_a, viol_b, not rep.odd_checks)


# --------------------------------------------------------------------------
# failure sets


@dataclass
class FailureCheck:
    """Failure verdict for one injected support.

    ``failure`` is decided from the decoder's state cycle and so does not
    depend on the iteration cap; ``outcome`` is the capped decode.
    """

    T: frozenset[int]
    failure: bool
    outcome: DecodeOutcome
    cycle: StateCycle
    algorithm: str

    @property
    def cap_dependent(self) -> bool:
        return self.failure != self.outcome.failure

    def as_dict(self) -> dict:
        return {
            "T": sorted(self.T),
            "failure": self.failure,
            "algorithm": self.algorithm,
            "outcome": self.outcome.as_dict(),
            "stateCycle": self.cycle.as_dict(),
        }


def certified_failure(cycle: StateCycle, reference: np.ndarray | None = None) -> bool:
    """Failure under the stop-at-first-codeword rule for any iteration cap."""
    if cycle.first_codeword is None:
        return True
    ref = 0 if reference is None else reference
    return bool(np.any(cycle.first_codeword != ref))


def is_failure_set(
    graph: TannerGraph, T: Iterable[int], config: DecoderConfig = DecoderConfig()
) -> FailureCheck:
    T = frozenset(T)
    word = word_from_support(graph.n, T)
    outcome = decode(graph, word, config)
    cycle = detect_state_cycle(graph, word, algorithm=config.algorithm, rule=config.decision_rule)
    return FailureCheck(T, certified_failure(cycle), outcome, cycle, config.algorithm)


def fails_under_both(graph: TannerGraph, T: Iterable[int], max_iterations: int = 100) -> bool:
    T = frozenset(T)
    return all(
        is_failure_set(graph, T, DecoderConfig(max_iterations, algo)).failure
        for algo in ("gallager-a", "bit-flip")
    )


@dataclass
class FailureSearchReport:
    k_max: int
    failing_supports: list[tuple[int, ...]]
    tested: int
    exhaustive: bool
    algorithm: str

    @property
    def min_failing_weight(self) -> int | None:
        return min((len(s) for s in self.failing_supports), default=None)

    def as_dict(self) -> dict:
        return {
            "kMax": self.k_max,
            "algorithm": self.algorithm,
            "tested": self.tested,
            "exhaustive": self.exhaustive,
            "minFailingWeight": self.min_failing_weight,
            "failingSupports": [list(s) for s in self.failing_supports],
        }


_CHUNK = 4096


def _chunks(it: Iterator[tuple[int, ...]], size: int) -> Iterator[list[tuple[int, ...]]]:
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block


def _failing_in_block(args) -> list[tuple[int, ...]]:
    graph, block, config = args
    words = np.zeros((len(block), graph.n), dtype=np.uint8)
    for i, s in enumerate(block):
        words[i, list(s)] = 1
    res = decode_batch(graph, words, config)
    fail = res.failures()
    return [block[i] for i in np.flatnonzero(fail)]


def _sample_supports(n: int, k: int, count: int, rng: np.random.Generator) -> list[tuple[int, ...]]:
    out: set[tuple[int, ...]] = set()
    while len(out) < count:
        out.add(tuple(sorted(int(x) for x in rng.choice(n, size=k, replace=False))))
    return sorted(out)


def search_failure_sets(
    graph: TannerGraph,
    k_max: int,
    config: DecoderConfig = DecoderConfig(),
    budget: int = 1_000_000,
    seed: int = 0,
    jobs: int = 1,
    variables: Iterable[int] | None = None,
    stop_at_first: bool = False,
) -> FailureSearchReport:
    """Test supports of weight 1..k_max, weight by weight.

    A weight whose full family fits in the remaining budget is swept
    exhaustively; the first that does not is sampled with what is left and
    the sweep stops there, flagged non-exhaustive.  ``variables`` restricts
    supports to a subset of positions.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    pool = sorted(set(variables)) if variables is not None else list(range(graph.n))
    rng = np.random.default_rng(seed)
    remaining = budget
    exhaustive = True
    tested = 0
    failing: list[tuple[int, ...]] = []
    ex = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for k in range(1, min(k_max, len(pool)) + 1):
            total = math.comb(len(pool), k)
            if total <= remaining:
                supports: Iterable[tuple[int, ...]] = itertools.combinations(pool, k)
                count = total
            else:
                exhaustive = False
                if remaining <= 0:
                    break
                picks = _sample_supports(len(pool), k, remaining, rng)
                supports = [tuple(pool[i] for i in s) for s in picks]
                count = remaining
            work = ((graph, block, config) for block in _chunks(iter(supports), _CHUNK))
            parts = ex.map(_failing_in_block, work) if ex else map(_failing_in_block, work)
            for part in parts:
                failing.extend(part)
            tested += count
            remaining -= count
            if not exhaustive or (stop_at_first and failing):
                break
    finally:
        if ex:
            ex.shutdown()
    failing.sort(key=lambda s: (len(s), s))
    return FailureSearchReport(k_max, failing, tested, exhaustive, config.algorithm)


# --------------------------------------------------------------------------
# critical number


def ends_up_in(graph: TannerGraph, initial: Iterable[int], T: frozenset[int], config: DecoderConfig) -> tuple[bool, StateCycle]:
    """Does injecting ``initial`` leave the decoder erring inside ``T`` forever?

    If the decoder halts on a codeword, that codeword is its final state.
    Otherwise every estimate on the terminal state cycle must hit ``T``.
    """
    word = word_from_support(graph.n, initial)
    cycle = detect_state_cycle(graph, word, algorithm=config.algorithm, rule=config.decision_rule)
    if cycle.first_codeword is not None:
        hit = bool(any(cycle.first_codeword[v] for v in T))
    else:
        hit = all(any(est[v] for v in T) for est in cycle.estimates)
    return hit, cycle


@dataclass
class CriticalNumberReport:
    trapping_set: frozenset[int]
    critical_number: int | None
    witness: tuple[int, ...] | None
    certificate: StateCycle | None
    subsets_tested: int
    restricted_to_T: bool = True
    algorithm: str = "gallager-a"

    def as_dict(self) -> dict:
        d = {
            "T": sorted(self.trapping_set),
            "criticalNumber": self.critical_number,
            "witness": list(self.witness) if self.witness is not None else None,
            "subsetsTested": self.subsets_tested,
            "restrictedToT": self.restricted_to_T,
            "algorithm": self.algorithm,
        }
        if self.certificate is not None:
            d["certificate"] = self.certificate.as_dict()
        if self.critical_number is None:
            d["note"] = "critical number exceeds |T| under the subset restriction"
        return d


def critical_number(
    graph: TannerGraph,
    T: Iterable[int],
    config: DecoderConfig = DecoderConfig(),
    widen: bool = False,
    budget: int = 200_000,
) -> CriticalNumberReport:
    """Smallest initial error whose decoder trajectory ends up in ``T``.

    Candidates are subsets of ``T`` in increasing size, lexicographic within a
    size.  ``widen`` searches all supports of weight <= |T| instead, up to
    ``budget`` candidates.
    """
    require_rule_a(config)
    T = frozenset(T)
    if not check_trapping_conditions(graph, T).is_trapping:
        raise ValueError("T does not satisfy the trapping-set conditions")
    pool = sorted(T) if not widen else list(range(graph.n))
    tested = 0
    for k in range(1, len(T) + 1):
        for S in itertools.combinations(pool, k):
            if tested >= budget:
                return CriticalNumberReport(T, None, None, None, tested, not widen, config.algorithm)
            tested += 1
            hit, cycle = ends_up_in(graph, S, T, config)
            if hit:
                return CriticalNumberReport(T, k, S, cycle, tested, not widen, config.algorithm)
    return CriticalNumberReport(T, None, None, None, tested, not widen, config.algorithm)


def codeword_indicator(graph: TannerGraph, T: Iterable[int]) -> bool:
    return is_codeword(graph, word_from_support(graph.n, T))
