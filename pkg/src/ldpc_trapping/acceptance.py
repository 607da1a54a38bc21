"""Exit criteria as executable checks.

Each ``criterion_*`` function returns a CriterionResult; ``run_all`` runs
them in order.  The pytest module and the ``verify`` subcommand are thin
wrappers over these.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from .bounds import find_guaranteed_failure, girth_upper_bound, theorem2_threshold
from .decoders import (
    DecoderConfig,
    decode,
    decode_batch,
    fixed_point_mask,
)
from .gadgets import load_fixture
from .tanner import (
    TannerGraph,
    construct_girth_constrained,
    enumerate_codewords,
    girth,
    sample_regular_graph,
    word_from_support,
)
from .trapping import check_trapping_conditions, critical_number, fails_under_both


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self, timing: bool = True) -> str:
        mark = "PASS" if self.passed else "FAIL"
        tail = f" ({self.seconds:.1f}s)" if timing else ""
        return f"[{mark}] {self.number}. {self.title}: {self.detail}{tail}"

    def as_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed, "detail": self.detail}


def _timed(number: int, title: str):
    def wrap(fn):
        def run(*args, **kwargs) -> CriterionResult:
            t0 = time.perf_counter()
            passed, detail = fn(*args, **kwargs)
            return CriterionResult(number, title, passed, detail, time.perf_counter() - t0)

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


# --------------------------------------------------------------------------
# 1


IFF_SHAPES = [(4, 12), (4, 16), (5, 10), (5, 15), (6, 12), (6, 14), (6, 16)]


def iff_graphs(count: int = 210, seed: int = 0) -> list[TannerGraph]:
    out = []
    for i in range(count):
        rho, n = IFF_SHAPES[i % len(IFF_SHAPES)]
        out.append(sample_regular_graph(n, rho, seed * 100_003 + i))
    return out


def iff_disagreements(graph: TannerGraph, max_size: int = 5) -> tuple[int, int]:
    """(subsets compared, disagreements) for one graph."""
    subsets = [s for k in range(1, max_size + 1) for s in itertools.combinations(range(graph.n), k)]
    words = np.zeros((len(subsets), graph.n), dtype=np.uint8)
    for i, s in enumerate(subsets):
        words[i, list(s)] = 1
    fixed = fixed_point_mask(graph, words)
    compared = bad = 0
    for i, s in enumerate(subsets):
        verdict = check_trapping_conditions(graph, s)
        if verdict.is_codeword:
            continue
        compared += 1
        if verdict.is_trapping != bool(fixed[i]):
            bad += 1
    return compared, bad


@_timed(1, "Trapping-set conditions <=> fixed point")
def criterion_1(count: int = 210):
    total = bad = 0
    for graph in iff_graphs(count):
        c, b = iff_disagreements(graph)
        total += c
        bad += b
    return bad == 0 and count >= 200, f"{count} graphs, {total} subsets, {bad} disagreements"


# --------------------------------------------------------------------------
# 2

FIXED_POINT_FIXTURES = ("ts_2_2", "ts_3_1", "ts_3_3", "ts_4_2", "ts_4_4", "ts_5_3", "cycle_10")


def gadget_fixed_point_ok(name: str) -> tuple[bool, str]:
    fx = load_fixture(name)
    w = word_from_support(fx.graph.n, fx.designated_T)
    ga = decode(fx.graph, w, DecoderConfig(max_iterations=100))
    ga_ok = ga.status == "max-iter-reached" and np.array_equal(ga.output, w)
    bf = decode(fx.graph, w, DecoderConfig(max_iterations=100, algorithm="bit-flip", trace=True))
    bf_ok = all(np.array_equal(step.estimate, w) for step in bf.trace) and np.array_equal(bf.output, w)
    return ga_ok and bf_ok, f"{name}: GA {'ok' if ga_ok else 'BAD'}, BF {'ok' if bf_ok else 'BAD'}"


@_timed(2, "Gadget fixed points under both decoders")
def criterion_2():
    results = [gadget_fixed_point_ok(n) for n in FIXED_POINT_FIXTURES]
    bad = [d for ok, d in results if not ok]
    return not bad, f"{len(results)} fixtures" + (f"; failing: {bad}" if bad else "")


# --------------------------------------------------------------------------
# 3


def case_trace_expected(case: str) -> dict[int, dict]:
    """Messages on the labelled fragment edges, read off the case-(a)/(b) trace.

    Keys are 1-based (variable, check) labels; values give the expected
    variable-to-check and check-to-variable bit for iterations 1 and 2.
    """
    T = {1, 2, 3, 4}
    checks = {1: [1, 2], 2: [2, 3], 3: [1, 3], 5: [2, 4], 6: [3, 4], 4: [1, 5], 7: [4, 5]}
    third = 8 if case == "a" else 2
    checks.setdefault(third, [])
    checks[third] = checks[third] + [5]
    omega1 = {v: (1 if v in T else 0) for v in range(1, 6)}
    exp = {}
    for c, vs in checks.items():
        for v in vs:
            if c in (4, 7):
                # odd checks: incorrect to everyone but their single member of T
                p1 = 0 if v in T else 1
            elif c == third and case == "a":
                p1 = 0
            else:
                # even checks send 1 to members of T, 0 to outsiders
                p1 = 1 if v in T else 0
            w2 = 1 if v in T else (1 if c == third else 0)
            p2 = p1
            if case == "b" and c == 2:
                p2 = 0
            exp[(v, c)] = {"omega1": omega1[v], "varpi1": p1, "omega2": w2, "varpi2": p2}
    return exp


def case_trace_ok(case: str) -> tuple[bool, str]:
    fx = load_fixture(f"lemma3_case_{case}")
    G = fx.graph
    w = word_from_support(G.n, {0, 1, 2, 3})
    out = decode(G, w, DecoderConfig(max_iterations=100, trace=True))
    s1, s2 = out.trace[0].messages, out.trace[1].messages
    problems = []
    exp = case_trace_expected(case)
    for (v, c), want in exp.items():
        es = [e for e in G.var_edges[v - 1] if G.edges[e][1] == c - 1]
        if len(es) != 1:
            problems.append(f"edge v{v}-c{c} missing")
            continue
        e = es[0]
        got = {
            "omega1": int(s1.var_to_check[e]),
            "varpi1": int(s1.check_to_var[e]),
            "omega2": int(s2.var_to_check[e]),
            "varpi2": int(s2.check_to_var[e]),
        }
        if got != want:
            problems.append(f"v{v}-c{c}: {got} != {want}")
    # every variable outside v1..v5 sends only correct messages
    for e, (v, c) in enumerate(G.edges):
        if v >= 5 and (s1.var_to_check[e] or s2.var_to_check[e]):
            problems.append(f"outside v{v + 1} sends 1 on c{c + 1}")
    if not np.array_equal(out.output, w):
        problems.append("final output differs from input")
    detail = f"case ({case}): {len(exp)} labelled edges" + (f"; {problems[:3]}" if problems else " match")
    return not problems, detail


@_timed(3, "Case (a)/(b) message traces")
def criterion_3():
    res = [case_trace_ok("a"), case_trace_ok("b")]
    return all(ok for ok, _ in res), "; ".join(d for _, d in res)


# --------------------------------------------------------------------------
# 4


def replay_codes() -> list[tuple[str, TannerGraph]]:
    codes = [(name, load_fixture(name).graph) for name in ("ts_2_2", "ts_3_3", "ts_4_4", "cycle_10")]
    for g, n, seeds in ((6, 40, (0, 1)), (8, 80, (0, 1)), (10, 280, (0,))):
        for s in seeds:
            codes.append((f"peg g>={g} n={n} seed={s}", construct_girth_constrained(n, 4, g, s)))
    return codes


def replay_ok(label: str, graph: TannerGraph) -> tuple[bool, str]:
    rep = find_guaranteed_failure(graph)
    g = rep.girth
    if rep.confirmed is None or g is None:
        return False, f"{label}: nothing confirmed"
    size = len(rep.confirmed)
    if g == 4:
        ok = size <= 3
    elif g == 6:
        ok = size <= 4
    elif g == 8:
        ok = size <= 5
    elif g == 10:
        cyc = frozenset(girth(graph).witness.variables(graph))
        ok = size == 5 and check_trapping_conditions(graph, rep.confirmed).is_trapping
        # a shortest cycle's variable set; any 10-cycle qualifies
        ok = ok and (rep.confirmed == cyc or rep.case_label == "L5-shortest-cycle")
    else:
        ok = False
    ok = ok and fails_under_both(graph, rep.confirmed)
    return ok, f"{label}: g={g} {rep.case_label} size={size}"


@_timed(4, "Girth-indexed failure sets")
def criterion_4():
    res = [replay_ok(lbl, G) for lbl, G in replay_codes()]
    girths = sorted({int(d.split("g=")[1].split()[0]) for _, d in res})
    passed = all(ok for ok, _ in res) and girths == [4, 6, 8, 10]
    bad = [d for ok, d in res if not ok]
    return passed, f"{len(res)} codes, girths {girths}" + (f"; failing: {bad}" if bad else "")


# --------------------------------------------------------------------------
# 5


def parallel_edge_graphs(count: int = 20, n: int = 8, rho: int = 6) -> list[tuple[int, TannerGraph]]:
    """First ``count`` configuration-model samples (seeds 0, 1, ...) with a parallel edge."""
    out = []
    seed = 0
    while len(out) < count:
        G = sample_regular_graph(n, rho, seed)
        if G.has_parallel_edges():
            out.append((seed, G))
        seed += 1
    return out


def single_error_fails(graph: TannerGraph, v: int) -> bool:
    w = word_from_support(graph.n, [v])
    return all(
        decode(graph, w, DecoderConfig(algorithm=a)).failure for a in ("gallager-a", "bit-flip")
    )


@_timed(5, "Parallel edge defeats a single error")
def criterion_5(count: int = 20):
    bad = []
    for seed, G in parallel_edge_graphs(count):
        if not any(single_error_fails(G, v) for v in G.parallel_edge_variables(None)):
            bad.append(seed)
    return not bad, f"{count} graphs (n=8, rho=6)" + (f"; no failing parallel-edge variable at seeds {bad}" if bad else "")


# --------------------------------------------------------------------------
# 6


def threshold_oracle(alpha: float, rho: int) -> int:
    """Plain integer scan with base-10 logs; the smallest qualifying N."""
    N = 1
    while not (alpha * N > 2 * (math.log10(N) / math.log10(2 * (rho - 1)) + 1) and alpha * N >= 5):
        N += 1
    return N


@_timed(6, "Block-length threshold desk check")
def criterion_6(samples: int = 20, alpha: float = 0.1, rho: int = 6):
    rep = theorem2_threshold(alpha, rho)
    oracle = threshold_oracle(alpha, rho)
    problems = []
    if rep.N != oracle:
        problems.append(f"N={rep.N} but oracle {oracle}")
    for n in (rep.N + 1, 2 * rep.N):
        for s in range(samples):
            G = sample_regular_graph(n, rho, s)
            g = girth(G).girth
            if g is None or not g < 2 * alpha * n:
                problems.append(f"n={n} seed={s}: girth {g}")
                continue
            fr = find_guaranteed_failure(G)
            if fr.confirmed is None or len(fr.confirmed) > alpha * n:
                problems.append(f"n={n} seed={s}: failure set {fr.size}")
    detail = f"N={rep.N} (oracle {oracle}); {2 * samples} codes at n in {{{rep.N + 1}, {2 * rep.N}}}"
    return not problems, detail + (f"; {problems[:3]}" if problems else "")


# --------------------------------------------------------------------------
# 7


def brute_force_girth(graph: TannerGraph) -> int | None:
    """Shortest simple cycle by exhaustive DFS over edge sequences."""
    n = graph.n
    adj: dict[int, list[tuple[int, int]]] = {}
    for e, (v, c) in enumerate(graph.edges):
        adj.setdefault(v, []).append((e, n + c))
        adj.setdefault(n + c, []).append((e, v))
    best = None

    def dfs(start, node, used_edges, visited, length):
        nonlocal best
        if best is not None and length >= best:
            return
        for e, w in adj.get(node, []):
            if e in used_edges:
                continue
            if w == start and length + 1 >= 2:
                if best is None or length + 1 < best:
                    best = length + 1
                continue
            if w in visited:
                continue
            visited.add(w)
            used_edges.add(e)
            dfs(start, w, used_edges, visited, length + 1)
            used_edges.discard(e)
            visited.discard(w)

    for s in adj:
        dfs(s, s, set(), {s}, 0)
    return best


def girth_oracle_graphs(count: int = 100) -> list[TannerGraph]:
    shapes = [(4, 8), (4, 12), (5, 10), (6, 10), (6, 14), (4, 4), (6, 6)]
    out = []
    for i in range(count):
        rho, n = shapes[i % len(shapes)]
        if i % 2:
            out.append(sample_regular_graph(n, rho, 5000 + i))
        else:
            # sparser, parallel-free instances exercise longer cycles
            G = sample_regular_graph(n, rho, 5000 + i)
            edges = list(dict.fromkeys(G.edges))
            out.append(TannerGraph.from_edges(G.n, G.m, edges))
    return out


@_timed(7, "Girth oracle and girth bound")
def criterion_7(oracle_count: int = 100, bound_count: int = 500):
    mism = 0
    for G in girth_oracle_graphs(oracle_count):
        if girth(G).girth != brute_force_girth(G):
            mism += 1
    viol = 0
    for n in (30, 60, 120):
        for s in range(bound_count):
            g = girth(sample_regular_graph(n, 6, 10_000 + s)).girth
            if g is not None and g > girth_upper_bound(n, 6):
                viol += 1
    return mism == 0 and viol == 0, (
        f"{oracle_count} oracle graphs, {mism} mismatches; {3 * bound_count} sampled graphs, {viol} bound violations"
    )


# --------------------------------------------------------------------------
# 8


@_timed(8, "Codeword symmetry of both decoders")
def criterion_8(errors: int = 1000, seed: int = 8):
    G = load_fixture("ts_3_3").graph
    codewords = enumerate_codewords(G)
    rng = np.random.default_rng(seed)
    E = rng.integers(0, 2, size=(errors, G.n), dtype=np.uint8)
    viol = 0
    for algo in ("gallager-a", "bit-flip"):
        cfg = DecoderConfig(algorithm=algo)
        base = decode_batch(G, E, cfg)
        for c in codewords:
            shifted = decode_batch(G, E ^ c, cfg)
            viol += int(np.any(shifted.output != (base.output ^ c), axis=1).sum())
            fail_shift = np.any(shifted.output != c, axis=1)
            viol += int(np.sum(fail_shift != base.failures()))
    return viol == 0, f"n={G.n}, {len(codewords)} codewords x {errors} errors x 2 decoders, {viol} violations"


# --------------------------------------------------------------------------
# 9


@_timed(9, "Critical numbers")
def criterion_9():
    parts = []
    ok = True
    for name in ("ts_3_3", "ts_4_2"):
        fx = load_fixture(name)
        rep = critical_number(fx.graph, fx.designated_T)
        good = rep.critical_number == 3 and rep.witness is not None and set(rep.witness) <= fx.designated_T
        if good and rep.certificate.first_codeword is None:
            good = all(any(est[v] for v in fx.designated_T) for est in rep.certificate.estimates)
        ok &= good
        parts.append(f"{name}: {rep.critical_number} witness {list(rep.witness or [])}")
    return ok, "; ".join(parts)


CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
]


def run_all(echo=None) -> list[CriterionResult]:
    results = []
    for crit in CRITERIA:
        res = crit()
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
