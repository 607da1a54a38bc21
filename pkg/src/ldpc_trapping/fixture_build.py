"""Regenerate the frozen gadget fixtures shipped in ``ldpc_trapping/fixtures``.

    python -m ldpc_trapping.fixture_build [OUTDIR]

Tests read the frozen files, so they never depend on a completion search
succeeding at test time.
"""

from __future__ import annotations

import sys
from pathlib import Path

from .decoders import DecoderConfig, decode, is_fixed_point
from .gadgets import CompletionSpec, Fixture, build_gadget, complete_to_regular, write_fixtures
from .tanner import construct_girth_constrained, girth, word_from_support
from .trapping import check_trapping_conditions, critical_number

RHO = 4

# (name, completion overrides, required critical number or None)
PLAN = [
    ("ts_2_2", {}, None),
    ("ts_3_1", {}, None),
    ("ts_3_3", {}, 3),
    ("ts_4_2", {}, 3),
    ("ts_4_4", {}, None),
    ("ts_5_3", {}, None),
    ("cycle_10", {"min_n": 200, "retries": 10}, None),
    ("parallel_edge", {}, None),
    ("lemma3_case_a", {}, None),
    ("lemma3_case_b", {}, None),
    ("weight4_codeword", {}, None),
    ("weight6_codeword", {}, None),
]


def expected_verdicts(graph, T, want_critical: bool) -> dict:
    w = word_from_support(graph.n, T)
    verdict = check_trapping_conditions(graph, T)
    out = {
        "isTrapping": verdict.is_trapping,
        "C": verdict.report.C,
        "fixedPoint": is_fixed_point(graph, w),
        "failureGallagerA": decode(graph, w).failure,
        "failureBitFlip": decode(graph, w, DecoderConfig(algorithm="bit-flip")).failure,
    }
    if want_critical and verdict.is_trapping:
        out["criticalNumber"] = critical_number(graph, T).critical_number
    return out


def build_all(seed: int = 0, log=print) -> list[Fixture]:
    fixtures = []
    for name, overrides, need_cn in PLAN:
        gadget = build_gadget(name)
        s = seed
        while True:
            graph = complete_to_regular(gadget, CompletionSpec(rho=RHO, seed=s, **overrides))
            exp = expected_verdicts(graph, gadget.designated_T, gadget.is_trapping and graph.n <= 64)
            if need_cn is None or exp.get("criticalNumber") == need_cn:
                break
            s += 1
        g = girth(graph).girth
        log(f"{name}: n={graph.n} m={graph.m} girth={g} seed={s} {exp}")
        fixtures.append(Fixture(name, graph, RHO, g, gadget.designated_T, exp))
    g12 = construct_girth_constrained(1600, RHO, 12, seed=3, retries=5)
    log(f"peg_girth12: n={g12.n} girth={girth(g12).girth}")
    fixtures.append(Fixture("peg_girth12", g12, RHO, girth(g12).girth, frozenset(), {}))
    return fixtures


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    out = Path(argv[0]) if argv else Path(__file__).parent / "fixtures"
    write_fixtures(build_all(), out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
