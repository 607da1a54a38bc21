import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ldpc_trapping.decoders import DecoderConfig, decode, is_fixed_point
from ldpc_trapping.tanner import TannerGraph, enumerate_codewords, sample_regular_graph, support_of, word_from_support
from ldpc_trapping.trapping import (
    check_trapping_conditions,
    codeword_indicator,
    critical_number,
    ends_up_in,
    fails_under_both,
    induced_subgraph,
    is_failure_set,
    search_failure_sets,
)

TRAPPING_FIXTURES = ["ts_2_2", "ts_3_1", "ts_3_3", "ts_4_2", "ts_4_4", "ts_5_3", "cycle_10", "parallel_edge"]


def test_three_three_verdict(fixture):
    fx = fixture("ts_3_3")
    v = check_trapping_conditions(fx.graph, [0, 1, 2])
    assert v.is_trapping
    assert v.label == "(3,3)"
    d = v.as_dict()
    assert d["C"] == 3 and d["evenCount"] == 3 and d["violations"] == []
    assert d["O"] == [3, 4, 5]


def test_shared_outside_variable_breaks_condition_b(fixture):
    # ts_4_2 contains the (3,3) structure plus v4 on c5, c6, c7
    G = fixture("ts_4_2").graph
    v = check_trapping_conditions(G, [0, 1, 2])
    assert not v.is_trapping
    assert v.condition_a_violations == []
    assert (4, 5, 3) in v.condition_b_violations


def test_adding_outside_variable_flips_verdict(fixture):
    assert check_trapping_conditions(fixture("ts_3_3").graph, [0, 1, 2]).is_trapping
    assert not check_trapping_conditions(fixture("ts_4_2").graph, [0, 1, 2]).is_trapping


def test_single_variable_fails_condition_a(fixture):
    G = fixture("ts_3_3").graph
    v = check_trapping_conditions(G, [5])
    assert v.condition_a_violations == [5]
    assert not v.is_trapping


def test_double_edge_counts_as_even(fixture):
    G = fixture("parallel_edge").graph
    rep = induced_subgraph(G, [0])
    assert rep.induced_degree[0] == 2
    assert 0 in rep.even_checks
    assert check_trapping_conditions(G, [0]).is_trapping


def test_double_edge_into_odd_check_violates_b():
    # v1 on (c0, c1, c2); outside v0 doubled into c0 and once into c1
    edges = [(0, 0), (0, 0), (0, 1), (1, 0), (1, 1), (1, 2)]
    G = TannerGraph.from_edges(2, 3, edges)
    v = check_trapping_conditions(G, [1])
    assert (0, 0, 0) in v.condition_b_violations


def test_empty_set_rejected(fixture):
    with pytest.raises(ValueError):
        check_trapping_conditions(fixture("ts_3_3").graph, [])


def test_codeword_indicator_is_flagged(fixture):
    G = fixture("weight4_codeword").graph
    T = [0, 1, 2, 3]
    assert codeword_indicator(G, T)
    v = check_trapping_conditions(G, T)
    assert v.is_codeword
    assert "note" in v.as_dict()


@given(st.integers(0, 1000), st.sets(st.integers(0, 15), min_size=1, max_size=6))
@settings(max_examples=80, deadline=None)
def test_induced_bookkeeping(seed, T):
    G = sample_regular_graph(16, 4, seed)
    rep = induced_subgraph(G, T)
    assert not rep.even_checks & rep.odd_checks
    assert set(rep.induced_degree) == rep.even_checks | rep.odd_checks
    assert sum(rep.induced_degree.values()) == 3 * len(T)
    v = check_trapping_conditions(G, T)
    assert v.is_trapping == (not v.condition_a_violations and not v.condition_b_violations)


@given(st.integers(0, 2000), st.sets(st.integers(0, 11), min_size=1, max_size=5))
@settings(max_examples=150, deadline=None)
def test_conditions_match_fixed_points(seed, T):
    G = sample_regular_graph(12, 6, seed)
    v = check_trapping_conditions(G, T)
    if not v.is_codeword:
        assert v.is_trapping == is_fixed_point(G, word_from_support(G.n, T))


# --------------------------------------------------------------------------
# failure sets


@pytest.mark.parametrize("name", TRAPPING_FIXTURES)
def test_trapping_fixtures_fail_under_both(fixture, name):
    fx = fixture(name)
    assert fails_under_both(fx.graph, fx.designated_T)


def test_codeword_support_is_failure(fixture):
    G = fixture("weight4_codeword").graph
    chk = is_failure_set(G, [0, 1, 2, 3])
    assert chk.failure
    assert chk.outcome.status == "codeword-found"
    # the weight-3 part converges to the weight-4 codeword
    part = is_failure_set(G, [0, 1, 2])
    assert part.failure
    assert support_of(part.outcome.output) == {0, 1, 2, 3}


def test_empty_support_is_not_failure(fixture):
    assert not is_failure_set(fixture("ts_3_3").graph, []).failure


def test_certified_failure_is_cap_independent(fixture):
    fx = fixture("ts_3_3")
    chk = is_failure_set(fx.graph, fx.designated_T, DecoderConfig(max_iterations=1))
    assert chk.failure and not chk.cap_dependent


def test_search_on_girth_four(fixture):
    G = fixture("ts_2_2").graph
    rep = search_failure_sets(G, 3)
    assert rep.exhaustive
    assert rep.min_failing_weight is not None and rep.min_failing_weight <= 3
    assert (0, 1) in rep.failing_supports


def test_search_finds_nothing_when_single_errors_are_corrected(fixture):
    G = fixture("ts_3_3").graph
    assert all(not decode(G, word_from_support(G.n, [v])).failure for v in range(G.n))
    rep = search_failure_sets(G, 1)
    assert rep.exhaustive and rep.failing_supports == [] and rep.tested == G.n


def test_search_budget_accounting():
    G = sample_regular_graph(10, 5, 0)
    full = search_failure_sets(G, 2, budget=math.comb(10, 1) + math.comb(10, 2))
    assert full.exhaustive and full.tested == 55
    short = search_failure_sets(G, 2, budget=54)
    assert not short.exhaustive


def test_search_parallel_merge_is_deterministic(fixture):
    G = fixture("ts_4_2").graph
    a = search_failure_sets(G, 3)
    b = search_failure_sets(G, 3, jobs=2)
    assert a.as_dict() == b.as_dict()
    assert a.failing_supports == sorted(a.failing_supports, key=lambda s: (len(s), s))


def test_search_rejects_bad_weight(fixture):
    with pytest.raises(ValueError):
        search_failure_sets(fixture("ts_3_3").graph, 0)


# --------------------------------------------------------------------------
# critical numbers


@pytest.mark.parametrize("name, want", [("ts_3_3", 3), ("ts_4_2", 3), ("ts_4_4", 4), ("ts_5_3", 3), ("ts_2_2", 2)])
def test_critical_numbers(fixture, name, want):
    fx = fixture(name)
    rep = critical_number(fx.graph, fx.designated_T)
    assert rep.critical_number == want
    assert set(rep.witness) <= fx.designated_T
    assert rep.critical_number <= len(fx.designated_T)
    hit, cyc = ends_up_in(fx.graph, rep.witness, fx.designated_T, DecoderConfig())
    assert hit
    assert all(any(e[v] for v in fx.designated_T) for e in cyc.estimates)


def test_full_set_is_only_failing_subset(fixture):
    fx = fixture("ts_4_4")
    T = sorted(fx.designated_T)
    rep = critical_number(fx.graph, T)
    assert rep.critical_number == len(T)
    assert rep.witness == tuple(T)


def test_critical_number_requires_trapping_set(fixture):
    with pytest.raises(ValueError):
        critical_number(fixture("ts_4_2").graph, [0, 1, 2])


def test_critical_number_requires_rule_a(fixture):
    fx = fixture("ts_3_3")
    with pytest.raises(ValueError):
        critical_number(fx.graph, fx.designated_T, DecoderConfig(decision_rule="B"))


def test_widened_search_is_no_larger(fixture):
    fx = fixture("ts_3_3")
    wide = critical_number(fx.graph, fx.designated_T, widen=True)
    assert not wide.restricted_to_T
    assert wide.critical_number is not None and wide.critical_number <= 3


def test_report_json_fields(fixture):
    fx = fixture("ts_3_3")
    d = critical_number(fx.graph, fx.designated_T).as_dict()
    assert {"criticalNumber", "witness", "certificate"} <= set(d)
