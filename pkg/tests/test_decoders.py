import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ldpc_trapping.decoders import (
    DecoderConfig,
    NoRecurrenceError,
    decode,
    decode_batch,
    detect_state_cycle,
    fixed_point_mask,
    is_fixed_point,
    require_rule_a,
    simulate_bsc,
    trace_jsonl,
)
from ldpc_trapping.tanner import TannerGraph, enumerate_codewords, sample_regular_graph, syndrome, word_from_support

GA = DecoderConfig()
BF = DecoderConfig(algorithm="bit-flip")
TRAPPING_FIXTURES = ["ts_2_2", "ts_3_1", "ts_3_3", "ts_4_2", "ts_4_4", "ts_5_3", "cycle_10", "parallel_edge"]


def test_all_zero_input():
    G = sample_regular_graph(12, 4, 0)
    z = np.zeros(G.n, dtype=np.uint8)
    ga = decode(G, z, GA)
    assert (ga.status, ga.iterations_run, ga.failure) == ("codeword-found", 1, False)
    bf = decode(G, z, BF)
    assert (bf.status, bf.iterations_run, bf.failure) == ("codeword-found", 0, False)
    assert not ga.output.any() and not bf.output.any()


@pytest.mark.parametrize("name", TRAPPING_FIXTURES)
def test_trapping_fixture_is_fixed_under_both(fixture, name):
    fx = fixture(name)
    w = word_from_support(fx.graph.n, fx.designated_T)
    ga = decode(fx.graph, w, GA)
    assert ga.status == "max-iter-reached"
    assert np.array_equal(ga.output, w)
    bf = decode(fx.graph, w, DecoderConfig(algorithm="bit-flip", trace=True))
    assert all(np.array_equal(s.estimate, w) for s in bf.trace)


def test_case_a_first_iteration(fixture):
    G = fixture("lemma3_case_a").graph
    w = word_from_support(G.n, range(4))
    out = decode(G, w, DecoderConfig(trace=True))
    first = out.trace[0]
    for v in (1, 2):
        assert all(first.messages.check_to_var[e] == 1 for e in G.var_edges[v])
    assert np.array_equal(first.estimate, w)
    assert np.array_equal(out.output, w)


def test_single_error_at_parallel_edge_fails(fixture):
    G = fixture("parallel_edge").graph
    w = word_from_support(G.n, [0])
    assert decode(G, w, GA).failure
    assert decode(G, w, BF).failure


def test_single_error_corrected_without_parallel_edges(fixture):
    G = fixture("ts_3_3").graph
    for v in range(G.n):
        w = word_from_support(G.n, [v])
        assert not decode(G, w, GA).failure
        assert not is_fixed_point(G, w)


def test_rejects_bad_inputs():
    G = TannerGraph.from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    with pytest.raises(ValueError):
        decode(G, [0, 0], GA)
    H = sample_regular_graph(8, 4, 0)
    with pytest.raises(ValueError):
        decode(H, [0] * 9, GA)
    with pytest.raises(ValueError):
        DecoderConfig(max_iterations=0)
    with pytest.raises(ValueError):
        DecoderConfig(algorithm="min-sum")


def test_rule_b_is_flagged():
    cfg = DecoderConfig(decision_rule="B")
    assert cfg.unanalyzed
    with pytest.raises(ValueError):
        require_rule_a(cfg)
    G = sample_regular_graph(8, 4, 0)
    out = decode(G, word_from_support(G.n, [0]), cfg)
    assert out.status in ("codeword-found", "max-iter-reached")


def test_outcome_invariants_and_reference():
    G = sample_regular_graph(16, 4, 2)
    rng = np.random.default_rng(0)
    for algo in ("gallager-a", "bit-flip"):
        cfg = DecoderConfig(algorithm=algo)
        for _ in range(50):
            w = (rng.random(G.n) < 0.15).astype(np.uint8)
            out = decode(G, w, cfg)
            if out.status == "codeword-found":
                assert syndrome(G, out.output)[1]
            assert out.failure == bool(out.output.any())
    c = next(c for c in enumerate_codewords(G) if c.any())
    assert decode(G, c, GA).failure
    assert not decode(G, c, GA, reference=c).failure


@pytest.mark.parametrize("algo", ["gallager-a", "bit-flip"])
def test_batch_matches_single(algo):
    G = sample_regular_graph(20, 5, 4)
    rng = np.random.default_rng(1)
    W = (rng.random((64, G.n)) < 0.1).astype(np.uint8)
    cfg = DecoderConfig(algorithm=algo)
    res = decode_batch(G, W, cfg)
    for i, w in enumerate(W):
        single = decode(G, w, cfg)
        assert np.array_equal(res.output[i], single.output)
        assert res.iterations[i] == single.iterations_run


def test_determinism_including_trace():
    G = sample_regular_graph(16, 4, 5)
    w = word_from_support(G.n, [0, 3, 7])
    cfg = DecoderConfig(max_iterations=12, trace=True)
    a, b = decode(G, w, cfg), decode(G, w, cfg)
    assert trace_jsonl(G, a) == trace_jsonl(G, b)
    assert a.as_dict() == b.as_dict()


@given(st.integers(0, 500), st.lists(st.integers(0, 15), max_size=6))
@settings(max_examples=60, deadline=None)
def test_one_step_sufficiency(seed, support):
    G = sample_regular_graph(16, 4, seed)
    w = word_from_support(G.n, support)
    out = decode(G, w, DecoderConfig(max_iterations=3, trace=True))
    msgs = [s.messages.var_to_check for s in out.trace]
    if len(msgs) == 3 and np.array_equal(msgs[0], msgs[1]):
        assert np.array_equal(msgs[1], msgs[2])
    if len(msgs) >= 2:
        assert is_fixed_point(G, w) == np.array_equal(msgs[0], msgs[1])


@given(st.integers(0, 500), st.lists(st.integers(0, 15), min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_fixed_point_persists(seed, support):
    G = sample_regular_graph(16, 4, seed)
    w = word_from_support(G.n, support)
    if is_fixed_point(G, w) and not syndrome(G, w)[1]:
        out = decode(G, w, GA)
        assert out.status == "max-iter-reached"
        assert np.array_equal(out.output, w)


def test_codeword_is_fixed_point():
    G = sample_regular_graph(12, 4, 1)
    for c in enumerate_codewords(G):
        assert is_fixed_point(G, c)


def test_fixed_point_mask_matches_single():
    G = sample_regular_graph(12, 6, 3)
    rng = np.random.default_rng(2)
    W = rng.integers(0, 2, size=(100, G.n), dtype=np.uint8)
    mask = fixed_point_mask(G, W)
    assert mask.tolist() == [is_fixed_point(G, w) for w in W]


@pytest.mark.parametrize("name", TRAPPING_FIXTURES)
def test_ga_trapping_implies_bf_trapping(fixture, name):
    fx = fixture(name)
    w = word_from_support(fx.graph.n, fx.designated_T)
    assert is_fixed_point(fx.graph, w)
    cyc = detect_state_cycle(fx.graph, w, algorithm="bit-flip")
    assert (cyc.transient_length, cyc.cycle_length) == (0, 1)


# --------------------------------------------------------------------------
# state cycles


def test_fixed_point_state_cycle(fixture):
    fx = fixture("ts_3_3")
    cyc = detect_state_cycle(fx.graph, word_from_support(fx.graph.n, fx.designated_T))
    assert (cyc.transient_length, cyc.cycle_length) == (0, 1)
    assert cyc.first_codeword is None


def test_case_b_recurs_quickly(fixture):
    G = fixture("lemma3_case_b").graph
    w = word_from_support(G.n, range(4))
    cyc = detect_state_cycle(G, w)
    assert cyc.transient_length <= 2
    assert all(np.array_equal(e, w) for e in cyc.estimates)


@given(st.integers(0, 300), st.integers(0, 2**12 - 1), st.sampled_from(["gallager-a", "bit-flip"]))
@settings(max_examples=50, deadline=None)
def test_random_inputs_recur(seed, bits, algo):
    G = sample_regular_graph(12, 4, seed)
    w = np.array([(bits >> i) & 1 for i in range(12)], dtype=np.uint8)
    cyc = detect_state_cycle(G, w, max_steps=2 ** G.num_edges + 1, algorithm=algo)
    assert cyc.cycle_length >= 1
    assert len(cyc.estimates) == cyc.cycle_length


def test_no_recurrence_reported(fixture):
    G = fixture("ts_3_3").graph
    with pytest.raises(NoRecurrenceError):
        detect_state_cycle(G, word_from_support(G.n, [0]), max_steps=1)


# --------------------------------------------------------------------------
# trace dump


def test_trace_jsonl_format(fixture):
    G = fixture("parallel_edge").graph
    out = decode(G, word_from_support(G.n, [0]), DecoderConfig(max_iterations=3, trace=True))
    lines = trace_jsonl(G, out).splitlines()
    assert len(lines) == out.iterations_run
    rec = json.loads(lines[0])
    assert set(rec) == {"iter", "var_to_check", "check_to_var", "estimate"}
    assert rec["iter"] == 1
    keys = list(rec["var_to_check"])
    assert len(keys) == G.num_edges == len(set(keys))
    doubled = [k for k in keys if k.startswith("v0-c0-")]
    assert len(doubled) == 2


def test_trace_requires_trace_mode():
    G = sample_regular_graph(8, 4, 0)
    with pytest.raises(ValueError):
        trace_jsonl(G, decode(G, [0] * 8, GA))


# --------------------------------------------------------------------------
# BSC simulation


def test_bsc_noiseless(fixture):
    stats = simulate_bsc(fixture("ts_4_4").graph, 0.0, 300, seed=0)
    assert stats.fer == 0.0 and stats.ber == 0.0


def test_bsc_useless_channel(fixture):
    stats = simulate_bsc(fixture("ts_4_4").graph, 0.5, 500, seed=0)
    assert stats.fer > 0.95
    lo, hi = stats.fer_ci
    assert lo <= stats.fer <= hi


def test_bsc_rejects_bad_p(fixture):
    with pytest.raises(ValueError):
        simulate_bsc(fixture("ts_3_3").graph, 0.6, 10, seed=0)


def test_bsc_jobs_do_not_change_results(fixture):
    G = fixture("ts_3_3").graph
    a = simulate_bsc(G, 0.05, 1500, seed=7, log_failures=True)
    b = simulate_bsc(G, 0.05, 1500, seed=7, log_failures=True, jobs=2)
    assert a.as_dict() == b.as_dict()


def test_bsc_injected_support_always_fails(fixture):
    G = fixture("ts_2_2").graph
    target = [0, 1]
    p, trials = 0.3, 4000
    stats = simulate_bsc(G, p, trials, seed=3, log_failures=True)
    # regenerate the channel draws from the documented seeding scheme
    sizes = [512] * (trials // 512) + ([trials % 512] if trials % 512 else [])
    drawn = 0
    for k, ss in zip(sizes, np.random.SeedSequence(3).spawn(len(sizes))):
        E = np.random.default_rng(ss).random((k, G.n)) < p
        drawn += sum(sorted(np.flatnonzero(e).tolist()) == target for e in E)
    logged = sum(s == target for s in stats.failure_supports)
    assert drawn > 0
    assert logged == drawn
    assert decode(G, word_from_support(G.n, target), GA).failure
