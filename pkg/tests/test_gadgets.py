import pytest

from ldpc_trapping.decoders import is_fixed_point
from ldpc_trapping.gadgets import (
    GADGET_NAMES,
    CompletionError,
    CompletionSpec,
    build_gadget,
    complete_to_regular,
    fixture_names,
    load_manifest,
    validate_completion,
    write_fixtures,
    load_fixture,
    Fixture,
)
from ldpc_trapping.tanner import girth, word_from_support
from ldpc_trapping.trapping import check_trapping_conditions

LABELLED = {"ts_2_2": (2, 2), "ts_3_1": (3, 1), "ts_3_3": (3, 3), "ts_4_2": (4, 2), "ts_4_4": (4, 4), "ts_5_3": (5, 3)}


@pytest.mark.parametrize("name, vc", sorted(LABELLED.items()))
def test_fragment_labels(name, vc):
    gd = build_gadget(name)
    frag = gd.fragment()
    v = check_trapping_conditions(frag, gd.designated_T)
    assert (v.report.V, v.report.C) == vc
    assert v.is_trapping


def test_cycle_gadget():
    gd = build_gadget("cycle_g", 12)
    assert gd.name == "cycle_12"
    frag = gd.fragment()
    assert girth(frag).girth == 12
    v = check_trapping_conditions(frag, gd.designated_T)
    assert (v.report.V, v.report.C) == (6, 6) and v.is_trapping
    assert build_gadget("cycle_10").n_vars == 5
    with pytest.raises(ValueError):
        build_gadget("cycle_g", 9)


def test_non_trapping_gadgets():
    for name in ("lemma3_case_a", "lemma3_case_b"):
        gd = build_gadget(name)
        assert not gd.is_trapping
        # the shared structure v1..v4 is a (4,2) trapping candidate broken by v5
        v = check_trapping_conditions(gd.fragment(), gd.designated_T)
        assert not v.is_trapping


def test_unknown_gadget():
    with pytest.raises(ValueError):
        build_gadget("ts_9_9")


def test_gadget_names_all_build():
    for name in GADGET_NAMES:
        gd = build_gadget(name, 10) if name == "cycle_g" else build_gadget(name)
        assert gd.fragment().n == gd.n_vars


def test_manifest_shape():
    entries = load_manifest()
    for e in entries:
        assert set(e) >= {"name", "n", "m", "rho", "girth", "designated_T", "expected_verdicts"}
    assert set(fixture_names()) >= {"ts_3_3", "ts_4_2", "cycle_10", "lemma3_case_a", "lemma3_case_b", "peg_girth12"}


@pytest.mark.parametrize("name", [n for n in fixture_names() if n != "peg_girth12"])
def test_fixture_is_valid_completion(fixture, name):
    fx = fixture(name)
    gd = build_gadget(name)
    G = fx.graph
    assert G.n == load_manifest_entry(name)["n"]
    assert girth(G).girth == fx.girth
    assert validate_completion(G, gd, fx.rho, gd.girth_floor, gd.forbidden_pairs) is None
    exp = fx.expected
    verdict = check_trapping_conditions(G, fx.designated_T)
    assert verdict.is_trapping == exp["isTrapping"]
    assert verdict.report.C == exp["C"]
    assert is_fixed_point(G, word_from_support(G.n, fx.designated_T)) == exp["fixedPoint"]


def load_manifest_entry(name):
    return next(e for e in load_manifest() if e["name"] == name)


def test_peg_fixture(fixture):
    fx = fixture("peg_girth12")
    assert fx.graph.is_regular(4)
    assert girth(fx.graph).girth >= 12


def test_completion_is_reproducible():
    gd = build_gadget("ts_3_3")
    a = complete_to_regular(gd, CompletionSpec(seed=5))
    b = complete_to_regular(gd, CompletionSpec(seed=5))
    assert a == b
    assert validate_completion(a, gd, 4, 6, gd.forbidden_pairs) is None


def test_completion_at_other_rho():
    gd = build_gadget("ts_3_3")
    G = complete_to_regular(gd, CompletionSpec(rho=6))
    assert G.is_regular(6)
    assert check_trapping_conditions(G, gd.designated_T).is_trapping


def test_completion_errors():
    gd = build_gadget("ts_3_3")
    with pytest.raises(ValueError):
        complete_to_regular(gd, CompletionSpec(rho=3))
    with pytest.raises(CompletionError):
        complete_to_regular(gd, CompletionSpec(n=8, retries=2))


def test_fixture_round_trip(tmp_path, fixture):
    fx = fixture("ts_3_3")
    write_fixtures([fx], tmp_path)
    back = load_fixture("ts_3_3", tmp_path)
    assert back.graph == fx.graph
    assert back.designated_T == fx.designated_T
    assert isinstance(back, Fixture)
