"""Labelled subgraphs for the named trapping/failure structures.

Fragment node ``v<i>`` has variable index ``i - 1`` and ``c<j>`` has check
index ``j - 1``; completions keep these indices, so a completed graph can be
read with the fragment's labels.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .tanner import TannerGraph, girth, parse_alist, peg_fill, write_alist

GADGET_NAMES = (
    "ts_2_2",
    "ts_3_1",
    "ts_3_3",
    "ts_4_2",
    "ts_4_4",
    "ts_5_3",
    "cycle_g",
    "parallel_edge",
    "lemma3_case_a",
    "lemma3_case_b",
    "weight4_codeword",
    "weight6_codeword",
)


class CompletionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Gadget:
    name: str
    n_vars: int
    n_checks: int
    # 1-based (variable, check) labels, as drawn
    labelled_edges: tuple[tuple[int, int], ...]
    designated_T: frozenset[int]
    forbidden_pairs: tuple[tuple[int, int], ...]
    girth_floor: int
    is_trapping: bool

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(v - 1, c - 1) for v, c in self.labelled_edges]

    def fragment(self) -> TannerGraph:
        return TannerGraph.from_edges(self.n_vars, self.n_checks, self.edges)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "nVars": self.n_vars,
            "nChecks": self.n_checks,
            "edges": [f"v{v}-c{c}" for v, c in self.labelled_edges],
            "designated_T": sorted(self.designated_T),
            "forbiddenPairs": [list(p) for p in self.forbidden_pairs],
            "girthFloor": self.girth_floor,
            "isTrapping": self.is_trapping,
        }


def _pairs(checks) -> tuple[tuple[int, int], ...]:
    """All pairs of 1-based check labels, returned 0-based."""
    return tuple((a - 1, b - 1) for a, b in itertools.combinations(checks, 2))


def _vars(spec: dict[int, tuple[int, int, int]]) -> tuple[tuple[int, int], ...]:
    return tuple((v, c) for v, cs in sorted(spec.items()) for c in cs)


TS33 = {1: (1, 3, 4), 2: (1, 2, 5), 3: (2, 3, 6)}
TS44 = {1: (4, 1, 5), 2: (1, 2, 6), 3: (2, 3, 7), 4: (3, 4, 8)}


def build_gadget(name: str, g: int | None = None) -> Gadget:
    if name == "ts_2_2":
        spec = {1: (1, 2, 3), 2: (1, 2, 4)}
        return Gadget(name, 2, 4, _vars(spec), frozenset({0, 1}), _pairs([3, 4]), 4, True)
    if name == "ts_3_1":
        spec = {1: (1, 2, 3), 2: (1, 2, 4), 3: (3, 4, 5)}
        return Gadget(name, 3, 5, _vars(spec), frozenset({0, 1, 2}), (), 4, True)
    if name == "ts_3_3":
        return Gadget(name, 3, 6, _vars(TS33), frozenset({0, 1, 2}), _pairs([4, 5, 6]), 6, True)
    if name == "ts_4_2":
        spec = {**TS33, 4: (5, 6, 7)}
        return Gadget(name, 4, 7, _vars(spec), frozenset(range(4)), _pairs([4, 7]), 6, True)
    if name == "lemma3_case_a":
        spec = {**TS33, 4: (5, 6, 7), 5: (4, 7, 8)}
        return Gadget(name, 5, 8, _vars(spec), frozenset(range(4)), _pairs([4, 7, 8]), 6, False)
    if name == "lemma3_case_b":
        spec = {**TS33, 4: (5, 6, 7), 5: (4, 7, 2)}
        return Gadget(name, 5, 7, _vars(spec), frozenset(range(4)), _pairs([2, 4, 7]), 6, False)
    if name == "weight4_codeword":
        spec = {**TS33, 4: (4, 5, 6)}
        return Gadget(name, 4, 6, _vars(spec), frozenset(range(3)), _pairs([4, 5, 6]), 6, False)
    if name == "ts_4_4":
        return Gadget(name, 4, 8, _vars(TS44), frozenset(range(4)), _pairs([5, 6, 7, 8]), 8, True)
    if name == "ts_5_3":
        spec = {**TS44, 5: (5, 7, 9)}
        return Gadget(name, 5, 9, _vars(spec), frozenset(range(5)), _pairs([6, 8, 9]), 8, True)
    if name == "weight6_codeword":
        spec = {**TS44, 5: (5, 7, 9), 6: (6, 8, 9)}
        return Gadget(name, 6, 9, _vars(spec), frozenset(range(5)), _pairs([6, 8, 9]), 8, False)
    if name == "cycle_g":
        if g is None or g < 10 or g % 2:
            raise ValueError("cycle_g needs an even g >= 10")
        h = g // 2
        spec = {i: ((i - 2) % h + 1, i, h + i) for i in range(1, h + 1)}
        odd = range(h + 1, g + 1)
        return Gadget(f"cycle_{g}", h, g, _vars(spec), frozenset(range(h)), _pairs(odd), g, True)
    if name == "parallel_edge":
        return Gadget(name, 1, 2, ((1, 1), (1, 1), (1, 2)), frozenset({0}), (), 2, True)
    if name.startswith("cycle_") and name[6:].isdigit():
        return build_gadget("cycle_g", int(name[6:]))
    raise ValueError(f"unknown gadget {name!r}; choose from {', '.join(GADGET_NAMES)}")


@dataclass
class CompletionSpec:
    rho: int = 4
    seed: int = 0
    girth_floor: int | None = None  # defaults to the gadget's floor
    forbidden_pairs: tuple[tuple[int, int], ...] | None = None  # defaults to the gadget's
    n: int | None = None  # total block length; searched upward from min_n when None
    min_n: int = 1
    retries: int = 40
    max_n: int = 600


def _candidate_lengths(gadget: Gadget, rho: int, start: int | None, min_n: int, max_n: int):
    n = max(gadget.n_vars, min_n) if start is None else start
    while n <= max_n:
        if (3 * n) % rho == 0 and 3 * n // rho >= gadget.n_checks:
            yield n
        if start is not None:
            return
        n += 1


def validate_completion(graph: TannerGraph, gadget: Gadget, rho: int, floor: int, forbidden) -> str | None:
    """Reason the completion is unacceptable, or None."""
    from .trapping import check_trapping_conditions

    if not graph.is_regular(rho):
        return "not (3, rho)-regular"
    frag = sorted(gadget.edges)
    fragment_vars = set(range(gadget.n_vars))
    for v in fragment_vars:
        want = sorted(c for vv, c in frag if vv == v)
        if sorted(graph.var_neighbors(v)) != want:
            return f"fragment variable v{v + 1} altered"
    g = girth(graph).girth
    if g is not None and g < floor:
        return f"girth {g} below floor {floor}"
    for v in range(gadget.n_vars, graph.n):
        nb = set(graph.var_neighbors(v))
        for a, b in forbidden:
            if a in nb and b in nb:
                return f"outside variable v{v + 1} joins forbidden pair c{a + 1}, c{b + 1}"
    if gadget.is_trapping and not check_trapping_conditions(graph, gadget.designated_T).is_trapping:
        return "designated set is not a trapping set"
    return None


def complete_to_regular(gadget: Gadget, spec: CompletionSpec = CompletionSpec()) -> TannerGraph:
    """Extend the fragment with fresh nodes into a (3, rho)-regular graph.

    Fresh edges are placed PEG-style, never closing a cycle below the girth
    floor and never joining a fresh variable to both checks of a forbidden
    pair.  Fresh edges never create parallel edges; the floor validated on the finished graph may be lower when the fragment
    itself holds a short cycle.
    """
    if spec.rho < 4:
        raise ValueError("rho must be >= 4")
    floor = gadget.girth_floor if spec.girth_floor is None else spec.girth_floor
    forbidden = gadget.forbidden_pairs if spec.forbidden_pairs is None else spec.forbidden_pairs
    if max((sum(1 for _, c in gadget.edges if c == k) for k in range(gadget.n_checks)), default=0) > spec.rho:
        raise CompletionError("fragment check degree exceeds rho")
    rng = np.random.default_rng(spec.seed)
    last = "no feasible block length"
    for n in _candidate_lengths(gadget, spec.rho, spec.n, spec.min_n, spec.max_n):
        m = 3 * n // spec.rho
        for _ in range(spec.retries):
            order = list(range(gadget.n_vars)) + list(gadget.n_vars + rng.permutation(n - gadget.n_vars))
            edges = peg_fill(n, m, spec.rho, gadget.edges, max(floor, 4), rng, forbidden, order=order)
            if edges is None:
                last = f"greedy placement dead-ended at n={n}"
                continue
            graph = TannerGraph.from_edges(n, m, sorted(edges))
            why = validate_completion(graph, gadget, spec.rho, floor, forbidden)
            if why is None:
                return graph
            last = f"{why} at n={n}"
    raise CompletionError(f"could not complete {gadget.name}: {last}")


# --------------------------------------------------------------------------
# frozen fixtures


FIXTURE_PACKAGE = "ldpc_trapping.fixtures"


@dataclass
class Fixture:
    name: str
    graph: TannerGraph
    rho: int
    girth: int | None
    designated_T: frozenset[int]
    expected: dict = field(default_factory=dict)

    def manifest_entry(self, filename: str) -> dict:
        return {
            "name": self.name,
            "file": filename,
            "n": self.graph.n,
            "m": self.graph.m,
            "rho": self.rho,
            "girth": self.girth,
            "designated_T": sorted(self.designated_T),
            "expected_verdicts": self.expected,
        }


def load_manifest(directory: Path | None = None) -> list[dict]:
    if directory is None:
        text = resources.files(FIXTURE_PACKAGE).joinpath("manifest.json").read_text(encoding="utf-8")
    else:
        text = (Path(directory) / "manifest.json").read_text(encoding="utf-8")
    return json.loads(text)


def load_fixture(name: str, directory: Path | None = None) -> Fixture:
    for entry in load_manifest(directory):
        if entry["name"] == name:
            if directory is None:
                text = resources.files(FIXTURE_PACKAGE).joinpath(entry["file"]).read_text(encoding="utf-8")
            else:
                text = (Path(directory) / entry["file"]).read_text(encoding="utf-8")
            return Fixture(
                name,
                parse_alist(text),
                entry["rho"],
                entry["girth"],
                frozenset(entry["designated_T"]),
                entry["expected_verdicts"],
            )
    raise KeyError(f"no fixture named {name!r}")


def fixture_names(directory: Path | None = None) -> list[str]:
    return [e["name"] for e in load_manifest(directory)]


def write_fixtures(fixtures: list[Fixture], directory: Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = []
    for fx in fixtures:
        fname = f"{fx.name}.alist"
        (directory / fname).write_text(write_alist(fx.graph), encoding="utf-8")
        manifest.append(fx.manifest_entry(fname))
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
