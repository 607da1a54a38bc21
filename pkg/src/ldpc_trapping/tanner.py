"""Tanner graphs of (3, rho)-regular LDPC codes as bipartite multigraphs.

Edges carry a stable integer identity so that parallel edges between the
same variable/check pair are distinct objects: messages are attached to
edges, never to node pairs.  Variables and checks are indexed from 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class AlistError(ValueError):
    """Malformed alist text; ``line`` is 1-based."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class GirthConstructionError(RuntimeError):
    def __init__(self, message: str, achieved_girth: int | None):
        super().__init__(message)
        self.achieved_girth = achieved_girth


@dataclass(frozen=True, eq=False)
class TannerGraph:
    """Immutable bipartite multigraph.

    ``edges[e] = (v, c)``; ``var_edges[v]`` and ``chk_edges[c]`` list edge
    ids in increasing order.
    """

    n: int
    m: int
    edges: tuple[tuple[int, int], ...]
    var_edges: tuple[tuple[int, ...], ...] = field(repr=False)
    chk_edges: tuple[tuple[int, ...], ...] = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, m: int, edges: Iterable[tuple[int, int]]) -> "TannerGraph":
        edges = tuple((int(v), int(c)) for v, c in edges)
        var_edges: list[list[int]] = [[] for _ in range(n)]
        chk_edges: list[list[int]] = [[] for _ in range(m)]
        for e, (v, c) in enumerate(edges):
            if not 0 <= v < n:
                raise ValueError(f"edge {e}: variable index {v} out of range [0, {n})")
            if not 0 <= c < m:
                raise ValueError(f"edge {e}: check index {c} out of range [0, {m})")
            var_edges[v].append(e)
            chk_edges[c].append(e)
        return cls(
            n,
            m,
            edges,
            tuple(tuple(x) for x in var_edges),
            tuple(tuple(x) for x in chk_edges),
        )

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def var_degree(self, v: int) -> int:
        return len(self.var_edges[v])

    def chk_degree(self, c: int) -> int:
        return len(self.chk_edges[c])

    def var_neighbors(self, v: int) -> list[int]:
        """Checks adjacent to ``v``, repeated once per parallel edge."""
        return [self.edges[e][1] for e in self.var_edges[v]]

    def chk_neighbors(self, c: int) -> list[int]:
        return [self.edges[e][0] for e in self.chk_edges[c]]

    def is_column_weight_three(self) -> bool:
        return all(len(es) == 3 for es in self.var_edges)

    def is_regular(self, rho: int) -> bool:
        return self.is_column_weight_three() and all(len(es) == rho for es in self.chk_edges)

    def has_parallel_edges(self) -> bool:
        return len(set(self.edges)) != len(self.edges)

    def parallel_edge_variables(self, multiplicity: int | None = 2) -> list[int]:
        """Variables joined to some check by a multi-edge.

        With ``multiplicity=None`` any multi-edge counts; otherwise the
        multiplicity must match exactly.
        """
        out = []
        for v in range(self.n):
            counts: dict[int, int] = {}
            for c in self.var_neighbors(v):
                counts[c] = counts.get(c, 0) + 1
            mults = counts.values()
            if multiplicity is None:
                hit = any(k > 1 for k in mults)
            else:
                hit = multiplicity in mults
            if hit:
                out.append(v)
        return out

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.edges:
            return np.zeros(0, dtype=np.intp), np.zeros(0, dtype=np.intp)
        arr = np.asarray(self.edges, dtype=np.intp)
        return arr[:, 0].copy(), arr[:, 1].copy()

    def parity_check_matrix(self) -> np.ndarray:
        """``H`` over GF(2); parallel edges cancel in pairs."""
        H = np.zeros((self.m, self.n), dtype=np.uint8)
        for v, c in self.edges:
            H[c, v] ^= 1
        return H

    def edge_key(self, e: int) -> str:
        v, c = self.edges[e]
        return f"v{v}-c{c}-k{e}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TannerGraph):
            return NotImplemented
        return (self.n, self.m, self.edges) == (other.n, other.m, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.m, self.edges))

    def canonical(self) -> "TannerGraph":
        """Same multigraph with edges sorted by (variable, check)."""
        return TannerGraph.from_edges(self.n, self.m, sorted(self.edges))


# --------------------------------------------------------------------------
# words and supports


def word_from_support(n: int, support: Iterable[int]) -> np.ndarray:
    word = np.zeros(n, dtype=np.uint8)
    for i in support:
        if not 0 <= i < n:
            raise ValueError(f"support index {i} out of range [0, {n})")
        word[i] = 1
    return word


def support_of(word: Sequence[int] | np.ndarray) -> frozenset[int]:
    return frozenset(int(i) for i in np.flatnonzero(np.asarray(word)))


def as_word(graph: TannerGraph, word: Sequence[int] | np.ndarray) -> np.ndarray:
    w = np.asarray(word, dtype=np.uint8)
    if w.ndim != 1 or w.shape[0] != graph.n:
        raise ValueError(f"word length {w.shape} does not match n={graph.n}")
    if np.any(w > 1):
        raise ValueError("word entries must be 0 or 1")
    return w


def syndrome(graph: TannerGraph, word: Sequence[int] | np.ndarray) -> tuple[np.ndarray, bool]:
    """Check sums mod 2 (parallel edges counted with multiplicity)."""
    w = as_word(graph, word)
    s = np.zeros(graph.m, dtype=np.int64)
    ev, ec = graph.edge_arrays()
    np.add.at(s, ec, w[ev])
    s = (s & 1).astype(np.uint8)
    return s, not s.any()


def is_codeword(graph: TannerGraph, word: Sequence[int] | np.ndarray) -> bool:
    return syndrome(graph, word)[1]


def enumerate_codewords(graph: TannerGraph) -> list[np.ndarray]:
    """All codewords, via a GF(2) null-space basis of ``H``."""
    H = graph.parity_check_matrix().copy()
    n = graph.n
    pivots: list[int] = []
    row = 0
    for col in range(n):
        hits = np.flatnonzero(H[row:, col]) + row if row < H.shape[0] else []
        if len(hits) == 0:
            continue
        p = hits[0]
        H[[row, p]] = H[[p, row]]
        for r in range(H.shape[0]):
            if r != row and H[r, col]:
                H[r] ^= H[row]
        pivots.append(col)
        row += 1
        if row == H.shape[0]:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = np.zeros(n, dtype=np.uint8)
        x[f] = 1
        for r, p in enumerate(pivots):
            x[p] = H[r, f]
        basis.append(x)
    words = [np.zeros(n, dtype=np.uint8)]
    for b in basis:
        words += [w ^ b for w in words]
    return words


# --------------------------------------------------------------------------
# alist I/O


def write_alist(graph: TannerGraph) -> str:
    """Canonical alist text; parallel edges appear as repeated indices."""
    vn = [sorted(graph.var_neighbors(v)) for v in range(graph.n)]
    cn = [sorted(graph.chk_neighbors(c)) for c in range(graph.m)]
    max_v = max((len(x) for x in vn), default=0)
    max_c = max((len(x) for x in cn), default=0)
    lines = [
        f"{graph.n} {graph.m}",
        f"{max_v} {max_c}",
        " ".join(str(len(x)) for x in vn),
        " ".join(str(len(x)) for x in cn),
    ]
    for nb, width in ((vn, max_v), (cn, max_c)):
        for x in nb:
            padded = [i + 1 for i in x] + [0] * (width - len(x))
            lines.append(" ".join(str(i) for i in padded))
    return "\n".join(lines) + "\n"


def parse_alist(text: str) -> TannerGraph:
    """Parse alist text into a graph.

    Edges are created from the variable lists; the check lists must describe
    the same multiset of (variable, check) pairs.
    """
    lines = text.split("\n")
    # keep line numbers for error messages; blank lines are skipped
    rows: list[tuple[int, list[str]]] = []
    for i, raw in enumerate(lines, start=1):
        toks = raw.split()
        if toks:
            rows.append((i, toks))
    cursor = 0

    def next_ints(label: str, expected: int | None = None) -> tuple[int, list[int]]:
        nonlocal cursor
        if cursor >= len(rows):
            raise AlistError(f"unexpected end of input, expected {label}", len(lines))
        ln, toks = rows[cursor]
        cursor += 1
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            raise AlistError(f"non-integer token in {label}", ln) from None
        if expected is not None and len(vals) != expected:
            raise AlistError(f"{label}: expected {expected} values, got {len(vals)}", ln)
        return ln, vals

    if not rows:
        raise AlistError("empty input", 1)
    ln, (n, m) = next_ints("header 'n m'", 2)
    if n < 0 or m < 0:
        raise AlistError("negative dimensions", ln)
    ln, (max_v, max_c) = next_ints("max degree line", 2)

    def degree_line(count: int, cap: int, label: str) -> list[int]:
        if count == 0:
            # an empty degree line is blank and therefore skipped
            return []
        ln, degs = next_ints(label, count)
        for d in degs:
            if d < 0 or d > cap:
                raise AlistError(f"{label}: degree {d} outside [0, {cap}]", ln)
        return degs

    var_deg = degree_line(n, max_v, "variable degrees")
    chk_deg = degree_line(m, max_c, "check degrees")
    if sum(var_deg) != sum(chk_deg):
        raise AlistError("variable and check degree sums differ", ln)

    def neighbor_lines(degs: list[int], width: int, bound: int, label: str) -> list[list[int]]:
        out = []
        for idx, d in enumerate(degs):
            if width == 0:
                # zero-width lines are blank, hence skipped
                out.append([])
                continue
            ln, vals = next_ints(f"{label} {idx + 1}")
            if len(vals) not in (d, width):
                raise AlistError(
                    f"{label} {idx + 1}: degree {d} but {len(vals)} entries", ln
                )
            nb, pad = vals[:d], vals[d:]
            if any(p != 0 for p in pad):
                raise AlistError(f"{label} {idx + 1}: nonzero padding", ln)
            for x in nb:
                if not 1 <= x <= bound:
                    raise AlistError(
                        f"{label} {idx + 1}: index {x} out of range [1, {bound}]", ln
                    )
            out.append([x - 1 for x in nb])
        return out

    vlists = neighbor_lines(var_deg, max_v, m, "variable")
    clists = neighbor_lines(chk_deg, max_c, n, "check")
    if cursor < len(rows):
        raise AlistError("trailing content", rows[cursor][0])

    from_vars = sorted((v, c) for v, nb in enumerate(vlists) for c in nb)
    from_chks = sorted((v, c) for c, nb in enumerate(clists) for v in nb)
    if from_vars != from_chks:
        raise AlistError("variable and check neighbor lists disagree", ln)
    return TannerGraph.from_edges(n, m, from_vars)


def read_alist(path) -> TannerGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_alist(fh.read())


def save_alist(graph: TannerGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(write_alist(graph))


# --------------------------------------------------------------------------
# girth and cycles
#
# Nodes are numbered in a single space: variables 0..n-1, checks n..n+m-1.


def _adjacency(graph: TannerGraph) -> list[list[tuple[int, int]]]:
    """node -> [(edge id, other node)]."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(graph.n + graph.m)]
    for e, (v, c) in enumerate(graph.edges):
        adj[v].append((e, graph.n + c))
        adj[graph.n + c].append((e, v))
    return adj


def node_label(graph: TannerGraph, node: int) -> str:
    return f"v{node}" if node < graph.n else f"c{node - graph.n}"


@dataclass(frozen=True)
class Cycle:
    """Simple cycle as alternating nodes (unified numbering) and edge ids.

    ``edges[i]`` joins ``nodes[i]`` and ``nodes[(i + 1) % len]``.
    """

    nodes: tuple[int, ...]
    edges: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.edges)

    def variables(self, graph: TannerGraph) -> list[int]:
        return sorted(x for x in self.nodes if x < graph.n)

    def checks(self, graph: TannerGraph) -> list[int]:
        return sorted(x - graph.n for x in self.nodes if x >= graph.n)


@dataclass(frozen=True)
class GirthReport:
    girth: int | None  # None means acyclic
    witness: Cycle | None

    @property
    def acyclic(self) -> bool:
        return self.girth is None

    def as_dict(self, graph: TannerGraph) -> dict:
        if self.witness is None:
            return {"girth": "acyclic", "witness": []}
        return {
            "girth": self.girth,
            "witness": [node_label(graph, x) for x in self.witness.nodes],
        }


def _shortest_path_avoiding(
    adj: list[list[tuple[int, int]]], src: int, dst: int, banned_edge: int, limit: int
) -> list[tuple[int, int]] | None:
    """BFS path src -> dst not using ``banned_edge``, at most ``limit`` edges.

    Returns [(edge, node), ...] from src (exclusive) to dst (inclusive).
    """
    prev: dict[int, tuple[int, int]] = {src: (-1, -1)}
    frontier = [src]
    depth = 0
    while frontier and depth < limit:
        depth += 1
        nxt = []
        for u in frontier:
            for e, w in adj[u]:
                if e == banned_edge or w in prev:
                    continue
                prev[w] = (e, u)
                if w == dst:
                    path = []
                    x = w
                    while x != src:
                        pe, pu = prev[x]
                        path.append((pe, x))
                        x = pu
                    return path[::-1]
                nxt.append(w)
        frontier = nxt
    return None


def girth(graph: TannerGraph) -> GirthReport:
    """Exact girth: for each edge, shortest path between its endpoints avoiding it."""
    seen: dict[tuple[int, int], int] = {}
    for e, vc in enumerate(graph.edges):
        if vc in seen:
            v, c = vc
            return GirthReport(2, Cycle((v, graph.n + c), (seen[vc], e)))
        seen[vc] = e
    adj = _adjacency(graph)
    best: Cycle | None = None
    for e, (v, c) in enumerate(graph.edges):
        # a path of length L closes a cycle of length L + 1; only improvements matter
        limit = (len(best) - 2) if best is not None else graph.n + graph.m
        if limit < 3:
            break
        path = _shortest_path_avoiding(adj, v, graph.n + c, e, limit)
        if path is None:
            continue
        nodes = (v,) + tuple(x for _, x in path[:-1]) + (graph.n + c,)
        edges = tuple(pe for pe, _ in path) + (e,)
        if best is None or len(edges) < len(best):
            best = Cycle(nodes, edges)
            if len(best) == 4:
                break
    if best is None:
        return GirthReport(None, None)
    return GirthReport(len(best), best)


@dataclass
class CycleInventory:
    cycles: list[Cycle]
    complete: bool


DEFAULT_CYCLE_BUDGET = 10**6


def enumerate_short_cycles(
    graph: TannerGraph, max_len: int, budget: int = DEFAULT_CYCLE_BUDGET
) -> CycleInventory:
    """All simple cycles of length <= ``max_len``, one per rotation/reflection class.

    A cycle is rooted at its smallest node and oriented so its first edge id
    is smaller than its closing edge id.
    """
    if max_len < 2:
        raise ValueError("max_len must be >= 2")
    adj = _adjacency(graph)
    found: list[Cycle] = []
    total = graph.n + graph.m

    for s in range(total):
        # iterative DFS over paths that stay above the root
        path_nodes = [s]
        path_edges: list[int] = []
        on_path = {s}
        stack = [iter(adj[s])]
        while stack:
            advanced = False
            for e, w in stack[-1]:
                if w == s:
                    if path_edges and e != path_edges[-1] and path_edges[0] < e:
                        found.append(Cycle(tuple(path_nodes), tuple(path_edges) + (e,)))
                        if len(found) >= budget:
                            return CycleInventory(found, False)
                    continue
                if w < s or w in on_path or len(path_edges) + 1 >= max_len:
                    continue
                path_nodes.append(w)
                path_edges.append(e)
                on_path.add(w)
                stack.append(iter(adj[w]))
                advanced = True
                break
            if not advanced:
                stack.pop()
                if path_edges:
                    path_edges.pop()
                    on_path.discard(path_nodes.pop())
    found.sort(key=lambda cy: (len(cy), cy.nodes, cy.edges))
    return CycleInventory(found, True)


# --------------------------------------------------------------------------
# ensembles and construction


def sample_regular_graph(n: int, rho: int, seed: int | np.random.Generator) -> TannerGraph:
    """Configuration-model (3, rho) multigraph; parallel edges are kept."""
    if n < 0 or rho < 1:
        raise ValueError("n must be >= 0 and rho >= 1")
    if (3 * n) % rho:
        raise ValueError(f"3n = {3 * n} is not divisible by rho = {rho}")
    m = 3 * n // rho
    rng = np.random.default_rng(seed)
    check_sockets = rng.permutation(3 * n) // rho
    edges = [(s // 3, int(check_sockets[s])) for s in range(3 * n)]
    return TannerGraph.from_edges(n, m, edges)


def _bfs_check_distances(
    n: int, var_adj: list[list[int]], chk_adj: list[list[int]], v: int, m: int
) -> np.ndarray:
    """Distance (in edges) from variable ``v`` to every check; -1 if unreachable."""
    dist_c = np.full(m, -1, dtype=np.int64)
    seen_v = {v}
    frontier = [v]
    d = 1
    while frontier:
        nxt_c = []
        for u in frontier:
            for c in var_adj[u]:
                if dist_c[c] < 0:
                    dist_c[c] = d
                    nxt_c.append(c)
        nxt_v = []
        for c in nxt_c:
            for u in chk_adj[c]:
                if u not in seen_v:
                    seen_v.add(u)
                    nxt_v.append(u)
        frontier = nxt_v
        d += 2
    return dist_c


def peg_fill(
    n: int,
    m: int,
    rho: int,
    initial_edges: Sequence[tuple[int, int]],
    girth_floor: int,
    rng: np.random.Generator,
    forbidden_pairs: Iterable[tuple[int, int]] = (),
    order: Sequence[int] | None = None,
    repair_attempts: int = 400,
) -> list[tuple[int, int]] | None:
    """Greedy progressive-edge-growth completion to a (3, rho)-regular graph.

    Each new edge of a deficient variable goes to the check farthest from it
    (unreachable first), ties broken by lowest check degree then at random.
    A new edge closing a cycle shorter than ``girth_floor`` is never placed,
    nor one that puts a variable on both checks of a forbidden pair.  When
    no open check is legal, a bounded number of swaps is tried: a full check
    ``c2`` legal for the variable gives up one of its fresh edges ``(u, c2)``,
    which moves to an open check.  Returns the full edge list or None.
    """
    if 3 * n != rho * m:
        raise ValueError("3n must equal rho * m")
    var_adj: list[list[int]] = [[] for _ in range(n)]
    chk_adj: list[list[int]] = [[] for _ in range(m)]
    for v, c in initial_edges:
        var_adj[v].append(c)
        chk_adj[c].append(v)
    if any(len(x) > 3 for x in var_adj) or any(len(x) > rho for x in chk_adj):
        raise ValueError("initial edges exceed target degrees")
    forbid: dict[int, set[int]] = {}
    for a, b in forbidden_pairs:
        forbid.setdefault(a, set()).add(b)
        forbid.setdefault(b, set()).add(a)
    fixed = set(initial_edges)
    chk_deg = np.array([len(x) for x in chk_adj], dtype=np.int64)

    def legal(v: int) -> np.ndarray:
        if var_adj[v]:
            dist = _bfs_check_distances(n, var_adj, chk_adj, v, m)
        else:
            dist = np.full(m, -1, dtype=np.int64)
        ok = np.ones(m, dtype=bool)
        for c in var_adj[v]:
            for f in forbid.get(c, ()):
                ok[f] = False
        # a reachable check at distance d closes a cycle of length d + 1
        ok &= (dist < 0) | (dist + 1 >= girth_floor)
        return ok, dist

    def link(v: int, c: int) -> None:
        var_adj[v].append(c)
        chk_adj[c].append(v)
        chk_deg[c] += 1

    def unlink(v: int, c: int) -> None:
        var_adj[v].remove(c)
        chk_adj[c].remove(v)
        chk_deg[c] -= 1

    def repair(v: int) -> bool:
        ok_v, _ = legal(v)
        full = np.flatnonzero(ok_v & (chk_deg >= rho))
        open_c = np.flatnonzero(chk_deg < rho)
        attempts = 0
        for c2 in rng.permutation(full):
            c2 = int(c2)
            for u in rng.permutation(chk_adj[c2]):
                u = int(u)
                if u == v or (u, c2) in fixed:
                    continue
                unlink(u, c2)
                ok_u, _ = legal(u)
                for c in rng.permutation(open_c):
                    c = int(c)
                    if c == c2 or not ok_u[c]:
                        continue
                    attempts += 1
                    link(u, c)
                    ok_v2, _ = legal(v)
                    if ok_v2[c2]:
                        link(v, c2)
                        return True
                    unlink(u, c)
                    if attempts >= repair_attempts:
                        link(u, c2)
                        return False
                link(u, c2)
        return False

    todo = list(order) if order is not None else list(range(n))
    for v in todo:
        while len(var_adj[v]) < 3:
            ok, dist = legal(v)
            ok &= chk_deg < rho
            if not ok.any():
                if not repair(v):
                    return None
                continue
            far = np.where(dist < 0, np.iinfo(np.int64).max, dist)
            cand = np.flatnonzero(ok)
            best = far[cand].max()
            cand = cand[far[cand] == best]
            low = chk_deg[cand].min()
            cand = cand[chk_deg[cand] == low]
            link(v, int(rng.choice(cand)))
    if np.any(chk_deg != rho):
        return None
    return [(v, c) for v in range(n) for c in var_adj[v]]


VALID_GIRTH_TARGETS = (6, 8, 10, 12)


def construct_girth_constrained(
    n: int, rho: int, g_target: int, seed: int, retries: int = 50
) -> TannerGraph:
    """(3, rho)-regular graph with girth >= ``g_target`` built by PEG.

    Raises GirthConstructionError (carrying the best girth seen) instead of
    returning a graph below target.
    """
    if g_target not in VALID_GIRTH_TARGETS:
        raise ValueError(f"g_target must be one of {VALID_GIRTH_TARGETS}")
    if (3 * n) % rho:
        raise ValueError(f"3n = {3 * n} is not divisible by rho = {rho}")
    m = 3 * n // rho
    rng = np.random.default_rng(seed)
    best_girth = None
    for _ in range(retries):
        edges = peg_fill(n, m, rho, [], g_target, rng, order=rng.permutation(n))
        if edges is None:
            # a shorter floor tells us what would have been reachable
            continue
        graph = TannerGraph.from_edges(n, m, sorted(edges))
        g = girth(graph).girth
        if g is None or g >= g_target:
            return graph
        best_girth = g if best_girth is None else max(best_girth, g)
    if best_girth is None:
        for floor in range(g_target - 2, 2, -2):
            edges = peg_fill(n, m, rho, [], floor, rng)
            if edges is not None:
                best_girth = girth(TannerGraph.from_edges(n, m, edges)).girth
                break
    raise GirthConstructionError(
        f"could not reach girth {g_target} at n={n}, rho={rho}; achieved {best_girth}",
        best_girth,
    )
