"""Hard-decision decoders for column-weight-three codes.

Gallager A passes one bit per directed edge.  In iteration ``j`` a variable
sends its received bit unless the two extrinsic check messages from
iteration ``j - 1`` agree, in which case it sends their common value; a check
sends the XOR of the messages on its other edges.  Parallel edges are
distinct "other" edges.  The parallel bit-flipping decoder flips, all at
once, every variable adjacent (with multiplicity) to at least two
unsatisfied checks.

All arrays are uint8.  Batched entry points take words of shape (B, n).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Literal, Sequence

import numpy as np

from .tanner import TannerGraph, as_word, support_of

Algorithm = Literal["gallager-a", "bit-flip"]
ALGORITHMS = ("gallager-a", "bit-flip")
RULES = ("A", "B")


@dataclass(frozen=True)
class DecoderConfig:
    max_iterations: int = 100
    algorithm: Algorithm = "gallager-a"
    decision_rule: Literal["A", "B"] = "A"
    trace: bool = False

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.decision_rule not in RULES:
            raise ValueError(f"unknown decision rule {self.decision_rule!r}")

    @property
    def unanalyzed(self) -> bool:
        """Rule B is available for exploration only."""
        return self.decision_rule == "B"

    def as_dict(self) -> dict:
        return {
            "max_iterations": self.max_iterations,
            "algorithm": self.algorithm,
            "decision_rule": self.decision_rule,
        }


def require_rule_a(config: DecoderConfig) -> None:
    if config.unanalyzed:
        raise ValueError("analyses are defined for decision rule A only")


@dataclass(frozen=True)
class MessageState:
    """Messages of one iteration, indexed by edge id."""

    var_to_check: np.ndarray
    check_to_var: np.ndarray


@dataclass(frozen=True)
class TraceStep:
    iteration: int
    messages: MessageState | None  # None for bit flipping
    estimate: np.ndarray


@dataclass
class DecodeOutcome:
    status: Literal["codeword-found", "max-iter-reached"]
    output: np.ndarray
    iterations_run: int
    failure: bool
    trace: list[TraceStep] | None = None

    @property
    def support(self) -> frozenset[int]:
        return support_of(self.output)

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "output": self.output.tolist(),
            "support": sorted(self.support),
            "iterationsRun": self.iterations_run,
            "failure": self.failure,
        }


class _Tables:
    """Index tables shared by all decodes on one graph."""

    def __init__(self, graph: TannerGraph):
        if not graph.is_column_weight_three():
            bad = [v for v in range(graph.n) if graph.var_degree(v) != 3]
            raise ValueError(f"decoders need column weight 3; variables {bad[:5]} differ")
        self.n, self.m = graph.n, graph.m
        self.ev, self.ec = graph.edge_arrays()
        E = graph.num_edges
        self.var_e = np.array(graph.var_edges, dtype=np.intp).reshape(graph.n, 3)
        self.other1 = np.zeros(E, dtype=np.intp)
        self.other2 = np.zeros(E, dtype=np.intp)
        for es in graph.var_edges:
            a, b, c = es
            self.other1[a], self.other2[a] = b, c
            self.other1[b], self.other2[b] = a, c
            self.other1[c], self.other2[c] = a, b
        # edge-to-check incidence; parity at each check is a row-sum mod 2
        self.inc = np.zeros((E, graph.m), dtype=np.int32)
        self.inc[np.arange(E), self.ec] = 1

    def check_parity(self, edge_bits: np.ndarray) -> np.ndarray:
        return ((edge_bits.astype(np.int32) @ self.inc) & 1).astype(np.uint8)

    def syndrome(self, words: np.ndarray) -> np.ndarray:
        return self.check_parity(words[:, self.ev])

    def check_messages(self, omega: np.ndarray) -> np.ndarray:
        return self.check_parity(omega)[:, self.ec] ^ omega

    def var_messages(self, varpi: np.ndarray, r_edge: np.ndarray) -> np.ndarray:
        a = varpi[:, self.other1]
        b = varpi[:, self.other2]
        return np.where(a == b, a, r_edge)

    def estimate(self, varpi: np.ndarray, r: np.ndarray, rule: str) -> np.ndarray:
        inc = varpi[:, self.var_e]
        if rule == "A":
            same = (inc[..., 0] == inc[..., 1]) & (inc[..., 1] == inc[..., 2])
            return np.where(same, inc[..., 0], r).astype(np.uint8)
        return (inc.sum(axis=-1) >= 2).astype(np.uint8)

    def flip_step(self, words: np.ndarray) -> np.ndarray:
        unsat = self.syndrome(words)
        counts = unsat[:, self.ec][:, self.var_e].sum(axis=-1)
        return words ^ (counts >= 2).astype(np.uint8)


@lru_cache(maxsize=128)
def _tables(graph: TannerGraph) -> _Tables:
    return _Tables(graph)


def _batch(graph: TannerGraph, words) -> np.ndarray:
    w = np.asarray(words, dtype=np.uint8)
    if w.ndim == 1:
        w = w[None, :]
    if w.ndim != 2 or w.shape[1] != graph.n:
        raise ValueError(f"words of shape {w.shape} do not match n={graph.n}")
    return w


def _reference(graph: TannerGraph, reference) -> np.ndarray:
    if reference is None:
        return np.zeros(graph.n, dtype=np.uint8)
    return as_word(graph, reference)


# --------------------------------------------------------------------------
# batched decoding


@dataclass
class BatchResult:
    output: np.ndarray  # (B, n)
    iterations: np.ndarray  # (B,)
    converged: np.ndarray  # (B,) bool, codeword found

    def failures(self, reference: np.ndarray | None = None) -> np.ndarray:
        ref = 0 if reference is None else reference[None, :]
        return np.any(self.output != ref, axis=1)


def gallager_a_batch(graph: TannerGraph, received, max_iterations: int = 100, rule: str = "A") -> BatchResult:
    t = _tables(graph)
    r = _batch(graph, received)
    B = r.shape[0]
    out = np.zeros_like(r)
    iters = np.full(B, max_iterations, dtype=np.int64)
    conv = np.zeros(B, dtype=bool)
    active = np.arange(B)
    ra = r
    r_edge = ra[:, t.ev]
    omega = r_edge
    for j in range(1, max_iterations + 1):
        varpi = t.check_messages(omega)
        est = t.estimate(varpi, ra, rule)
        done = ~t.syndrome(est).any(axis=1)
        nxt = t.var_messages(varpi, r_edge)
        # a repeated message state repeats forever: the estimate is final
        stuck = ~done & np.all(nxt == omega, axis=1)
        if j == max_iterations:
            stuck = ~done
        fin = done | stuck
        if fin.any():
            idx = active[fin]
            out[idx] = est[fin]
            conv[idx] = done[fin]
            iters[idx] = np.where(done[fin], j, max_iterations)
            keep = ~fin
            active, ra, r_edge, nxt = active[keep], ra[keep], r_edge[keep], nxt[keep]
        if active.size == 0:
            break
        omega = nxt
    return BatchResult(out, iters, conv)


def bit_flip_batch(graph: TannerGraph, received, max_iterations: int = 100) -> BatchResult:
    t = _tables(graph)
    w = _batch(graph, received).copy()
    B = w.shape[0]
    out = w.copy()
    iters = np.full(B, max_iterations, dtype=np.int64)
    conv = ~t.syndrome(w).any(axis=1)
    iters[conv] = 0
    active = np.flatnonzero(~conv)
    wa = w[active]
    for j in range(1, max_iterations + 1):
        if active.size == 0:
            break
        nxt = t.flip_step(wa)
        done = ~t.syndrome(nxt).any(axis=1)
        stuck = ~done & np.all(nxt == wa, axis=1)
        if j == max_iterations:
            stuck = ~done
        fin = done | stuck
        if fin.any():
            idx = active[fin]
            out[idx] = nxt[fin]
            conv[idx] = done[fin]
            iters[idx] = np.where(done[fin], j, max_iterations)
        active, wa = active[~fin], nxt[~fin]
    return BatchResult(out, iters, conv)


def decode_batch(graph: TannerGraph, received, config: DecoderConfig) -> BatchResult:
    if config.algorithm == "gallager-a":
        return gallager_a_batch(graph, received, config.max_iterations, config.decision_rule)
    return bit_flip_batch(graph, received, config.max_iterations)


# --------------------------------------------------------------------------
# single-word decoding with optional trace


def decode_gallager_a(
    graph: TannerGraph, received, config: DecoderConfig = DecoderConfig(), reference=None
) -> DecodeOutcome:
    t = _tables(graph)
    r = as_word(graph, received)[None, :]
    ref = _reference(graph, reference)
    r_edge = r[:, t.ev]
    omega = r_edge
    trace: list[TraceStep] | None = [] if config.trace else None
    est = r
    status = "max-iter-reached"
    j = 0
    for j in range(1, config.max_iterations + 1):
        varpi = t.check_messages(omega)
        est = t.estimate(varpi, r, config.decision_rule)
        if trace is not None:
            trace.append(TraceStep(j, MessageState(omega[0].copy(), varpi[0].copy()), est[0].copy()))
        if not t.syndrome(est).any():
            status = "codeword-found"
            break
        nxt = t.var_messages(varpi, r_edge)
        if trace is None and np.array_equal(nxt, omega):
            j = config.max_iterations
            break
        omega = nxt
    output = est[0].copy()
    return DecodeOutcome(status, output, j, bool(np.any(output != ref)), trace)


def decode_bit_flip(
    graph: TannerGraph, received, config: DecoderConfig = DecoderConfig(), reference=None
) -> DecodeOutcome:
    t = _tables(graph)
    w = as_word(graph, received)[None, :].copy()
    ref = _reference(graph, reference)
    trace: list[TraceStep] | None = [] if config.trace else None
    status = "max-iter-reached"
    j = 0
    if not t.syndrome(w).any():
        status = "codeword-found"
    else:
        for j in range(1, config.max_iterations + 1):
            nxt = t.flip_step(w)
            if trace is not None:
                trace.append(TraceStep(j, None, nxt[0].copy()))
            if not t.syndrome(nxt).any():
                w = nxt
                status = "codeword-found"
                break
            if trace is None and np.array_equal(nxt, w):
                j = config.max_iterations
                break
            w = nxt
    output = w[0].copy()
    return DecodeOutcome(status, output, j, bool(np.any(output != ref)), trace)


def decode(graph: TannerGraph, received, config: DecoderConfig = DecoderConfig(), reference=None) -> DecodeOutcome:
    if config.algorithm == "gallager-a":
        return decode_gallager_a(graph, received, config, reference)
    return decode_bit_flip(graph, received, config, reference)


def trace_jsonl(graph: TannerGraph, outcome: DecodeOutcome) -> str:
    """One JSON object per iteration; edge keys are ``v<i>-c<j>-k<edge id>``."""
    if outcome.trace is None:
        raise ValueError("outcome has no trace; decode with trace=True")
    keys = [graph.edge_key(e) for e in range(graph.num_edges)]
    lines = []
    for step in outcome.trace:
        rec: dict = {"iter": step.iteration}
        if step.messages is not None:
            rec["var_to_check"] = dict(zip(keys, step.messages.var_to_check.tolist()))
            rec["check_to_var"] = dict(zip(keys, step.messages.check_to_var.tolist()))
        else:
            rec["var_to_check"] = {}
            rec["check_to_var"] = {}
        rec["estimate"] = step.estimate.tolist()
        lines.append(json.dumps(rec, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


# --------------------------------------------------------------------------
# fixed points and state cycles


def fixed_point_mask(graph: TannerGraph, words) -> np.ndarray:
    """Row-wise: do second-iteration variable messages equal the first?

    The message map depends only on the previous messages and the received
    word, so equality after one step means equality forever.
    """
    t = _tables(graph)
    w = _batch(graph, words)
    omega1 = w[:, t.ev]
    omega2 = t.var_messages(t.check_messages(omega1), omega1)
    return np.all(omega1 == omega2, axis=1)


def is_fixed_point(graph: TannerGraph, word) -> bool:
    return bool(fixed_point_mask(graph, as_word(graph, word))[0])


class NoRecurrenceError(RuntimeError):
    pass


@dataclass
class StateCycle:
    """Trajectory summary of the deterministic decoder state machine.

    For Gallager A the state is the variable-to-check message vector; for
    bit flipping it is the current word.  ``estimates`` are the decoder
    estimates along the terminal cycle, ``first_codeword`` the earliest
    iteration whose estimate is a codeword (None if none ever is) and the
    codeword itself.
    """

    transient_length: int
    cycle_length: int
    estimates: list[np.ndarray]
    first_codeword_iteration: int | None = None
    first_codeword: np.ndarray | None = field(default=None, repr=False)

    def periodic_supports(self) -> list[frozenset[int]]:
        return [support_of(e) for e in self.estimates]

    def as_dict(self) -> dict:
        return {
            "transientLength": self.transient_length,
            "cycleLength": self.cycle_length,
            "periodicSupports": [sorted(s) for s in self.periodic_supports()],
            "firstCodewordIteration": self.first_codeword_iteration,
        }


def detect_state_cycle(
    graph: TannerGraph,
    received,
    max_steps: int = 10_000,
    algorithm: Algorithm = "gallager-a",
    rule: str = "A",
) -> StateCycle:
    """Iterate the decoder, ignoring the stopping rule, until a state recurs."""
    t = _tables(graph)
    r = as_word(graph, received)[None, :]
    seen: dict[bytes, int] = {}
    estimates: list[np.ndarray] = []
    first_cw = None
    first_word = None
    if algorithm == "gallager-a":
        r_edge = r[:, t.ev]
        state = r_edge
        for j in range(1, max_steps + 1):
            key = np.packbits(state).tobytes()
            if key in seen:
                i = seen[key]
                return StateCycle(i - 1, j - i, estimates[i - 1 :], first_cw, first_word)
            seen[key] = j
            varpi = t.check_messages(state)
            est = t.estimate(varpi, r, rule)
            estimates.append(est[0].copy())
            if first_cw is None and not t.syndrome(est).any():
                first_cw, first_word = j, est[0].copy()
            state = t.var_messages(varpi, r_edge)
    elif algorithm == "bit-flip":
        state = r.copy()
        if not t.syndrome(state).any():
            first_cw, first_word = 0, state[0].copy()
        for j in range(0, max_steps + 1):
            key = np.packbits(state).tobytes()
            if key in seen:
                i = seen[key]
                return StateCycle(i, j - i, estimates[i:], first_cw, first_word)
            seen[key] = j
            estimates.append(state[0].copy())
            state = t.flip_step(state)
            if first_cw is None and not t.syndrome(state).any():
                first_cw, first_word = j + 1, state[0].copy()
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    raise NoRecurrenceError(f"no state recurrence within {max_steps} steps")


# --------------------------------------------------------------------------
# BSC Monte Carlo


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if n == 0:
        return (0.0, 1.0)
    p = k / n
    den = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    return (max(0.0, centre - half), min(1.0, centre + half))


@dataclass
class BSCStats:
    p: float
    trials: int
    frame_errors: int
    bit_errors: int
    n: int
    fer_ci: tuple[float, float]
    ber_ci: tuple[float, float]
    failure_supports: list[list[int]] | None = None

    @property
    def fer(self) -> float:
        return self.frame_errors / self.trials

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.n) if self.n else 0.0

    def as_dict(self) -> dict:
        d = {
            "p": self.p,
            "trials": self.trials,
            "frameErrors": self.frame_errors,
            "bitErrors": self.bit_errors,
            "fer": self.fer,
            "ber": self.ber,
            "ferCI": list(self.fer_ci),
            "berCI": list(self.ber_ci),
        }
        if self.failure_supports is not None:
            d["failureSupports"] = self.failure_supports
        return d


_SIM_CHUNK = 512


def _sim_chunk(args) -> tuple[int, int, list[list[int]]]:
    graph, p, count, seed_seq, config, log = args
    rng = np.random.default_rng(seed_seq)
    errors = (rng.random((count, graph.n)) < p).astype(np.uint8)
    res = decode_batch(graph, errors, config)
    fail = res.failures()
    supports = [sorted(support_of(e)) for e in errors[fail]] if log else []
    return int(fail.sum()), int(res.output.sum()), supports


def simulate_bsc(
    graph: TannerGraph,
    p: float,
    trials: int,
    seed: int,
    config: DecoderConfig = DecoderConfig(),
    log_failures: bool = False,
    jobs: int = 1,
) -> BSCStats:
    """All-zero codeword over a BSC(p).

    Trials are split into fixed-size chunks with spawned seeds, so results
    do not depend on ``jobs``.
    """
    if not 0 <= p <= 0.5:
        raise ValueError("crossover probability must lie in [0, 1/2]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sizes = [_SIM_CHUNK] * (trials // _SIM_CHUNK)
    if trials % _SIM_CHUNK:
        sizes.append(trials % _SIM_CHUNK)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    work = [(graph, p, k, s, config, log_failures) for k, s in zip(sizes, seeds)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_sim_chunk, work))
    else:
        parts = [_sim_chunk(w) for w in work]
    fe = sum(x[0] for x in parts)
    be = sum(x[1] for x in parts)
    supports = [s for x in parts for s in x[2]] if log_failures else None
    return BSCStats(
        p,
        trials,
        fe,
        be,
        graph.n,
        wilson_interval(fe, trials),
        wilson_interval(be, trials * graph.n),
        supports,
    )


def iter_words(n: int, supports: Iterable[Sequence[int]]) -> np.ndarray:
    rows = []
    for s in supports:
        w = np.zeros(n, dtype=np.uint8)
        w[list(s)] = 1
        rows.append(w)
    return np.array(rows, dtype=np.uint8).reshape(len(rows), n)
