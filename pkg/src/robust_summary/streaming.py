"""Single-pass summary construction with threshold buckets and weight-based swaps.

Arrivals first pass through a bounded buffer of the d most valuable elements
seen; whatever that buffer pops is filed into geometric threshold buckets by
its current marginal gain.  Whenever a bucket reaches the drain cap, elements
are pulled out uniformly at random, gated by a Bernoulli coin, and either
added to the candidate solution directly or swapped against the lightest
element of the circuit they would close - provided their weight beats the
swap margin.  Every change of the candidate triggers a full rebucketing.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .matroids import Matroid
from .objectives import Objective
from .summary import StreamAudit, Summary, SummaryEntry
from .thresholds import PowerLadder

DRAIN_ORDERS = ("highest", "lowest", "arrival")


@dataclass(frozen=True)
class StreamingConfig:
    """Streaming builder parameters.

    gamma (swap margin) and sample_prob default per objective class: the
    non-monotone run uses gamma = 1.746 with sample_prob = 1/(gamma+2), the
    monotone run disables subsampling (gamma = 1, sample_prob = 1).
    """

    epsilon: float
    d: int
    monotone_mode: bool = False
    gamma: float | None = None
    sample_prob: float | None = None
    seed: int = 0
    drain_order: str = "highest"
    audit: bool = False

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.d < 0:
            raise ValueError("deletion budget d must be non-negative")
        if self.gamma is not None and not self.gamma > 0.0:
            raise ValueError("gamma must be positive")
        if self.sample_prob is not None and not 0.0 < self.sample_prob <= 1.0:
            raise ValueError("sample_prob must lie in (0, 1]")
        if self.drain_order not in DRAIN_ORDERS:
            raise ValueError(f"drain_order must be one of {DRAIN_ORDERS}")

    @property
    def gamma_value(self) -> float:
        if self.gamma is not None:
            return self.gamma
        return 1.0 if self.monotone_mode else 1.746

    @property
    def sample_prob_value(self) -> float:
        if self.sample_prob is not None:
            return self.sample_prob
        return 1.0 if self.monotone_mode else 1.0 / (self.gamma_value + 2.0)

    @property
    def drain_cap(self) -> int:
        return max(1, math.ceil(self.d / self.epsilon))


class StreamState:
    """Mutable state of one streaming run.  Strictly sequential per stream."""

    def __init__(self, config: StreamingConfig, k: int):
        if k < 1:
            raise ValueError("matroid rank must be at least 1")
        self.config = config
        self.k = k
        self.ladder = PowerLadder(1.0 + config.epsilon)
        self.candidate: list[int] = []  # insertion order
        self.candidate_set: set[int] = set()
        self.weights: dict[int, float] = {}  # fixed once per drained element
        self.entry_exponent: dict[int, int] = {}
        self.buckets: dict[int, list[int]] = {}  # exponent -> sorted ids
        self.top_buffer: list[tuple[float, int]] = []  # (value, id), size <= d
        self.delta = 0.0
        self.tau_min = 0.0
        self.min_active_exponent: int | None = None
        self.audit = StreamAudit()
        self.upward_moves = 0
        self.upward_moves_after_growth = 0
        self.arrivals = 0
        self.seen: set[int] = set()
        self.peak_memory = 0
        self.max_active_buckets = 0

    def memory(self) -> int:
        return (
            len(self.candidate)
            + len(self.top_buffer)
            + sum(len(b) for b in self.buckets.values())
        )

    def _note_boundary(self) -> None:
        self.peak_memory = max(self.peak_memory, self.memory())
        self.max_active_buckets = max(self.max_active_buckets, len(self.buckets))


def _pop_smallest(buffer: list[tuple[float, int]]) -> tuple[float, int]:
    # smallest value leaves; on ties the larger id leaves first
    j = min(range(len(buffer)), key=lambda t: (buffer[t][0], -buffer[t][1]))
    return buffer.pop(j)


def ingest(
    state: StreamState,
    element: int,
    objective: Objective,
    matroid: Matroid,
    rng: np.random.Generator,
) -> StreamState:
    """Process one arrival; drains buckets as a side effect when they fill."""
    element = int(element)
    if element in state.seen:
        raise ValueError(f"element {element} arrived twice")
    state.seen.add(element)
    state.arrivals += 1
    cfg = state.config

    value = objective.value((element,))
    if len(state.top_buffer) < cfg.d:
        # warm-up: the first d arrivals are buffered wholesale
        state.top_buffer.append((value, element))
        state._note_boundary()
        return state

    state.top_buffer.append((value, element))
    popped_value, popped = _pop_smallest(state.top_buffer)

    if popped_value > state.delta:
        state.delta = popped_value
    state.tau_min = cfg.epsilon / (1.0 + cfg.epsilon) * state.delta / state.k
    # tau_min can underflow to 0 on subnormal anchors; the window then stays open
    if state.tau_min > 0.0:
        state.min_active_exponent = state.ladder.ceil_exponent(state.tau_min)
        stale = sorted(x for x in state.buckets if x < state.min_active_exponent)
        for x in stale:
            state.audit.low_value.extend(state.buckets.pop(x))

    gain = objective.marginal(popped, state.candidate_set)
    if state.tau_min > gain:
        state.audit.low_value.append(popped)
        state._note_boundary()
        return state
    filed = False
    if gain > 0.0:
        exponent = state.ladder.floor_exponent(gain)
        # the window may leave no lattice point at or below the gain
        if state.min_active_exponent is None or exponent >= state.min_active_exponent:
            bisect.insort(state.buckets.setdefault(exponent, []), popped)
            filed = True
    if not filed:
        state.audit.low_value.append(popped)
        state._note_boundary()
        return state

    drain_buckets(state, objective, matroid, rng)
    state._note_boundary()
    return state


def drain_buckets(
    state: StreamState,
    objective: Objective,
    matroid: Matroid,
    rng: np.random.Generator,
) -> StreamState:
    """Pull elements out of capped buckets until none is at the cap.

    Per drained element the draw order is fixed: bucket-index draw first,
    Bernoulli coin second, so traces replay exactly.
    """
    cfg = state.config
    cap = cfg.drain_cap
    while True:
        over = [x for x in state.buckets if len(state.buckets[x]) >= cap]
        if not over:
            return state
        if cfg.drain_order == "highest":
            exponent = max(over)
        elif cfg.drain_order == "lowest":
            exponent = min(over)
        else:  # bucket-map insertion order
            overset = set(over)
            exponent = next(x for x in state.buckets if x in overset)
        bucket = state.buckets[exponent]
        g = bucket.pop(int(rng.integers(len(bucket))))
        if not bucket:
            del state.buckets[exponent]
        state.audit.drained.append(g)

        weight = objective.marginal(g, state.candidate_set)
        state.weights[g] = weight
        state.audit.weight_log.append((g, weight))
        accepted = bool(rng.random() < cfg.sample_prob_value)

        changed = grew = False
        if matroid.is_independent(state.candidate_set | {g}):
            if accepted:
                state.candidate.append(g)
                state.candidate_set.add(g)
                state.entry_exponent[g] = exponent
                changed = grew = True
            else:
                state.audit.sample_rejected.append(g)
        else:
            cycle = matroid.circuit(state.candidate_set, g)
            victim = min(cycle, key=lambda y: (state.weights[y], y))
            if state.weights[g] > (1.0 + cfg.gamma_value) * state.weights[victim]:
                if accepted:
                    state.candidate.remove(victim)
                    state.candidate_set.discard(victim)
                    state.audit.swapped_out.append((victim, state.weights[victim]))
                    state.candidate.append(g)
                    state.candidate_set.add(g)
                    state.entry_exponent[g] = exponent
                    changed = True
                else:
                    state.audit.sample_rejected.append(g)
            else:
                state.audit.swap_failed.append(g)

        if changed:
            if cfg.audit and not matroid.is_independent(state.candidate_set):
                raise AssertionError("candidate solution became dependent")
            rebucket(state, objective, solution_grew=grew)


def rebucket(state: StreamState, objective: Objective, solution_grew: bool = False) -> StreamState:
    """Refile every buffered element by its marginal against the current candidate.

    Elements falling under the active window are discarded.  When the
    candidate only grew, gains cannot rise, so upward moves are tracked
    separately from the legitimate ones a swap can cause.
    """
    old = state.buckets
    state.buckets = {}
    for exponent in sorted(old, reverse=True):
        for e in old[exponent]:
            gain = objective.marginal(e, state.candidate_set)
            if state.tau_min > gain or gain <= 0.0:
                state.audit.low_value.append(e)
                continue
            new_exponent = state.ladder.floor_exponent(gain)
            if (
                state.min_active_exponent is not None
                and new_exponent < state.min_active_exponent
            ):
                state.audit.low_value.append(e)
                continue
            if new_exponent > exponent:
                state.upward_moves += 1
                if solution_grew:
                    state.upward_moves_after_growth += 1
            bisect.insort(state.buckets.setdefault(new_exponent, []), e)
    return state


def finalize(state: StreamState) -> Summary:
    """Close the stream: reservoir = top buffer plus surviving buckets."""
    cfg = state.config
    entries = [
        SummaryEntry(e, state.entry_exponent[e], state.weights[e])
        for e in state.candidate
    ]
    buckets = {x: list(state.buckets[x]) for x in sorted(state.buckets, reverse=True)}
    counters = {
        "arrivals": state.arrivals,
        "drained": len(state.audit.drained),
        "swapped_out": len(state.audit.swapped_out),
        "sample_rejected": len(state.audit.sample_rejected),
        "swap_failed": len(state.audit.swap_failed),
        "low_value": len(state.audit.low_value),
        "upward_moves": state.upward_moves,
        "upward_moves_after_growth": state.upward_moves_after_growth,
    }
    return Summary(
        mode="streaming",
        n=state.arrivals,
        k=state.k,
        d=cfg.d,
        epsilon=cfg.epsilon,
        monotone=cfg.monotone_mode,
        seed=cfg.seed,
        delta=state.delta,
        entries=entries,
        buckets=buckets,
        top_buffer=sorted(e for _, e in state.top_buffer),
        exponents=sorted(buckets, reverse=True),
        counters=counters,
        gamma=cfg.gamma_value,
        sample_prob=cfg.sample_prob_value,
        drain_order=cfg.drain_order,
        peak_memory=state.peak_memory,
        audit=state.audit,
    )


def stream_summary(
    objective: Objective,
    matroid: Matroid,
    config: StreamingConfig,
    order: Iterable[int],
    rng: np.random.Generator | None = None,
) -> Summary:
    """Feed the whole arrival order through one stream and finalize."""
    if matroid.n != objective.n:
        raise ValueError("objective and matroid ground sets differ")
    if rng is None:
        rng = np.random.default_rng(config.seed)
    state = StreamState(config, matroid.k)
    for element in order:
        ingest(state, element, objective, matroid, rng)
    return finalize(state)


# ---------------------------------------------------------------------------
# weight-function invariants


@dataclass(frozen=True)
class WeightCheck:
    name: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs + 1e-9


@dataclass(frozen=True)
class WeightReport:
    checks: tuple[WeightCheck, ...]

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[WeightCheck]:
        return [c for c in self.checks if not c.ok]


def check_weight_properties(
    summary: Summary, objective: Objective, deleted: Sequence[int] = ()
) -> WeightReport:
    """Post-run weight sanity for a streaming summary against a deleted set.

    Verifies that the swap margin keeps the kicked-out weight dominated, that
    weights underestimate the value of the candidate and of its survivors,
    and that they overestimate the value of candidate plus kicked elements.
    """
    if summary.mode != "streaming" or summary.audit is None:
        raise ValueError("weight checks need a streaming summary with its audit trail")
    gamma = summary.gamma if summary.gamma is not None else 1.0
    removed = set(int(e) for e in deleted)

    solution = summary.solution
    weight_solution = sum(entry.gain for entry in summary.entries)
    weight_kicked = sum(w for _, w in summary.audit.swapped_out)
    value_solution = objective.value(solution)

    survivors = [e for e in solution if e not in removed]
    weight_survivors = sum(
        entry.gain for entry in summary.entries if entry.element not in removed
    )
    value_survivors = objective.value(survivors)

    union = sorted(set(solution) | {e for e, _ in summary.audit.swapped_out})
    value_union = objective.value(union)
    weight_union = weight_solution + weight_kicked

    checks = (
        WeightCheck("swap_balance", gamma * weight_kicked, weight_solution),
        WeightCheck("solution_weight_vs_value", weight_solution, value_solution),
        WeightCheck("survivor_weight_vs_value", weight_survivors, value_survivors),
        WeightCheck("union_value_vs_weight", value_union, weight_union),
    )
    return WeightReport(checks)
