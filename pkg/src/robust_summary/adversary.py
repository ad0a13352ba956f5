"""Oblivious deletion strategies and the ground-truth optimum oracle.

Strategies see the instance and the deletion budget, never a summary or the
algorithm's random bits: the interface makes adaptive adversaries
unrepresentable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .instance import Instance
from .matroids import Matroid, PartitionMatroid
from .objectives import Objective
from .solvers import exhaustive_opt, greedy_matroid

STRATEGY_KINDS = ("top-value", "random", "block-concentrated", "max-damage", "explicit-list")


@dataclass(frozen=True)
class DeletionStrategy:
    kind: str
    d: int
    seed: int | None = None
    block: int | None = None
    ids: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown deletion strategy {self.kind!r}")
        if self.d < 0:
            raise ValueError("deletion budget must be non-negative")

    @property
    def spec(self) -> str:
        if self.kind == "top-value":
            return f"top:{self.d}"
        if self.kind == "random":
            return f"rand:{self.d}:{self.seed}"
        if self.kind == "block-concentrated":
            return f"block:{self.d}:{self.block}"
        if self.kind == "max-damage":
            return f"maxdmg:{self.d}"
        return "list:" + ",".join(str(e) for e in self.ids)


def parse_strategy(spec: str) -> DeletionStrategy:
    """Parse strategy spec strings: top:d, rand:d:seed, block:d:blockid, maxdmg:d, list:path."""
    head, _, rest = spec.strip().partition(":")
    if head == "top":
        return DeletionStrategy("top-value", d=int(rest))
    if head == "rand":
        d, _, seed = rest.partition(":")
        return DeletionStrategy("random", d=int(d), seed=int(seed))
    if head == "block":
        d, _, block = rest.partition(":")
        return DeletionStrategy("block-concentrated", d=int(d), block=int(block))
    if head == "maxdmg":
        return DeletionStrategy("max-damage", d=int(rest))
    if head == "list":
        ids = tuple(int(t) for t in Path(rest).read_text().replace(",", " ").split())
        return DeletionStrategy("explicit-list", d=len(ids), ids=ids)
    raise ValueError(f"cannot parse deletion strategy {spec!r}")


def _singleton_order(objective: Objective) -> list[int]:
    values = [objective.value((e,)) for e in range(objective.n)]
    return sorted(range(objective.n), key=lambda e: (-values[e], e))


def choose_deletions(
    instance: Instance, strategy: DeletionStrategy, exhaustive_cap: int = 22
) -> list[int]:
    """Draw the deleted set: a function of (instance, strategy) only."""
    objective, matroid = instance.objective, instance.matroid
    n = objective.n
    d = strategy.d
    if d == 0:
        return []
    if strategy.kind == "explicit-list":
        ids = sorted(set(strategy.ids or ()))
        if len(ids) > d:
            raise ValueError("explicit deletion list longer than the budget")
        for e in ids:
            if not 0 <= e < n:
                raise ValueError(f"deletion id {e} outside range [0, {n})")
        return ids
    if d > n:
        raise ValueError(f"cannot delete {d} of {n} elements")

    if strategy.kind == "top-value":
        return sorted(_singleton_order(objective)[:d])

    if strategy.kind == "random":
        rng = np.random.default_rng(strategy.seed)
        return sorted(int(e) for e in rng.choice(n, size=d, replace=False))

    if strategy.kind == "block-concentrated":
        chosen: list[int] = []
        if isinstance(matroid, PartitionMatroid) and strategy.block is not None:
            if not 0 <= strategy.block < len(matroid.blocks):
                raise ValueError(f"block {strategy.block} does not exist")
            block = set(matroid.blocks[strategy.block])
            chosen = [e for e in _singleton_order(objective) if e in block][:d]
        # pad from the global top-value order when the block runs short
        for e in _singleton_order(objective):
            if len(chosen) >= d:
                break
            if e not in chosen:
                chosen.append(e)
        return sorted(chosen)

    # max-damage: the d-subset of the 2d most valuable elements minimizing
    # the surviving optimum; restricting to 2d candidates keeps it tractable
    pool = sorted(_singleton_order(objective)[: min(2 * d, n)])
    best_damage = None
    best: tuple[int, ...] | None = None
    for combo in itertools.combinations(pool, d):
        surviving_opt = opt_value(
            objective, matroid, combo, method="exhaustive", cap=exhaustive_cap
        )
        if best_damage is None or surviving_opt < best_damage:
            best_damage = surviving_opt
            best = combo
    assert best is not None
    return sorted(best)


def opt_value(
    objective: Objective,
    matroid: Matroid,
    deleted: Iterable[int],
    method: str = "exhaustive",
    cap: int = 22,
) -> float:
    """Best independent-set value among survivors.

    "exhaustive" is the true optimum (refused above the cap); "greedy-bound"
    returns the greedy value, a lower bound on the optimum that is within a
    factor 2 of it for monotone objectives.
    """
    removed = set(int(e) for e in deleted)
    ground = [e for e in range(objective.n) if e not in removed]
    if method == "exhaustive":
        return objective.value(exhaustive_opt(ground, objective, matroid, cap=cap))
    if method == "greedy-bound":
        return objective.value(greedy_matroid(ground, objective, matroid))
    raise ValueError(f"unknown optimum method {method!r}")
