"""Post-deletion solvers and the second-phase driver.

After the deleted set is revealed, the surviving summary is handed to a
constrained-maximization routine; the final answer is the better of the
routine's output and the surviving candidate solution itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .matroids import Matroid
from .objectives import Objective
from .summary import Summary

SOLVER_NAMES = ("greedy", "exhaustive", "localsearch")


@dataclass(frozen=True)
class SolverKind:
    """Which routine runs in the post-deletion phase, with its knobs.

    ``beta`` is the routine's claimed approximation factor, used by bound
    checks; the local search carries no proven factor and reports None.
    """

    name: str
    exhaustive_cap: int = 22
    ls_improve: float = 0.01
    ls_max_moves: int = 10_000

    def __post_init__(self):
        if self.name not in SOLVER_NAMES:
            raise ValueError(f"solver must be one of {SOLVER_NAMES}")
        if self.ls_improve <= 0.0:
            raise ValueError("local-search improvement factor must be positive")

    @property
    def beta(self) -> float | None:
        if self.name == "exhaustive":
            return 1.0
        if self.name == "greedy":
            return 2.0
        return None

    def run(self, ground: Sequence[int], objective: Objective, matroid: Matroid) -> list[int]:
        if self.name == "greedy":
            return greedy_matroid(ground, objective, matroid)
        if self.name == "exhaustive":
            return exhaustive_opt(ground, objective, matroid, cap=self.exhaustive_cap)
        return local_search(
            ground, objective, matroid, improve=self.ls_improve, max_moves=self.ls_max_moves
        )


def greedy_matroid(ground: Iterable[int], objective: Objective, matroid: Matroid) -> list[int]:
    """Classic greedy: keep adding the feasible element of best positive gain.

    Ties break toward the smaller id; stops when nothing improves.
    """
    remaining = sorted(set(int(e) for e in ground))
    chosen: set[int] = set()
    while True:
        best_gain = 0.0
        best = None
        for e in remaining:
            if e in chosen:
                continue
            if not matroid.is_independent(chosen | {e}):
                continue
            gain = objective.marginal(e, chosen)
            if gain > best_gain:
                best_gain = gain
                best = e
        if best is None:
            return sorted(chosen)
        chosen.add(best)


def exhaustive_opt(
    ground: Iterable[int], objective: Objective, matroid: Matroid, cap: int = 22
) -> list[int]:
    """True optimum by enumerating independent subsets (downward-closed DFS).

    Refuses ground sets above ``cap``.  Ties break toward the set that is
    lexicographically smallest as a sorted id tuple, which the pre-order DFS
    visits first.
    """
    elements = sorted(set(int(e) for e in ground))
    if len(elements) > cap:
        raise ValueError(
            f"exhaustive solve refused: {len(elements)} elements exceed the cap of {cap}"
        )
    best_value = 0.0  # the empty set is always independent and worth 0
    best: tuple[int, ...] = ()

    def visit(prefix: list[int], start: int) -> None:
        nonlocal best_value, best
        for idx in range(start, len(elements)):
            e = elements[idx]
            candidate = prefix + [e]
            if not matroid.is_independent(candidate):
                continue
            value = objective.value(candidate)
            if value > best_value:
                best_value = value
                best = tuple(candidate)
            visit(candidate, idx + 1)

    visit([], 0)
    return list(best)


def local_search(
    ground: Iterable[int],
    objective: Objective,
    matroid: Matroid,
    improve: float = 0.01,
    max_moves: int = 10_000,
) -> list[int]:
    """Add/drop/swap local search for non-monotone objectives.

    Accepts the first move that multiplies the value by at least (1+improve)
    (any strictly positive value counts from 0); runs once from the greedy
    solution and once from scratch, returns the better endpoint.  Each
    accepted move is a multiplicative gain, so the search terminates well
    before ``max_moves`` on bounded objectives.
    """
    elements = sorted(set(int(e) for e in ground))

    def improves(new_value: float, value: float) -> bool:
        return new_value > value and new_value >= value * (1.0 + improve)

    def refine(start: Iterable[int]) -> tuple[set[int], float]:
        current = set(start)
        value = objective.value(current)
        for _ in range(max_moves):
            accepted = False
            for e in elements:
                if e in current:
                    continue
                trial = current | {e}
                if matroid.is_independent(trial) and improves(objective.value(trial), value):
                    current, value = trial, objective.value(trial)
                    accepted = True
                    break
            if not accepted:
                for e in sorted(current):
                    trial = current - {e}
                    if improves(objective.value(trial), value):
                        current, value = trial, objective.value(trial)
                        accepted = True
                        break
            if not accepted:
                for out in sorted(current):
                    for inn in elements:
                        if inn in current:
                            continue
                        trial = (current - {out}) | {inn}
                        if matroid.is_independent(trial) and improves(
                            objective.value(trial), value
                        ):
                            current, value = trial, objective.value(trial)
                            accepted = True
                            break
                    if accepted:
                        break
            if not accepted:
                break
        return current, value

    from_greedy = refine(greedy_matroid(elements, objective, matroid))
    from_empty = refine(())
    candidates = sorted(
        (from_greedy, from_empty), key=lambda t: (-t[1], tuple(sorted(t[0])))
    )
    return sorted(candidates[0][0])


@dataclass(frozen=True)
class RobustSolution:
    """Outcome of the post-deletion phase."""

    ids: tuple[int, ...]
    value: float
    source: str  # "candidate-survivors" | "solver-output"
    beta_claimed: float | None
    a_prime_value: float
    deleted: tuple[int, ...]
    warning: str | None = None


def solve_after_deletions(
    summary: Summary,
    deleted: Iterable[int],
    objective: Objective,
    matroid: Matroid,
    solver: SolverKind,
) -> RobustSolution:
    """Drop the deleted elements, run the solver on the survivors, keep the best.

    Ties go to the surviving candidate solution.  A deleted set larger than
    the summary's budget is accepted but flagged: the guarantee is void.
    """
    removed = set(int(e) for e in deleted)
    warning = None
    if len(removed) > summary.d:
        warning = (
            f"deleted set has {len(removed)} elements, summary was built for d={summary.d}; "
            "guarantee void"
        )
    survivors = [e for e in summary.solution if e not in removed]
    reservoir = [e for e in summary.reservoir if e not in removed]
    ground = sorted(set(survivors) | set(reservoir))
    solver_pick = solver.run(ground, objective, matroid)
    survivors_value = objective.value(survivors)
    solver_value = objective.value(solver_pick)
    if solver_value > survivors_value:
        ids, value, source = sorted(solver_pick), solver_value, "solver-output"
    else:
        ids, value, source = sorted(survivors), survivors_value, "candidate-survivors"
    return RobustSolution(
        ids=tuple(ids),
        value=value,
        source=source,
        beta_claimed=solver.beta,
        a_prime_value=survivors_value,
        deleted=tuple(sorted(removed)),
        warning=warning,
    )
