"""Offline summary construction: descending threshold sweep with bucket sampling.

Builds a deletion-robust summary in one pass over a geometric threshold
lattice.  At each threshold the pool is rescanned into a bucket of feasible
high-marginal elements; while the bucket stays large enough, elements are
drawn uniformly at random into the candidate solution, which insures every
insertion against adversarial deletions.  Leftover buckets are banked into
the reservoir for the post-deletion solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matroids import Matroid
from .objectives import Objective
from .summary import Summary, SummaryEntry
from .thresholds import threshold_lattice


@dataclass(frozen=True)
class CentralizedConfig:
    """Offline builder parameters.

    The approximation guarantee needs epsilon < 1/5; larger values up to 1
    are accepted and only flagged in reports, since the size bounds remain
    meaningful there (see ``epsilon_in_guarantee_range``).
    """

    epsilon: float
    d: int
    monotone_mode: bool = False
    seed: int = 0
    bucket_mode: str = "literal"
    audit: bool = False

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.d < 0:
            raise ValueError("deletion budget d must be non-negative")
        if self.bucket_mode not in ("literal", "lazy"):
            raise ValueError("bucket_mode must be 'literal' or 'lazy'")

    @property
    def epsilon_in_guarantee_range(self) -> bool:
        return 0.0 < self.epsilon < 0.2


def bucket_cap(k: int, d: int, epsilon: float, monotone_mode: bool) -> int:
    """Minimum bucket size before sampling may start, floored at 1.

    Monotone objectives only need buckets of d/epsilon similar elements;
    otherwise (k+d)/epsilon.  Ceiling keeps the size comparison on integers
    without flipping its direction.
    """
    raw = (d if monotone_mode else k + d) / epsilon
    return max(1, math.ceil(raw))


def compute_delta(values: Sequence[float], d: int) -> tuple[float, list[int]]:
    """(d+1)-th largest singleton value and the ids of the d largest.

    Ties break toward the smaller id.  With d or fewer elements the anchor is
    0 and every element is protected.
    """
    order = sorted(range(len(values)), key=lambda e: (-values[e], e))
    top = sorted(order[: min(d, len(values))])
    delta = float(values[order[d]]) if len(values) > d else 0.0
    return delta, top


def _scan_bucket(pool, solution, tau, objective, matroid, lazy, gain_cache, infeasible):
    """Current bucket at threshold tau: feasible pool elements with gain >= tau.

    The literal mode rescans everything; the lazy mode skips elements whose
    cached gain already sits below tau (gains only shrink as the solution
    grows) and elements known to be infeasible (feasibility never returns
    once lost).  Both modes produce the same bucket and the same gains.
    """
    bucket: list[int] = []
    gains: dict[int, float] = {}
    for e in pool:
        if lazy:
            if e in infeasible:
                continue
            if gain_cache[e] < tau:
                continue
            if not matroid.is_independent(solution | {e}):
                infeasible.add(e)
                continue
            gain = objective.marginal(e, solution)
            gain_cache[e] = gain
        else:
            if not matroid.is_independent(solution | {e}):
                continue
            gain = objective.marginal(e, solution)
        if gain >= tau:
            bucket.append(e)
            gains[e] = gain
    return bucket, gains


def build_summary(
    objective: Objective,
    matroid: Matroid,
    config: CentralizedConfig,
    rng: np.random.Generator | None = None,
) -> Summary:
    """Run the offline threshold sweep and return the summary.

    Deterministic given (objective, matroid, config.seed): bucket draws map a
    uniform index into the bucket sorted by element id.
    """
    if objective.n == 0:
        raise ValueError("instance is empty")
    if matroid.n != objective.n:
        raise ValueError("objective and matroid ground sets differ")
    if rng is None:
        rng = np.random.default_rng(config.seed)

    n = objective.n
    values = [objective.value((e,)) for e in range(n)]
    delta, top = compute_delta(values, config.d)
    lattice = threshold_lattice(delta, matroid.k, config.epsilon)
    cap = bucket_cap(matroid.k, config.d, config.epsilon, config.monotone_mode)

    protected = set(top)
    pool = [e for e in range(n) if e not in protected]
    lazy = config.bucket_mode == "lazy"
    # singleton values are the exact gains at the empty solution
    gain_cache = {e: values[e] for e in pool} if lazy else {}
    infeasible: set[int] = set()

    entries: list[SummaryEntry] = []
    solution: set[int] = set()
    leftover: dict[int, list[int]] = {}

    for exponent in lattice.exponents:
        tau = lattice.power(exponent)
        bucket, gains = _scan_bucket(
            pool, solution, tau, objective, matroid, lazy, gain_cache, infeasible
        )
        while len(bucket) >= cap:
            pick = bucket[int(rng.integers(len(bucket)))]
            entries.append(SummaryEntry(pick, exponent, gains[pick]))
            solution.add(pick)
            pool.remove(pick)
            if config.audit and not matroid.is_independent(solution):
                raise AssertionError("candidate solution became dependent")
            bucket, gains = _scan_bucket(
                pool, solution, tau, objective, matroid, lazy, gain_cache, infeasible
            )
        if bucket:
            leftover[exponent] = list(bucket)
            for e in bucket:
                pool.remove(e)

    return Summary(
        mode="centralized",
        n=n,
        k=matroid.k,
        d=config.d,
        epsilon=config.epsilon,
        monotone=config.monotone_mode,
        seed=config.seed,
        delta=delta,
        entries=entries,
        buckets=leftover,
        top_buffer=list(top),
        exponents=list(lattice.exponents),
        counters={"low_value": len(pool)},
        bucket_mode=config.bucket_mode,
    )
