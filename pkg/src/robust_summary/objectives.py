"""Submodular objective oracles: coverage, facility location, graph cuts, modular."""

from __future__ import annotations

import copy
from typing import Iterable, Sequence

import numpy as np

Ids = Iterable[int]


class Objective:
    """Value oracle for a normalized, non-negative submodular set function.

    The ground set is the integers 0..n-1.  Every value() call bumps a query
    tally so experiment reports can account oracle cost (a marginal costs two
    queries); the tally is the only mutable state, parameters are frozen at
    construction and safe to share across threads.
    """

    kind = "abstract"

    def __init__(self, n: int, monotone: bool):
        if n < 0:
            raise ValueError("ground set size must be non-negative")
        self.n = int(n)
        self.monotone = bool(monotone)
        self._queries = 0

    def value(self, ids: Ids) -> float:
        s = self._as_set(ids)
        self._queries += 1
        if not s:
            return 0.0
        return float(self._value(s))

    def marginal(self, e: int, ids: Ids) -> float:
        """f(ids + e) - f(ids), always computed as two value() calls.

        Yields an exact 0.0 when e is already in the set.
        """
        e = self._check_id(e)
        s = self._as_set(ids)
        return self.value(s | {e}) - self.value(s)

    @property
    def queries(self) -> int:
        return self._queries

    def reset_queries(self) -> None:
        self._queries = 0

    def clone(self) -> "Objective":
        """Same oracle with a fresh query tally; parameters are shared."""
        other = copy.copy(self)
        other._queries = 0
        return other

    def _check_id(self, e) -> int:
        e = int(e)
        if not 0 <= e < self.n:
            raise ValueError(f"element id {e} outside range [0, {self.n})")
        return e

    def _as_set(self, ids: Ids) -> frozenset:
        return frozenset(self._check_id(e) for e in ids)

    def _value(self, s: frozenset) -> float:
        raise NotImplementedError


class WeightedCoverage(Objective):
    """f(S) = total weight of universe items covered by the sets of S."""

    kind = "weighted-coverage"

    def __init__(self, universe_weights: Sequence[float], covers: Sequence[Iterable[int]]):
        weights = np.asarray(list(universe_weights), dtype=float)
        if weights.size and float(weights.min()) < 0.0:
            raise ValueError("universe weights must be non-negative")
        cover_sets = []
        for cover in covers:
            c = frozenset(int(u) for u in cover)
            for u in c:
                if not 0 <= u < weights.size:
                    raise ValueError(f"cover references universe item {u} outside range")
            cover_sets.append(c)
        super().__init__(len(cover_sets), monotone=True)
        self.universe_weights = weights
        self.covers = tuple(cover_sets)

    def _value(self, s: frozenset) -> float:
        covered: set[int] = set()
        for e in s:
            covered |= self.covers[e]
        if not covered:
            return 0.0
        return float(self.universe_weights[sorted(covered)].sum())


class FacilityLocation(Objective):
    """f(S) = sum over clients of the best similarity to an element of S."""

    kind = "facility-location"

    def __init__(self, similarity: Sequence[Sequence[float]]):
        sim = np.asarray(similarity, dtype=float)
        if sim.ndim != 2:
            raise ValueError("similarity must be a 2-D clients x elements matrix")
        if sim.size and float(sim.min()) < 0.0:
            raise ValueError("similarity entries must be non-negative")
        super().__init__(sim.shape[1], monotone=True)
        self.similarity = sim

    def _value(self, s: frozenset) -> float:
        if self.similarity.shape[0] == 0:
            return 0.0
        cols = sorted(s)
        return float(self.similarity[:, cols].max(axis=1).sum())


class GraphCut(Objective):
    """f(S) = total weight of edges with exactly one endpoint in S.

    Non-monotone: f(V) = f(empty) = 0.  Elements are the graph vertices.
    """

    kind = "graph-cut"

    def __init__(self, n_vertices: int, edges: Sequence[tuple[int, int, float]]):
        n_vertices = int(n_vertices)
        us, vs, ws = [], [], []
        for u, v, w in edges:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise ValueError(f"self-loop at vertex {u} is not allowed")
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge ({u},{v}) references a vertex outside range")
            if w < 0.0:
                raise ValueError("edge weights must be non-negative")
            us.append(u)
            vs.append(v)
            ws.append(w)
        super().__init__(n_vertices, monotone=False)
        self.edge_u = np.asarray(us, dtype=int)
        self.edge_v = np.asarray(vs, dtype=int)
        self.edge_w = np.asarray(ws, dtype=float)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [
            (int(u), int(v), float(w))
            for u, v, w in zip(self.edge_u, self.edge_v, self.edge_w)
        ]

    def _value(self, s: frozenset) -> float:
        if self.edge_w.size == 0:
            return 0.0
        inside = np.zeros(self.n, dtype=bool)
        inside[sorted(s)] = True
        crossing = inside[self.edge_u] ^ inside[self.edge_v]
        return float(self.edge_w[crossing].sum())


class Modular(Objective):
    """Additive f(S) = sum of per-element weights."""

    kind = "modular"

    def __init__(self, weights: Sequence[float]):
        w = np.asarray(list(weights), dtype=float)
        if w.size and float(w.min()) < 0.0:
            raise ValueError("element weights must be non-negative")
        super().__init__(w.size, monotone=True)
        self.weights = w

    def _value(self, s: frozenset) -> float:
        return float(self.weights[sorted(s)].sum())


def make_weighted_coverage(universe_weights, covers) -> WeightedCoverage:
    return WeightedCoverage(universe_weights, covers)


def make_facility_location(similarity) -> FacilityLocation:
    return FacilityLocation(similarity)


def make_cut_function(n_vertices, edges) -> GraphCut:
    return GraphCut(n_vertices, edges)


def make_modular(weights) -> Modular:
    return Modular(weights)
