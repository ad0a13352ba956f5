"""Matroid independence oracles with rank and circuit extraction."""

from __future__ import annotations

from typing import Iterable, Sequence

Ids = Iterable[int]


class Matroid:
    """Independence oracle over the ground set 0..n-1.

    Subclasses provide the fast native membership test; rank and circuit are
    derived from it, so every algorithm in the package stays oracle-generic.
    Oracles are immutable after construction.
    """

    kind = "abstract"
    n: int
    k: int

    def is_independent(self, ids: Ids) -> bool:
        return self._independent(self._as_set(ids))

    def rank_of(self, ids: Ids) -> int:
        """Size of a maximal independent subset, grown greedily.

        Greedy is exact here by the matroid exchange property.
        """
        s = self._as_set(ids)
        grown: set[int] = set()
        for e in sorted(s):
            if self._independent(frozenset(grown | {e})):
                grown.add(e)
        return len(grown)

    def circuit(self, a: Ids, g: int) -> frozenset:
        """The unique minimal dependent subset of a+g, for independent a.

        Equals {g} plus every x in a whose removal restores independence;
        valid only when a is independent and a+g is not.
        """
        base = self._as_set(a)
        g = self._check_id(g)
        if not self._independent(base):
            raise ValueError("circuit() requires an independent base set")
        with_g = frozenset(base | {g})
        if self._independent(with_g):
            raise ValueError("circuit() requires base+g to be dependent")
        members = {g}
        for x in sorted(base):
            if self._independent(with_g - {x}):
                members.add(x)
        return frozenset(members)

    def _check_id(self, e) -> int:
        e = int(e)
        if not 0 <= e < self.n:
            raise ValueError(f"element id {e} outside range [0, {self.n})")
        return e

    def _as_set(self, ids: Ids) -> frozenset:
        return frozenset(self._check_id(e) for e in ids)

    def _independent(self, s: frozenset) -> bool:
        raise NotImplementedError


class UniformMatroid(Matroid):
    """Independent iff the set has at most k elements."""

    kind = "uniform"

    def __init__(self, n: int, k: int):
        n, k = int(n), int(k)
        if n < 0 or k < 0:
            raise ValueError("uniform matroid needs n >= 0 and k >= 0")
        self.n = n
        self.cap = k
        self.k = min(n, k)

    def _independent(self, s: frozenset) -> bool:
        return len(s) <= self.cap


class PartitionMatroid(Matroid):
    """Per-block capacities; blocks must partition the ground set exactly."""

    kind = "partition"

    def __init__(self, blocks: Sequence[Iterable[int]], capacities: Sequence[int]):
        blocks = [sorted(int(e) for e in b) for b in blocks]
        caps = [int(c) for c in capacities]
        if len(blocks) != len(caps):
            raise ValueError("need one capacity per block")
        if any(c < 0 for c in caps):
            raise ValueError("capacities must be non-negative")
        n = sum(len(b) for b in blocks)
        seen = sorted(e for b in blocks for e in b)
        if seen != list(range(n)):
            raise ValueError("blocks must partition 0..n-1 exactly")
        self.n = n
        self.blocks = tuple(tuple(b) for b in blocks)
        self.capacities = tuple(caps)
        self.block_of = [0] * n
        for bi, b in enumerate(blocks):
            for e in b:
                self.block_of[e] = bi
        self.k = sum(min(c, len(b)) for c, b in zip(caps, blocks))

    def _independent(self, s: frozenset) -> bool:
        counts = [0] * len(self.blocks)
        for e in s:
            bi = self.block_of[e]
            counts[bi] += 1
            if counts[bi] > self.capacities[bi]:
                return False
        return True


class GraphicMatroid(Matroid):
    """Elements are edges of a simple graph; independent = acyclic subset."""

    kind = "graphic"

    def __init__(self, n_vertices: int, edges: Sequence[tuple[int, int]]):
        n_vertices = int(n_vertices)
        pairs = []
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}: graph must be simple")
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge ({u},{v}) references a vertex outside range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}: graph must be simple")
            seen.add(key)
            pairs.append((u, v))
        self.n_vertices = n_vertices
        self.edges = tuple(pairs)
        self.n = len(pairs)
        self.k = n_vertices - self._component_count(range(self.n))

    def _component_count(self, edge_ids: Iterable[int]) -> int:
        parent = list(range(self.n_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comps = self.n_vertices
        for e in edge_ids:
            u, v = self.edges[e]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                comps -= 1
        return comps

    def _independent(self, s: frozenset) -> bool:
        # union-find scratch per call; no state is shared across calls
        parent = list(range(self.n_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in sorted(s):
            u, v = self.edges[e]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


def make_uniform(n: int, k: int) -> UniformMatroid:
    return UniformMatroid(n, k)


def make_partition(blocks, capacities) -> PartitionMatroid:
    return PartitionMatroid(blocks, capacities)


def make_graphic(n_vertices: int, edges) -> GraphicMatroid:
    return GraphicMatroid(n_vertices, edges)
