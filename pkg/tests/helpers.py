"""Independent brute-force oracles for pinning expected values in tests.

These deliberately avoid the library's own shortcuts: optima come from plain
itertools enumeration, cut/coverage values from direct definition sweeps,
graphic independence from DFS cycle detection, and matroid axioms from full
bitmask truth tables.
"""

import itertools


def brute_force_opt(objective, matroid, ground):
    """Best independent subset by enumerating every combination."""
    elements = sorted(ground)
    best_val, best = 0.0, ()
    for r in range(len(elements) + 1):
        for combo in itertools.combinations(elements, r):
            if matroid.is_independent(combo):
                v = objective.value(combo)
                if v > best_val:
                    best_val, best = v, combo
    return best_val, set(best)


def cut_value_by_enumeration(edges, inside):
    inside = set(inside)
    total = 0.0
    for u, v, w in edges:
        if (u in inside) != (v in inside):
            total += w
    return total


def coverage_value_by_union(weights, covers, chosen):
    covered = set()
    for e in chosen:
        covered |= set(covers[e])
    return sum(weights[u] for u in covered)


def edge_subset_has_cycle(n_vertices, pairs, chosen):
    """DFS cycle detection over the chosen edge ids."""
    adjacency = {v: [] for v in range(n_vertices)}
    for idx, e in enumerate(chosen):
        u, v = pairs[e]
        adjacency[u].append((v, idx))
        adjacency[v].append((u, idx))
    visited = set()
    for start in range(n_vertices):
        if start in visited:
            continue
        visited.add(start)
        stack = [(start, -1)]
        while stack:
            node, via = stack.pop()
            for nxt, idx in adjacency[node]:
                if idx == via:
                    continue
                if nxt in visited:
                    return True
                visited.add(nxt)
                stack.append((nxt, idx))
    return False


def independence_table(matroid):
    """Truth table over every subset bitmask of the ground set."""
    n = matroid.n
    table = []
    for mask in range(1 << n):
        ids = [i for i in range(n) if mask >> i & 1]
        table.append(matroid.is_independent(ids))
    return table


def downward_closed_violations(table, n):
    bad = []
    for mask in range(1 << n):
        if not table[mask]:
            continue
        for i in range(n):
            if mask >> i & 1 and not table[mask ^ (1 << i)]:
                bad.append((mask, i))
    return bad


def augmentation_violations(table, n):
    independents = [mask for mask in range(1 << n) if table[mask]]
    by_size = {}
    for mask in independents:
        by_size.setdefault(bin(mask).count("1"), []).append(mask)
    bad = []
    sizes = sorted(by_size)
    for sa in sizes:
        for sb in sizes:
            if sb <= sa:
                continue
            for a in by_size[sa]:
                for b in by_size[sb]:
                    extra = b & ~a
                    if not any(table[a | (1 << i)] for i in range(n) if extra >> i & 1):
                        bad.append((a, b))
    return bad


def minimal_dependent_supersets(table, base_mask, g, n):
    """Minimal dependent subsets of base_mask|{g} that contain g."""
    found = []
    # iterate over all subsets of base_mask, each joined with g
    sub = base_mask
    while True:
        mask = sub | (1 << g)
        if not table[mask]:
            # minimal iff every one-element removal restores independence
            if all(table[mask ^ (1 << i)] for i in range(n) if mask >> i & 1):
                found.append(mask)
        if sub == 0:
            break
        sub = (sub - 1) & base_mask
    return found


def mask_to_ids(mask, n):
    return [i for i in range(n) if mask >> i & 1]
