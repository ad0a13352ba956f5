"""Seeded synthetic instance generators.

Spec strings name a generator and its parameters, e.g.::

    coverage n=14 universe=20 density=0.25
    facility n=12 clients=8
    cut n=12 p=0.4 wmin=0.5 wmax=1.5
    lowerbound k=4 d=3 nzero=10

The lower-bound generator builds the hard additive instance where exactly
k+d elements carry unit weight and the rest are worthless; any constant
factor summary must keep essentially all of them.
"""

from __future__ import annotations

import numpy as np

from .instance import Instance, parse_matroid_spec
from .matroids import UniformMatroid
from .objectives import GraphCut, Modular, FacilityLocation, WeightedCoverage

GENERATOR_KINDS = ("coverage", "facility", "cut", "lowerbound")


def _parse_spec(spec: str) -> tuple[str, dict[str, str]]:
    tokens = spec.split()
    if not tokens:
        raise ValueError("empty generator spec")
    kind = tokens[0]
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown generator {kind!r}; expected one of {GENERATOR_KINDS}")
    args = {}
    for tok in tokens[1:]:
        key, sep, value = tok.partition("=")
        if not sep:
            raise ValueError(f"malformed generator argument {tok!r}")
        args[key] = value
    return kind, args


def generate_instance(spec: str, matroid: str | None = None, seed: int = 0) -> Instance:
    """Build an instance from a generator spec, deterministically per seed."""
    kind, args = _parse_spec(spec)
    rng = np.random.default_rng(seed)

    if kind == "lowerbound":
        k = int(args["k"])
        d = int(args["d"])
        nzero = int(args.get("nzero", "0"))
        weights = [1.0] * (k + d) + [0.0] * nzero
        return Instance(Modular(weights), UniformMatroid(len(weights), k))

    n = int(args["n"])
    if matroid is None:
        raise ValueError(f"generator {kind!r} needs a matroid spec")

    if kind == "coverage":
        universe = int(args["universe"])
        density = float(args["density"])
        item_weights = rng.uniform(0.1, 1.0, size=universe)
        covers = []
        for _ in range(n):
            mask = rng.random(universe) < density
            covers.append([int(u) for u in np.flatnonzero(mask)])
        objective = WeightedCoverage(item_weights, covers)
    elif kind == "facility":
        clients = int(args["clients"])
        objective = FacilityLocation(rng.random((clients, n)))
    else:  # cut
        p = float(args["p"])
        wmin = float(args.get("wmin", "0.5"))
        wmax = float(args.get("wmax", "1.5"))
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < p:
                    edges.append((u, v, float(rng.uniform(wmin, wmax))))
        objective = GraphCut(n, edges)

    return Instance(objective, parse_matroid_spec(matroid, n))
