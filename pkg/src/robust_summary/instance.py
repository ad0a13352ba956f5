"""Instance bundles and the line-oriented instance file format.

Grammar (one ``key=value`` per line, ``#`` comments and blank lines allowed;
unknown keys are rejected)::

    n=<int>                      ground-set size, must come first
    objective=<kind>             weighted-coverage | facility-location |
                                 graph-cut | modular
    universe=<floats>            weighted-coverage: universe item weights
    cover <i>=<ids>              weighted-coverage: one line per element
    row=<floats>                 facility-location: one line per client
    edge=<u> <v> <w>             graph-cut: one line per edge
    weights=<floats>             modular: per-element weights
    matroid=<spec>               uniform k=<int>
                                 | partition blocks=<ids|ids|...> caps=<ints>
                                 | partition nblocks=<int> cap=<int>   (round-robin)
                                 | graphic vertices=<int> edgemap=<u-v,...>
    tag <i>=<text>               optional display tag for reports

Lists are comma-separated; floats round-trip exactly (written with repr).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .matroids import GraphicMatroid, Matroid, PartitionMatroid, UniformMatroid
from .objectives import (
    FacilityLocation,
    GraphCut,
    Modular,
    Objective,
    WeightedCoverage,
)


@dataclass
class Instance:
    """Ground set bundled with its objective and matroid oracles."""

    objective: Objective
    matroid: Matroid
    tags: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.objective.n != self.matroid.n:
            raise ValueError("objective and matroid must share the ground set")

    @property
    def n(self) -> int:
        return self.objective.n


def _floats(text: str) -> list[float]:
    text = text.strip()
    return [float(t) for t in text.split(",")] if text else []


def _ints(text: str) -> list[int]:
    text = text.strip()
    return [int(t) for t in text.split(",")] if text else []


def parse_matroid_spec(spec: str, n: int) -> Matroid:
    tokens = spec.split()
    if not tokens:
        raise ValueError("empty matroid spec")
    kind, args = tokens[0], {}
    for tok in tokens[1:]:
        key, _, value = tok.partition("=")
        args[key] = value
    if kind == "uniform":
        return UniformMatroid(n, int(args["k"]))
    if kind == "partition":
        if "blocks" in args:
            blocks = [_ints(b) for b in args["blocks"].split("|")]
            caps = _ints(args["caps"])
        else:  # round-robin shorthand
            nblocks = int(args["nblocks"])
            cap = int(args.get("cap", "1"))
            blocks = [list(range(b, n, nblocks)) for b in range(nblocks)]
            caps = [cap] * nblocks
        return PartitionMatroid(blocks, caps)
    if kind == "graphic":
        pairs = []
        for tok in args["edgemap"].split(","):
            u, _, v = tok.partition("-")
            pairs.append((int(u), int(v)))
        if len(pairs) != n:
            raise ValueError("graphic edgemap must list one edge per element")
        return GraphicMatroid(int(args["vertices"]), pairs)
    raise ValueError(f"unknown matroid kind {kind!r}")


def format_matroid(matroid: Matroid) -> str:
    if isinstance(matroid, UniformMatroid):
        return f"uniform k={matroid.cap}"
    if isinstance(matroid, PartitionMatroid):
        blocks = "|".join(",".join(str(e) for e in b) for b in matroid.blocks)
        caps = ",".join(str(c) for c in matroid.capacities)
        return f"partition blocks={blocks} caps={caps}"
    if isinstance(matroid, GraphicMatroid):
        edgemap = ",".join(f"{u}-{v}" for u, v in matroid.edges)
        return f"graphic vertices={matroid.n_vertices} edgemap={edgemap}"
    raise ValueError(f"cannot serialize matroid kind {matroid.kind!r}")


def format_instance(instance: Instance) -> str:
    obj = instance.objective
    lines = ["# robust-summary instance v1", f"n={obj.n}", f"objective={obj.kind}"]
    if isinstance(obj, WeightedCoverage):
        lines.append("universe=" + ",".join(repr(float(w)) for w in obj.universe_weights))
        for e, cover in enumerate(obj.covers):
            lines.append(f"cover {e}=" + ",".join(str(u) for u in sorted(cover)))
    elif isinstance(obj, FacilityLocation):
        for row in obj.similarity:
            lines.append("row=" + ",".join(repr(float(x)) for x in row))
    elif isinstance(obj, GraphCut):
        for u, v, w in obj.edges:
            lines.append(f"edge={u} {v} {w!r}")
    elif isinstance(obj, Modular):
        lines.append("weights=" + ",".join(repr(float(w)) for w in obj.weights))
    else:
        raise ValueError(f"cannot serialize objective kind {obj.kind!r}")
    lines.append("matroid=" + format_matroid(instance.matroid))
    for e in sorted(instance.tags):
        lines.append(f"tag {e}={instance.tags[e]}")
    return "\n".join(lines) + "\n"


def write_instance(instance: Instance, path) -> None:
    Path(path).write_text(format_instance(instance))


def parse_instance_text(text: str) -> Instance:
    n: int | None = None
    kind: str | None = None
    universe: list[float] | None = None
    covers: dict[int, list[int]] = {}
    rows: list[list[float]] = []
    edges: list[tuple[int, int, float]] = []
    weights: list[float] | None = None
    matroid_spec: str | None = None
    tags: dict[int, str] = {}

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"malformed line (no '='): {line!r}")
        key = key.strip()
        value = value.strip()
        if key == "n":
            n = int(value)
        elif key == "objective":
            kind = value
        elif key == "universe":
            universe = _floats(value)
        elif key.startswith("cover "):
            covers[int(key.split()[1])] = _ints(value)
        elif key == "row":
            rows.append(_floats(value))
        elif key == "edge":
            u, v, w = value.split()
            edges.append((int(u), int(v), float(w)))
        elif key == "weights":
            weights = _floats(value)
        elif key == "matroid":
            matroid_spec = value
        elif key.startswith("tag "):
            tags[int(key.split()[1])] = value
        else:
            raise ValueError(f"unknown instance key: {key!r}")

    if n is None or n < 1:
        raise ValueError("instance needs a positive n")
    if kind is None:
        raise ValueError("instance needs an objective kind")
    if matroid_spec is None:
        raise ValueError("instance needs a matroid")

    if kind == "weighted-coverage":
        if universe is None:
            raise ValueError("weighted-coverage needs a universe line")
        if sorted(covers) != list(range(n)):
            raise ValueError("weighted-coverage needs one cover line per element")
        objective: Objective = WeightedCoverage(universe, [covers[e] for e in range(n)])
    elif kind == "facility-location":
        if not rows:
            raise ValueError("facility-location needs at least one row")
        if any(len(row) != n for row in rows):
            raise ValueError("every similarity row needs one entry per element")
        objective = FacilityLocation(rows)
    elif kind == "graph-cut":
        objective = GraphCut(n, edges)
    elif kind == "modular":
        if weights is None or len(weights) != n:
            raise ValueError("modular needs a weights line with n entries")
        objective = Modular(weights)
    else:
        raise ValueError(f"unknown objective kind {kind!r}")
    if objective.n != n:
        raise ValueError("objective block does not match n")

    return Instance(objective, parse_matroid_spec(matroid_spec, n), tags)


def read_instance(path) -> Instance:
    return parse_instance_text(Path(path).read_text())
