"""Summary containers shared by the offline and streaming builders, plus file I/O."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class SummaryEntry:
    """One candidate-solution insertion: element, threshold exponent, gain.

    ``gain`` is the marginal value at insertion time; for streaming summaries
    it doubles as the element's swap weight.
    """

    element: int
    exponent: int
    gain: float


@dataclass
class StreamAudit:
    """Full trace of a streaming run, for invariant tooling.

    drained: every element pulled out of a bucket, in drain order.
    swapped_out: (element, weight) pairs kicked out of the candidate solution.
    sample_rejected: drained elements dropped by the subsampling coin.
    swap_failed: drained elements whose weight did not beat the swap margin.
    low_value: elements discarded for falling under the active threshold window.
    weight_log: every (element, weight) assignment, in assignment order.
    """

    drained: list[int] = field(default_factory=list)
    swapped_out: list[tuple[int, float]] = field(default_factory=list)
    sample_rejected: list[int] = field(default_factory=list)
    swap_failed: list[int] = field(default_factory=list)
    low_value: list[int] = field(default_factory=list)
    weight_log: list[tuple[int, float]] = field(default_factory=list)


@dataclass
class Summary:
    """Deletion-robust summary: candidate solution plus reservoir.

    The candidate (``entries``) is always independent in the build matroid;
    the reservoir is the protected top-value buffer plus every leftover
    threshold bucket.
    """

    mode: str
    n: int
    k: int
    d: int
    epsilon: float
    monotone: bool
    seed: int
    delta: float
    entries: list[SummaryEntry]
    buckets: dict[int, list[int]]
    top_buffer: list[int]
    exponents: list[int]
    counters: dict[str, int]
    bucket_mode: str | None = None
    gamma: float | None = None
    sample_prob: float | None = None
    drain_order: str | None = None
    peak_memory: int | None = None
    audit: StreamAudit | None = None

    @property
    def solution(self) -> list[int]:
        """Candidate-solution elements in insertion order."""
        return [entry.element for entry in self.entries]

    @property
    def solution_set(self) -> frozenset:
        return frozenset(entry.element for entry in self.entries)

    @property
    def reservoir(self) -> list[int]:
        """Sorted reservoir ids: top-value buffer plus leftover buckets."""
        ids = set(self.top_buffer)
        for bucket in self.buckets.values():
            ids.update(bucket)
        return sorted(ids)

    def weight_of(self) -> dict[int, float]:
        """Per-element weight of the candidate solution."""
        return {entry.element: entry.gain for entry in self.entries}

    def size(self) -> int:
        """|candidate| + |reservoir|, deduplicated against the candidate."""
        return len(self.entries) + len(set(self.reservoir) - self.solution_set)


def summary_size(summary: Summary) -> int:
    return summary.size()


# ---------------------------------------------------------------------------
# line-oriented summary files


def _ids(ids) -> str:
    return ",".join(str(int(e)) for e in ids)


def _parse_ids(text: str) -> list[int]:
    text = text.strip()
    return [int(tok) for tok in text.split(",")] if text else []


def format_summary(summary: Summary, include_audit: bool = False) -> str:
    lines = ["# robust-summary summary v1"]
    lines.append(f"mode={summary.mode}")
    lines.append(f"n={summary.n}")
    lines.append(f"k={summary.k}")
    lines.append(f"d={summary.d}")
    lines.append(f"epsilon={summary.epsilon!r}")
    lines.append(f"monotone={int(summary.monotone)}")
    lines.append(f"seed={summary.seed}")
    if summary.bucket_mode is not None:
        lines.append(f"bucket_mode={summary.bucket_mode}")
    if summary.gamma is not None:
        lines.append(f"gamma={summary.gamma!r}")
    if summary.sample_prob is not None:
        lines.append(f"p={summary.sample_prob!r}")
    if summary.drain_order is not None:
        lines.append(f"drain_order={summary.drain_order}")
    lines.append(f"delta={summary.delta!r}")
    lines.append("exponents=" + ",".join(str(i) for i in summary.exponents))
    for entry in summary.entries:
        lines.append(f"a={entry.element},{entry.exponent},{entry.gain!r}")
    for exp in sorted(summary.buckets, reverse=True):
        lines.append(f"bucket={exp}:{_ids(summary.buckets[exp])}")
    lines.append("vd=" + _ids(sorted(summary.top_buffer)))
    lines.append("b=" + _ids(summary.reservoir))
    if summary.peak_memory is not None:
        lines.append(f"peak_memory={summary.peak_memory}")
    lines.append(
        "counters=" + ",".join(f"{name}:{summary.counters[name]}" for name in sorted(summary.counters))
    )
    if include_audit and summary.audit is not None:
        audit = summary.audit
        lines.append("audit_drained=" + _ids(audit.drained))
        lines.append(
            "audit_swapped_out=" + ",".join(f"{e}:{w!r}" for e, w in audit.swapped_out)
        )
        lines.append("audit_sample_rejected=" + _ids(audit.sample_rejected))
        lines.append("audit_swap_failed=" + _ids(audit.swap_failed))
        lines.append("audit_low_value=" + _ids(audit.low_value))
        lines.append("weight_log=" + ",".join(f"{e}:{w!r}" for e, w in audit.weight_log))
    return "\n".join(lines) + "\n"


def write_summary(summary: Summary, path, include_audit: bool = False) -> None:
    Path(path).write_text(format_summary(summary, include_audit=include_audit))


def _parse_pairs(text: str) -> list[tuple[int, float]]:
    text = text.strip()
    if not text:
        return []
    out = []
    for tok in text.split(","):
        e, w = tok.split(":")
        out.append((int(e), float(w)))
    return out


def parse_summary(text: str) -> Summary:
    fields: dict[str, str] = {}
    entries: list[SummaryEntry] = []
    buckets: dict[int, list[int]] = {}
    audit_seen = False
    audit = StreamAudit()
    known = {
        "mode", "n", "k", "d", "epsilon", "monotone", "seed", "bucket_mode",
        "gamma", "p", "drain_order", "delta", "exponents", "vd", "b",
        "peak_memory", "counters",
    }
    audit_keys = {
        "audit_drained", "audit_swapped_out", "audit_sample_rejected",
        "audit_swap_failed", "audit_low_value", "weight_log",
    }
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "a":
            e, exp, gain = value.split(",")
            entries.append(SummaryEntry(int(e), int(exp), float(gain)))
        elif key == "bucket":
            exp, _, ids = value.partition(":")
            buckets[int(exp)] = _parse_ids(ids)
        elif key in audit_keys:
            audit_seen = True
            if key == "audit_drained":
                audit.drained = _parse_ids(value)
            elif key == "audit_swapped_out":
                audit.swapped_out = _parse_pairs(value)
            elif key == "audit_sample_rejected":
                audit.sample_rejected = _parse_ids(value)
            elif key == "audit_swap_failed":
                audit.swap_failed = _parse_ids(value)
            elif key == "audit_low_value":
                audit.low_value = _parse_ids(value)
            else:
                audit.weight_log = _parse_pairs(value)
        elif key in known:
            fields[key] = value
        else:
            raise ValueError(f"unknown summary key: {key!r}")
    for required in ("mode", "n", "k", "d", "epsilon", "monotone", "seed", "delta"):
        if required not in fields:
            raise ValueError(f"summary file is missing {required!r}")
    counters: dict[str, int] = {}
    if fields.get("counters"):
        for tok in fields["counters"].split(","):
            name, _, count = tok.partition(":")
            counters[name] = int(count)
    exponents = [int(t) for t in fields.get("exponents", "").split(",") if t.strip()]
    return Summary(
        mode=fields["mode"],
        n=int(fields["n"]),
        k=int(fields["k"]),
        d=int(fields["d"]),
        epsilon=float(fields["epsilon"]),
        monotone=bool(int(fields["monotone"])),
        seed=int(fields["seed"]),
        delta=float(fields["delta"]),
        entries=entries,
        buckets=buckets,
        top_buffer=_parse_ids(fields.get("vd", "")),
        exponents=exponents,
        counters=counters,
        bucket_mode=fields.get("bucket_mode"),
        gamma=float(fields["gamma"]) if "gamma" in fields else None,
        sample_prob=float(fields["p"]) if "p" in fields else None,
        drain_order=fields.get("drain_order"),
        peak_memory=int(fields["peak_memory"]) if "peak_memory" in fields else None,
        audit=audit if audit_seen else None,
    )


def read_summary(path) -> Summary:
    return parse_summary(Path(path).read_text())
