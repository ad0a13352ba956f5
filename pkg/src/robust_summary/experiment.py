"""Experiment runner, summary verification and report emission.

The runner executes seeded two-phase pipelines against obliviously drawn
deletion sets, aggregates the seed ensemble per strategy, compares the
surviving optimum against the theoretical factor times the ensemble mean,
and writes a frozen-schema CSV plus a human-readable report.  Identical
configurations produce byte-identical outputs.
"""

from __future__ import annotations

import configparser
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .adversary import choose_deletions, opt_value, parse_strategy
from .bounds import bound_warnings, theoretical_bound
from .centralized import CentralizedConfig, bucket_cap, build_summary, compute_delta
from .generators import generate_instance
from .instance import Instance, read_instance, write_instance
from .solvers import SolverKind, solve_after_deletions
from .streaming import StreamingConfig, check_weight_properties, stream_summary
from .summary import Summary
from .thresholds import PowerLadder, lattice_size_limit

CSV_HEADER = "# robust-summary csv v1"
CSV_COLUMNS = (
    "strategy,seed,fS,fAprime,opt,method,ratio_ensemble,"
    "summary_size,peak_mem,oracle_calls,invariants_ok"
)

THREAD_ENV = "ROBUST_SUMMARY_THREADS"


# ---------------------------------------------------------------------------
# summary verification


@dataclass(frozen=True)
class VerifyCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[VerifyCheck, ...]

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[VerifyCheck]:
        return [c for c in self.checks if not c.ok]

    def format_text(self) -> str:
        lines = []
        for c in self.checks:
            status = "pass" if c.ok else "FAIL"
            lines.append(f"{status:4}  {c.name}" + (f"  ({c.detail})" if c.detail else ""))
        lines.append("result: " + ("pass" if self.all_ok else "FAIL"))
        return "\n".join(lines) + "\n"


def streaming_memory_limit(k: int, d: int, epsilon: float) -> int:
    """k + d + (worst-case bucket count) * (per-bucket drain cap)."""
    per_bucket = max(1, math.ceil(d / epsilon))
    return k + d + lattice_size_limit(k, epsilon) * per_bucket


def structural_checks(summary: Summary, instance: Instance) -> list[VerifyCheck]:
    """Mode-aware invariants that need no audit trail."""
    checks: list[VerifyCheck] = []
    matroid = instance.matroid
    solution = summary.solution_set
    reservoir = set(summary.reservoir)
    ladder = PowerLadder(1.0 + summary.epsilon)

    checks.append(
        VerifyCheck("solution_independent", matroid.is_independent(solution))
    )
    checks.append(
        VerifyCheck(
            "solution_within_rank",
            len(solution) <= summary.k,
            f"|solution|={len(solution)} k={summary.k}",
        )
    )
    overlap = solution & reservoir
    buckets_flat = [e for exp in summary.buckets for e in summary.buckets[exp]]
    bucket_dupes = len(buckets_flat) != len(set(buckets_flat))
    top_overlap = set(summary.top_buffer) & set(buckets_flat)
    checks.append(
        VerifyCheck(
            "disjointness",
            not overlap and not bucket_dupes and not top_overlap,
            f"solution/reservoir overlap={sorted(overlap)}",
        )
    )
    checks.append(
        VerifyCheck(
            "top_buffer_within_budget",
            len(summary.top_buffer) <= summary.d,
            f"|top|={len(summary.top_buffer)} d={summary.d}",
        )
    )

    if summary.mode == "centralized":
        cap = bucket_cap(summary.k, summary.d, summary.epsilon, summary.monotone)
    else:
        cap = max(1, math.ceil(summary.d / summary.epsilon))
    checks.append(
        VerifyCheck(
            "bucket_caps",
            all(len(b) < cap for b in summary.buckets.values()),
            f"cap={cap}",
        )
    )

    limit = lattice_size_limit(summary.k, summary.epsilon)
    checks.append(
        VerifyCheck(
            "threshold_count",
            len(summary.exponents) <= limit,
            f"used={len(summary.exponents)} limit={limit}",
        )
    )

    if summary.mode == "centralized":
        size_limit = summary.k + summary.d + len(summary.exponents) * cap
        checks.append(
            VerifyCheck(
                "size_bound",
                summary.size() <= size_limit,
                f"size={summary.size()} limit={size_limit}",
            )
        )
        singles = [instance.objective.value((e,)) for e in range(instance.n)]
        delta, top = compute_delta(singles, summary.d)
        checks.append(
            VerifyCheck(
                "anchor_value",
                delta == summary.delta and sorted(top) == sorted(summary.top_buffer),
                f"expected delta={delta!r}",
            )
        )
    else:
        size_limit = streaming_memory_limit(summary.k, summary.d, summary.epsilon)
        checks.append(
            VerifyCheck(
                "size_bound",
                summary.size() <= size_limit,
                f"size={summary.size()} limit={size_limit}",
            )
        )
        peak = summary.peak_memory if summary.peak_memory is not None else 0
        checks.append(
            VerifyCheck(
                "peak_memory_bound", peak <= size_limit, f"peak={peak} limit={size_limit}"
            )
        )
        if summary.counters.get("arrivals") == instance.n:
            singles = [instance.objective.value((e,)) for e in range(instance.n)]
            delta, top = compute_delta(singles, summary.d)
            checks.append(
                VerifyCheck(
                    "anchor_value",
                    delta == summary.delta and sorted(top) == sorted(summary.top_buffer),
                    f"expected delta={delta!r}",
                )
            )

    # insertion gains must sit in their threshold band and below the anchor
    bracket_ok = True
    detail = ""
    top_exp = summary.exponents[0] if summary.exponents else None
    for entry in summary.entries:
        tau = ladder.power(entry.exponent)
        if entry.gain < tau:
            bracket_ok, detail = False, f"element {entry.element} gain below its threshold"
            break
        if entry.gain > summary.delta + 1e-9:
            bracket_ok, detail = False, f"element {entry.element} gain above the anchor"
            break
        if summary.mode == "centralized" and top_exp is not None and entry.exponent < top_exp:
            if entry.gain > ladder.power(entry.exponent + 1) + 1e-9:
                bracket_ok, detail = False, f"element {entry.element} gain above its band"
                break
        if summary.mode == "streaming":
            if entry.gain > ladder.power(entry.exponent + 1):
                bracket_ok, detail = False, f"element {entry.element} gain above its band"
                break
    checks.append(VerifyCheck("gain_brackets", bracket_ok, detail))
    return checks


def verify_summary(
    summary: Summary,
    instance: Instance,
    deletion_trials: int = 50,
    deletion_seed: int = 0,
) -> VerifyReport:
    """Re-check a (possibly re-read) summary against its instance.

    For streaming summaries carrying an audit trail, the weight-function
    inequalities are re-evaluated for the empty deletion and a seeded batch
    of random deletion sets.
    """
    checks = structural_checks(summary, instance)
    if summary.mode == "streaming" and summary.audit is not None:
        rng = np.random.default_rng(deletion_seed)
        deletion_sets: list[list[int]] = [[]]
        if summary.d > 0 and instance.n >= summary.d:
            for _ in range(deletion_trials):
                picks = rng.choice(instance.n, size=summary.d, replace=False)
                deletion_sets.append(sorted(int(e) for e in picks))
        for idx, removed in enumerate(deletion_sets):
            report = check_weight_properties(summary, instance.objective, removed)
            for check in report.failures():
                checks.append(
                    VerifyCheck(
                        f"weights_{check.name}",
                        False,
                        f"deletion set #{idx} {removed}: {check.lhs!r} > {check.rhs!r}",
                    )
                )
        if not any(c.name.startswith("weights_") for c in checks):
            checks.append(VerifyCheck("weights_all", True, f"{len(deletion_sets)} deletion sets"))
    return VerifyReport(tuple(checks))


# ---------------------------------------------------------------------------
# experiment configuration


@dataclass(frozen=True)
class ExperimentConfig:
    out_dir: str
    mode: str = "centralized"
    epsilon: float = 0.1
    d: int = 0
    monotone: bool = False
    gamma: float | None = None
    sample_prob: float | None = None
    bucket_mode: str = "literal"
    drain_order: str = "highest"
    order: str = "shuffle"  # streaming arrival order: identity | shuffle
    instance_file: str | None = None
    gen_spec: str | None = None
    gen_matroid: str | None = None
    gen_seed: int = 0
    solver: str = "greedy"
    exhaustive_cap: int = 22
    ls_improve: float = 0.01
    ls_max_moves: int = 10_000
    strategies: tuple[str, ...] = ()
    opt_method: str = "exhaustive"
    trials: int = 1
    seed_base: int = 0
    bound_check: bool = True
    slack: float = 0.05
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trial count must be at least 1")
        if self.mode not in ("centralized", "streaming"):
            raise ValueError("mode must be centralized or streaming")
        if not self.strategies:
            raise ValueError("at least one deletion strategy is required")
        if (self.instance_file is None) == (self.gen_spec is None):
            raise ValueError("configure exactly one of instance_file / gen_spec")


def load_experiment_config(path) -> ExperimentConfig:
    """Read the sectioned key=value experiment configuration file."""
    parser = configparser.ConfigParser()
    parser.read_string(Path(path).read_text())

    def get(section, option, fallback=None):
        return parser.get(section, option, fallback=fallback)

    strategies = tuple(
        s.strip() for s in get("deletions", "strategies", "").split(",") if s.strip()
    )
    gamma = get("algorithm", "gamma")
    sample_prob = get("algorithm", "p")
    return ExperimentConfig(
        out_dir=get("report", "out_dir", "runs/experiment"),
        mode=get("algorithm", "mode", "centralized"),
        epsilon=float(get("algorithm", "epsilon", "0.1")),
        d=int(get("algorithm", "d", "0")),
        monotone=parser.getboolean("algorithm", "monotone", fallback=False),
        gamma=float(gamma) if gamma else None,
        sample_prob=float(sample_prob) if sample_prob else None,
        bucket_mode=get("algorithm", "bucket_mode", "literal"),
        drain_order=get("algorithm", "drain_order", "highest"),
        order=get("algorithm", "order", "shuffle"),
        instance_file=get("instance", "file"),
        gen_spec=get("instance", "generator"),
        gen_matroid=get("instance", "matroid"),
        gen_seed=int(get("instance", "gen_seed", "0")),
        solver=get("phase2", "solver", "greedy"),
        exhaustive_cap=int(get("phase2", "exhaustive_cap", "22")),
        ls_improve=float(get("phase2", "ls_improve", "0.01")),
        ls_max_moves=int(get("phase2", "ls_max_moves", "10000")),
        strategies=strategies,
        opt_method=get("deletions", "opt_method", "exhaustive"),
        trials=int(get("trials", "count", "1")),
        seed_base=int(get("trials", "seed_base", "0")),
        bound_check=parser.getboolean("report", "bound_check", fallback=True),
        slack=float(get("report", "slack", "0.05")),
        threads=int(get("trials", "threads", "1")),
    )


# ---------------------------------------------------------------------------
# the runner


@dataclass(frozen=True)
class TrialRow:
    strategy: str
    seed: int
    f_s: float
    f_a_prime: float
    opt: float
    method: str
    summary_size: int
    peak_mem: int | None
    oracle_calls: int
    invariants_ok: bool


@dataclass(frozen=True)
class StrategyResult:
    spec: str
    deleted: tuple[int, ...]
    opt: float
    method: str
    mean_f_s: float
    min_f_s: float
    sem: float
    hoeffding: float
    ratio: float | None  # None marks a vacuous (opt == 0) row, never divided
    bound: float | None
    bound_ok: bool | None


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list[TrialRow] = field(default_factory=list)
    strategies: list[StrategyResult] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    csv_path: Path | None = None
    text_path: Path | None = None

    @property
    def all_invariants_ok(self) -> bool:
        return all(row.invariants_ok for row in self.rows)

    @property
    def all_bounds_ok(self) -> bool:
        return all(s.bound_ok in (True, None) for s in self.strategies)


def _effective_threads(requested: int) -> int:
    capped = requested
    env = os.environ.get(THREAD_ENV)
    if env:
        capped = min(capped, max(1, int(env)))
    return max(1, capped)


def _load_instance(config: ExperimentConfig) -> Instance:
    if config.instance_file is not None:
        return read_instance(config.instance_file)
    return generate_instance(config.gen_spec, matroid=config.gen_matroid, seed=config.gen_seed)


def _phase_one(config: ExperimentConfig, instance: Instance, seed: int) -> tuple[Summary, int]:
    objective = instance.objective.clone()
    if config.mode == "centralized":
        summary = build_summary(
            objective,
            instance.matroid,
            CentralizedConfig(
                epsilon=config.epsilon,
                d=config.d,
                monotone_mode=config.monotone,
                seed=seed,
                bucket_mode=config.bucket_mode,
            ),
        )
    else:
        if config.order == "identity":
            order = list(range(instance.n))
        else:
            order = [int(e) for e in np.random.default_rng([seed, 1]).permutation(instance.n)]
        summary = stream_summary(
            objective,
            instance.matroid,
            StreamingConfig(
                epsilon=config.epsilon,
                d=config.d,
                monotone_mode=config.monotone,
                gamma=config.gamma,
                sample_prob=config.sample_prob,
                seed=seed,
                drain_order=config.drain_order,
            ),
            order,
        )
    return summary, objective.queries


def run_experiment(
    config: ExperimentConfig, instance: Instance | None = None
) -> ExperimentReport:
    """Execute the full pipeline and write results.csv plus report.txt.

    ``instance`` overrides the configured source (a testing hook).  If a
    trial fails, the rows completed so far are flushed to
    ``results.partial.csv`` before the error propagates.
    """
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if instance is None:
        instance = _load_instance(config)
    write_instance(instance, out_dir / "instance.txt")

    solver = SolverKind(
        config.solver,
        exhaustive_cap=config.exhaustive_cap,
        ls_improve=config.ls_improve,
        ls_max_moves=config.ls_max_moves,
    )
    strategies = [parse_strategy(spec) for spec in config.strategies]
    deletion_sets = {
        s.spec: tuple(choose_deletions(instance, s, exhaustive_cap=config.exhaustive_cap))
        for s in strategies
    }
    opt_oracle = instance.objective.clone()
    opts = {
        spec: opt_value(
            opt_oracle, instance.matroid, removed, method=config.opt_method,
            cap=config.exhaustive_cap,
        )
        for spec, removed in deletion_sets.items()
    }

    warnings = bound_warnings(config.mode, config.epsilon, gamma=config.gamma)
    bound: float | None = None
    if solver.beta is not None:
        try:
            bound = theoretical_bound(
                config.mode, config.monotone, solver.beta, config.epsilon, gamma=config.gamma
            )
        except ValueError as exc:
            warnings.append(f"bound formula unavailable: {exc}")

    def run_trial(seed: int) -> list[TrialRow]:
        summary, phase1_queries = _phase_one(config, instance, seed)
        base_ok = all(c.ok for c in structural_checks(summary, instance))
        rows = []
        for strategy in strategies:
            spec = strategy.spec
            removed = deletion_sets[spec]
            objective = instance.objective.clone()
            solution = solve_after_deletions(
                summary, removed, objective, instance.matroid, solver
            )
            ok = base_ok
            if config.mode == "streaming" and summary.audit is not None:
                ok = ok and check_weight_properties(
                    summary, instance.objective.clone(), removed
                ).all_ok
            rows.append(
                TrialRow(
                    strategy=spec,
                    seed=seed,
                    f_s=solution.value,
                    f_a_prime=solution.a_prime_value,
                    opt=opts[spec],
                    method=config.opt_method,
                    summary_size=summary.size(),
                    peak_mem=summary.peak_memory,
                    oracle_calls=phase1_queries + objective.queries,
                    invariants_ok=ok,
                )
            )
        return rows

    seeds = [config.seed_base + i for i in range(config.trials)]
    threads = _effective_threads(config.threads)
    completed: dict[int, list[TrialRow]] = {}
    try:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = {seed: pool.submit(run_trial, seed) for seed in seeds}
                for seed, future in futures.items():
                    completed[seed] = future.result()
        else:
            for seed in seeds:
                completed[seed] = run_trial(seed)
    except Exception:
        _flush_partial(out_dir, strategies, completed)
        raise

    # keyed reduction in fixed order: strategy first, then seed
    by_strategy: dict[str, list[TrialRow]] = {s.spec: [] for s in strategies}
    for rows in completed.values():
        for row in rows:
            by_strategy[row.strategy].append(row)
    ordered_rows: list[TrialRow] = []
    results: list[StrategyResult] = []
    for strategy in strategies:
        spec = strategy.spec
        rows = sorted(by_strategy[spec], key=lambda r: r.seed)
        ordered_rows.extend(rows)
        values = [r.f_s for r in rows]
        mean = sum(values) / len(values)
        spread = max(values) - min(values)
        sem = (
            math.sqrt(sum((v - mean) ** 2 for v in values) / (len(values) - 1) / len(values))
            if len(values) > 1
            else 0.0
        )
        hoeffding = spread * math.sqrt(math.log(2.0 / 0.05) / (2.0 * len(values)))
        opt = opts[spec]
        if opt <= 0.0:
            ratio = None  # vacuous: nothing to be competitive against
        else:
            ratio = opt / mean if mean > 0.0 else math.inf
        bound_ok: bool | None = None
        if config.bound_check and bound is not None and opt > 0.0:
            bound_ok = opt <= bound * mean * (1.0 + config.slack)
        results.append(
            StrategyResult(
                spec=spec,
                deleted=deletion_sets[spec],
                opt=opt,
                method=config.opt_method,
                mean_f_s=mean,
                min_f_s=min(values),
                sem=sem,
                hoeffding=hoeffding,
                ratio=ratio,
                bound=bound,
                bound_ok=bound_ok,
            )
        )

    report = ExperimentReport(
        config=config, rows=ordered_rows, strategies=results, warnings=warnings
    )
    ratio_by_strategy = {s.spec: s.ratio for s in results}
    report.csv_path = out_dir / "results.csv"
    report.csv_path.write_text(_format_csv(ordered_rows, ratio_by_strategy))
    report.text_path = out_dir / "report.txt"
    report.text_path.write_text(_format_report(report))
    return report


def _flush_partial(out_dir: Path, strategies, completed: dict[int, list[TrialRow]]) -> None:
    rows: list[TrialRow] = []
    for spec in (s.spec for s in strategies):
        for seed in sorted(completed):
            rows.extend(r for r in completed[seed] if r.strategy == spec)
    ratios = {s.spec: "partial" for s in strategies}
    (out_dir / "results.partial.csv").write_text(_format_csv(rows, ratios))


def _format_csv(rows: list[TrialRow], ratios: dict) -> str:
    lines = [CSV_HEADER, CSV_COLUMNS]
    for row in rows:
        ratio = ratios[row.strategy]
        if isinstance(ratio, str):
            ratio_text = ratio
        else:
            ratio_text = "vacuous" if ratio is None else repr(ratio)
        peak = "" if row.peak_mem is None else str(row.peak_mem)
        lines.append(
            f"{row.strategy},{row.seed},{row.f_s!r},{row.f_a_prime!r},{row.opt!r},"
            f"{row.method},{ratio_text},{row.summary_size},{peak},"
            f"{row.oracle_calls},{int(row.invariants_ok)}"
        )
    return "\n".join(lines) + "\n"


def _format_report(report: ExperimentReport) -> str:
    config = report.config
    lines = ["# robust-summary experiment report v1", ""]
    lines.append(f"mode={config.mode} epsilon={config.epsilon!r} d={config.d} "
                 f"monotone={int(config.monotone)} solver={config.solver} "
                 f"trials={config.trials} seed_base={config.seed_base}")
    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    lines.append("")
    for s in report.strategies:
        lines.append(f"strategy {s.spec}")
        lines.append(f"  deleted={list(s.deleted)}")
        lines.append(f"  opt[{s.method}]={s.opt!r}")
        lines.append(
            f"  mean_fS={s.mean_f_s!r} min_fS={s.min_f_s!r} sem={s.sem!r} "
            f"hoeffding={s.hoeffding!r}"
        )
        lines.append(
            "  ratio=" + ("vacuous" if s.ratio is None else repr(s.ratio))
        )
        if s.bound is not None:
            verdict = "n/a" if s.bound_ok is None else ("ok" if s.bound_ok else "VIOLATED")
            lines.append(f"  bound={s.bound!r} check={verdict}")
        else:
            lines.append("  bound=n/a (solver carries no proven factor)")
        lines.append("")
    lines.append(
        "invariants: " + ("all ok" if report.all_invariants_ok else "VIOLATIONS PRESENT")
    )
    return "\n".join(lines) + "\n"
