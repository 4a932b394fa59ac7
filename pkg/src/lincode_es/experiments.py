"""Multi-run campaigns: success rates, evaluation counts, diversity traces, classes."""

from __future__ import annotations

import csv
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable

import numpy as np

from . import __version__
from .codes import LinearCode, ProblemInstance, check_instance, min_distance_bruteforce
from .equivalence import DEFAULT_EFFORT_CAP, CodeProfile, compare_profiles, partition_classes
from .es import (
    COMMA,
    DEFAULT_GENERATIONS,
    DEFAULT_TRACE_EVERY,
    PLUS,
    EsConfig,
    RunResult,
    diversity_snapshot,
    run,
)
from .gf2 import GeneratorMatrix, format_matrix, read_matrix
from .stats import MannWhitneyResult, mann_whitney_u

__all__ = [
    "ALL_VARIANTS",
    "Campaign",
    "BatchResult",
    "CellResult",
    "derive_seed",
    "diversity_snapshot",
    "mann_whitney_u",
    "run_campaign",
]

# label -> (replacement, crossover); the position is part of the seed derivation
ALL_VARIANTS = {
    "comma": (COMMA, False),
    "comma+xo": (COMMA, True),
    "plus": (PLUS, False),
    "plus+xo": (PLUS, True),
}
_VARIANT_INDEX = {label: i for i, label in enumerate(ALL_VARIANTS)}

SEED_RULE = (
    "run seed = first 64 bits of numpy SeedSequence(entropy=master_seed, "
    "spawn_key=(n, k, d, variant_index, run_index)); variant_index in "
    "comma, comma+xo, plus, plus+xo order"
)
EVALUATION_CONVENTION = (
    "one evaluation per individual created, including the lambda initial ones; "
    "evaluations_to_success is the ordinal of the first optimal evaluation; "
    "evaluations_used is that ordinal for successes and lambda + generations * "
    "offspring_per_generation for failures"
)


def derive_seed(master_seed: int, inst: ProblemInstance, variant: str, run_index: int) -> int:
    ss = np.random.SeedSequence(
        master_seed, spawn_key=(inst.n, inst.k, inst.d, _VARIANT_INDEX[variant], run_index)
    )
    lo, hi = ss.generate_state(2, np.uint32)
    return int(hi) << 32 | int(lo)


@dataclass(frozen=True)
class Campaign:
    instances: tuple[ProblemInstance, ...]
    variants: tuple[str, ...] = tuple(ALL_VARIANTS)
    runs_per_cell: int = 30
    master_seed: int = 0
    budget: int = DEFAULT_GENERATIONS
    diversity_every: int = DEFAULT_TRACE_EVERY
    trace: bool = False
    equivalence: bool = False
    effort_cap: int = DEFAULT_EFFORT_CAP
    references: dict[str, str] = field(default_factory=dict)  # "n,k,d" -> matrix path

    def __post_init__(self) -> None:
        if self.runs_per_cell < 1:
            raise ValueError("runs_per_cell must be >= 1")
        if self.diversity_every < 1:
            raise ValueError("diversity_every must be >= 1")
        for v in self.variants:
            if v not in ALL_VARIANTS:
                raise ValueError(f"unknown variant {v!r}; choose from {list(ALL_VARIANTS)}")
        for inst in self.instances:
            check_instance(inst)

    @classmethod
    def from_json(cls, doc: dict | str | Path) -> "Campaign":
        """Build from the JSON config: instances, variants, runs, seed, budget, diversity_every."""
        if not isinstance(doc, dict):
            doc = json.loads(Path(doc).read_text())
        known = {
            "instances", "variants", "runs", "seed", "budget", "diversity_every",
            "trace", "equivalence", "effort_cap", "references",
        }
        extra = set(doc) - known
        if extra:
            raise ValueError(f"unknown campaign fields: {sorted(extra)}")
        instances = tuple(ProblemInstance(int(i["n"]), int(i["k"]), int(i["d"])) for i in doc["instances"])
        return cls(
            instances=instances,
            variants=tuple(doc.get("variants", ALL_VARIANTS)),
            runs_per_cell=int(doc.get("runs", 30)),
            master_seed=int(doc.get("seed", 0)),
            budget=int(doc.get("budget", DEFAULT_GENERATIONS)),
            diversity_every=int(doc.get("diversity_every", DEFAULT_TRACE_EVERY)),
            trace=bool(doc.get("trace", False)),
            equivalence=bool(doc.get("equivalence", False)),
            effort_cap=int(doc.get("effort_cap", DEFAULT_EFFORT_CAP)),
            references=dict(doc.get("references", {})),
        )

    def config(self, inst: ProblemInstance, variant: str, run_index: int) -> EsConfig:
        replacement, xo = ALL_VARIANTS[variant]
        return EsConfig.defaults(
            inst,
            variant=replacement,
            use_crossover=xo,
            max_generations=self.budget,
            seed=derive_seed(self.master_seed, inst, variant, run_index),
            trace_every=self.diversity_every if self.trace else None,
        )


def evaluations_used(res: RunResult) -> int:
    if res.evaluations_to_success is not None:
        return res.evaluations_to_success
    cfg = res.config
    per_gen = cfg.lam if cfg.variant == COMMA else cfg.lam - cfg.mu
    return cfg.lam + cfg.max_generations * per_gen


@dataclass
class CellResult:
    instance: ProblemInstance
    variant: str
    runs: list[RunResult]
    classes: list[list[int]] | None = None  # indices into successes()
    undecided_pairs: int = 0
    non_equivalent_to_reference: int | None = None
    undecided_against_reference: int = 0

    @property
    def success_count(self) -> int:
        return sum(r.success for r in self.runs)

    def successes(self) -> list[RunResult]:
        return [r for r in self.runs if r.success]

    @property
    def evaluation_counts(self) -> list[int]:
        return [evaluations_used(r) for r in self.runs]

    def summary(self) -> dict:
        ev = self.evaluation_counts
        q = np.quantile(ev, [0.0, 0.25, 0.5, 0.75, 1.0]).tolist() if ev else []
        out = {
            "instance": [self.instance.n, self.instance.k, self.instance.d],
            "variant": self.variant,
            "runs": len(self.runs),
            "success_count": self.success_count,
            "success_rate": self.success_count / len(self.runs),
            "evaluations_used": ev,
            "evaluations_quantiles": dict(zip(["min", "q1", "median", "q3", "max"], q)),
            "success_evaluations_median": (
                statistics.median(r.evaluations_to_success for r in self.successes())
                if self.success_count
                else None
            ),
            "seeds": [r.config.seed for r in self.runs],
        }
        if self.classes is not None:
            out["equivalence_classes"] = len(self.classes)
            out["class_sizes"] = [len(c) for c in self.classes]
            out["undecided_pairs"] = self.undecided_pairs
        if self.non_equivalent_to_reference is not None:
            out["non_equivalent_to_reference"] = self.non_equivalent_to_reference
            out["undecided_against_reference"] = self.undecided_against_reference
        if self.runs and self.runs[0].diversity_trace:
            final = [r.diversity_trace[-1] for r in self.runs]
            first = [r.diversity_trace[0] for r in self.runs]
            out["diversity"] = {
                "initial_avg_distance_mean": statistics.fmean(s.avg_pairwise_distance for s in first),
                "final_avg_distance_mean": statistics.fmean(s.avg_pairwise_distance for s in final),
                "final_avg_fitness_mean": statistics.fmean(s.avg_fitness for s in final),
            }
        return out


@dataclass
class BatchResult:
    campaign: Campaign
    cells: dict[tuple[ProblemInstance, str], CellResult]
    comparisons: list[dict] = field(default_factory=list)

    def cell(self, inst: ProblemInstance, variant: str) -> CellResult:
        return self.cells[(inst, variant)]

    def summary(self) -> dict:
        c = self.campaign
        return {
            "metadata": {
                "package_version": __version__,
                "master_seed": c.master_seed,
                "runs_per_cell": c.runs_per_cell,
                "budget_generations": c.budget,
                "diversity_every": c.diversity_every if c.trace else None,
                "seed_rule": SEED_RULE,
                "evaluation_convention": EVALUATION_CONVENTION,
                "mann_whitney": "two-sided; exact below 8 per sample, else normal with tie and continuity correction",
            },
            "cells": [cell.summary() for cell in self.cells.values()],
            "comparisons": self.comparisons,
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"

    def write(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "summary.json").write_text(self.summary_json())
        for (inst, variant), cell in self.cells.items():
            stem = f"{inst.n}_{inst.k}_{inst.d}_{variant}"
            with open(out / f"runs_{stem}.csv", "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(
                    ["run", "seed", "success", "evaluations_to_success", "evaluations_used",
                     "generations", "best_fitness"]
                )
                for i, r in enumerate(cell.runs):
                    w.writerow(
                        [i, r.config.seed, int(r.success), r.evaluations_to_success or "",
                         evaluations_used(r), r.generations_used, r.best.fitness]
                    )
            for i, r in enumerate(cell.runs):
                (out / f"{stem}_{i}.txt").write_text(format_matrix(r.best.genotype))
                if r.diversity_trace:
                    write_trace(out / f"trace_{stem}_{i}.csv", r)


def write_trace(path: str | Path, res: RunResult) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["generation", "best_fitness", "avg_fitness", "avg_pairwise_distance", "evaluations"])
        for s in res.diversity_trace:
            w.writerow([s.generation, s.best_fitness, repr(s.avg_fitness),
                        repr(s.avg_pairwise_distance), s.evaluations])


def _run_job(cfg: EsConfig) -> RunResult:
    return run(cfg)


def verify_success(res: RunResult) -> None:
    inst = res.config.instance
    d = min_distance_bruteforce(LinearCode.from_generator(res.best.genotype))
    if d < inst.d:
        raise AssertionError(f"run reported success but the code has d={d} < {inst.d}")


def _reference_key(inst: ProblemInstance) -> str:
    return f"{inst.n},{inst.k},{inst.d}"


def run_campaign(c: Campaign, workers: int = 1, progress=None) -> BatchResult:
    """Run every (instance, variant, run) cell and aggregate.

    Runs are independent and keyed by index, so ``workers`` never changes
    the result.
    """
    jobs = [
        (inst, variant, i, c.config(inst, variant, i))
        for inst in c.instances
        for variant in c.variants
        for i in range(c.runs_per_cell)
    ]
    configs = [cfg for *_, cfg in jobs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, configs, chunksize=1))
    else:
        results = []
        for cfg in configs:
            results.append(run(cfg))
            if progress is not None:
                progress(results[-1])
    cells: dict[tuple[ProblemInstance, str], CellResult] = {}
    for (inst, variant, _, _), res in zip(jobs, results):
        if res.success:
            verify_success(res)
        cells.setdefault((inst, variant), CellResult(inst, variant, [])).runs.append(res)

    if c.equivalence:
        for cell in cells.values():
            classify_cell(cell, c)

    batch = BatchResult(c, cells)
    batch.comparisons = compare_variants(batch)
    return batch


def classify_cell(cell: CellResult, c: Campaign) -> None:
    codes = [r.best.genotype for r in cell.successes()]
    part = partition_classes(codes, c.effort_cap)
    cell.classes = part.classes
    cell.undecided_pairs = len(part.undecided)
    ref_path = c.references.get(_reference_key(cell.instance))
    if ref_path is not None:
        ref = CodeProfile(read_matrix(ref_path))
        non_eq = undecided = 0
        for g in codes:
            report = compare_profiles(ref, CodeProfile(g), c.effort_cap)
            non_eq += report.status == "inequivalent"
            undecided += report.undecided
        cell.non_equivalent_to_reference = non_eq
        cell.undecided_against_reference = undecided


def compare_variants(batch: BatchResult) -> list[dict]:
    """Pairwise Mann-Whitney tests on evaluations used, per instance."""
    out = []
    for inst in batch.campaign.instances:
        labels = [v for v in batch.campaign.variants if (inst, v) in batch.cells]
        for va, vb in combinations(labels, 2):
            res: MannWhitneyResult = mann_whitney_u(
                batch.cells[(inst, va)].evaluation_counts, batch.cells[(inst, vb)].evaluation_counts
            )
            out.append(
                {
                    "instance": [inst.n, inst.k, inst.d],
                    "a": va,
                    "b": vb,
                    "u": res.u,
                    "p": res.p,
                    "method": res.method,
                    "significant_at_0.05": res.p < 0.05,
                }
            )
    return out


def success_codes(results: Iterable[RunResult]) -> list[GeneratorMatrix]:
    return [r.best.genotype for r in results if r.success]
