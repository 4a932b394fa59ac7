"""Command-line interface.

Structured results go to stdout as ``key=value`` lines; human-readable notes
go to stderr. Exit status: 0 when the operation completed, 2 for bad input
(malformed files, invalid instances, bad arguments), 3 when an equivalence
test hit its effort cap without a decision.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .codes import (
    FitnessEvaluator,
    InstanceError,
    LinearCode,
    ProblemInstance,
    check_instance,
    min_distance_anf,
    min_distance_bruteforce,
    optimal_fitness,
)
from .equivalence import DEFAULT_EFFORT_CAP, is_equivalent
from .es import DEFAULT_GENERATIONS, DEFAULT_TRACE_EVERY, EsConfig, run
from .experiments import EVALUATION_CONVENTION, Campaign, run_campaign, write_trace
from .gf2 import BinMatrix, MatrixFormatError, rank, read_matrix, rref, write_matrix
from .stats import mann_whitney_u

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNDECIDED = 3


class InputError(Exception):
    pass


def _emit(**pairs) -> None:
    for k, v in pairs.items():
        if isinstance(v, bool):
            v = str(v).lower()
        print(f"{k}={v}")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load(path: str, full_rank: bool = True) -> BinMatrix:
    try:
        return read_matrix(path, full_rank=full_rank)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except MatrixFormatError as exc:
        raise InputError(f"{path}: {exc}") from exc


def cmd_evolve(args) -> int:
    inst = ProblemInstance(args.n, args.k, args.d)
    check_instance(inst)
    cfg = EsConfig.defaults(
        inst,
        variant=args.variant,
        use_crossover=args.crossover,
        lam=args.lam,
        mu=args.mu,
        p_mut=args.pmut,
        max_generations=args.max_gens,
        seed=args.seed,
        trace_every=args.trace_every if args.trace else None,
    )
    res = run(cfg)
    _emit(
        success=res.success,
        evaluations=res.evaluations,
        evaluations_to_success=res.evaluations_to_success if res.success else "",
        generations=res.generations_used,
        best_fitness=res.best.fitness,
        optimal_fitness=optimal_fitness(inst),
        lam=cfg.lam,
        mu=cfg.mu,
        p_mut=cfg.p_mut,
        seed=cfg.seed,
    )
    best = res.best.genotype
    if args.out:
        write_matrix(args.out, best)
    else:
        for row in best.to_strings():
            _emit(row=row)
    if args.trace:
        write_trace(args.trace, res)
    _note(
        f"{cfg.label} on {inst}: {'optimum found' if res.success else 'no optimum'}"
        f" after {res.evaluations} evaluations ({EVALUATION_CONVENTION.split(';')[0]})"
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    m = _load(args.matrix, full_rank=False)
    r = rank(m)
    basis = rref(m)
    code = LinearCode.from_generator(basis)
    if r == 0:
        raise InputError("zero matrix spans the trivial code; minimum distance undefined")
    d_anf = min_distance_anf(code)
    d_brute = min_distance_bruteforce(code)
    _emit(n=m.n, k=m.k, rank=r, d_anf=d_anf, d_bruteforce=d_brute, agree=d_anf == d_brute)
    if args.d is not None:
        inst = ProblemInstance(m.n, r, args.d)
        check_instance(inst)
        fit = FitnessEvaluator(inst)(basis.rows)
        _emit(fitness=fit, optimal_fitness=optimal_fitness(inst), meets_target=d_brute >= args.d)
    verdict = "agree" if d_anf == d_brute else "DISAGREE"
    _note(f"d={d_anf} (ANF) / d={d_brute} (brute force): {verdict}")
    if r < m.k:
        _note(f"warning: rank {r} < {m.k} rows; reporting the spanned {r}-dimensional code")
    return EXIT_OK


def cmd_equiv(args) -> int:
    a, b = _load(args.a), _load(args.b)
    if (a.n, a.k) != (b.n, b.k):
        raise InputError(f"codes differ in (n, k): ({a.n}, {a.k}) vs ({b.n}, {b.k})")
    report = is_equivalent(a, b, args.cap)
    _emit(result=report.status, pruned_by=report.pruned_by or "", nodes=report.nodes)
    if report.equivalent:
        _emit(witness=" ".join(map(str, report.witness.one_based())))
        _note("equivalent; witness lists the image of coordinates 1..n")
    elif report.undecided:
        _note(f"undecided: effort cap of {args.cap} search nodes exhausted")
        return EXIT_UNDECIDED
    return EXIT_OK


def cmd_campaign(args) -> int:
    try:
        campaign = Campaign.from_json(args.config)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InputError(f"{args.config}: {exc}") from exc

    def progress(res):
        _note(f"  {res.config.instance} {res.config.label} seed={res.config.seed}: "
              f"{'ok' if res.success else 'fail'}")

    batch = run_campaign(campaign, workers=args.workers, progress=progress if args.verbose else None)
    batch.write(args.out)
    for cell in batch.cells.values():
        _emit(cell=f"{cell.instance.n},{cell.instance.k},{cell.instance.d},{cell.variant}",
              successes=f"{cell.success_count}/{len(cell.runs)}")
    _emit(summary=Path(args.out) / "summary.json")
    return EXIT_OK


def _read_column(path: str, column: str) -> list[float]:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or column not in reader.fieldnames:
                raise InputError(f"{path}: no column {column!r}")
            return [float(row[column]) for row in reader if row[column] != ""]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: non-numeric value in {column!r}") from exc


def cmd_stats(args) -> int:
    a = _read_column(args.a, args.column)
    b = _read_column(args.b, args.column)
    if not a or not b:
        raise InputError("both samples need at least one value")
    res = mann_whitney_u(a, b)
    _emit(u=res.u, p=res.p, method=res.method, n_a=len(a), n_b=len(b))
    if res.degenerate:
        _note("all values identical: p set to 1")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lincode-es", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("evolve", help="run one ES and write the best generator matrix")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--variant", choices=["comma", "plus"], required=True)
    e.add_argument("--crossover", action="store_true")
    e.add_argument("--lambda", dest="lam", type=int, help="population size (default n)")
    e.add_argument("--mu", type=int, help="parents per generation (default n // 3)")
    e.add_argument("--pmut", type=float, help="per-row mutation probability (default 1/n)")
    e.add_argument("--max-gens", type=int, default=DEFAULT_GENERATIONS)
    e.add_argument("--seed", type=int, required=True)
    e.add_argument("--out", help="write the best matrix here")
    e.add_argument("--trace", help="CSV diversity trace; a traced run uses the full budget")
    e.add_argument("--trace-every", type=int, default=DEFAULT_TRACE_EVERY)
    e.set_defaults(func=cmd_evolve)

    v = sub.add_parser("verify", help="minimum distance via the ANF and by brute force")
    v.add_argument("--matrix", required=True)
    v.add_argument("--d", type=int)
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("equiv", help="permutation equivalence of two codes")
    q.add_argument("--a", required=True)
    q.add_argument("--b", required=True)
    q.add_argument("--cap", type=int, default=DEFAULT_EFFORT_CAP, help="search node budget")
    q.set_defaults(func=cmd_equiv)

    c = sub.add_parser("campaign", help="batch of runs from a JSON config")
    c.add_argument("--config", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--verbose", action="store_true")
    c.set_defaults(func=cmd_campaign)

    s = sub.add_parser("stats", help="Mann-Whitney U test on one CSV column")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--column", required=True)
    s.set_defaults(func=cmd_stats)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InstanceError as exc:
        _note(f"error: invalid instance {exc.instance}: {exc}")
    except (InputError, ValueError) as exc:
        _note(f"error: {exc}")
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
