"""Command-line benchmark harness.

Subcommands: ``pca`` (sparse PCA on a CSV table or the embedded pitprops
matrix), ``regress`` (sparse regression with greedy / OMP / brute-force
methods), ``verify`` (the full property suite against brute-force oracles),
and ``bench`` (synthetic timing sweeps).  Results are written as one
:class:`RunRecord` per (method, k) grid point, CSV for tables or JSON for
full traces.

Exit codes: 0 success, 2 input error, 3 budget/resource error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .apps import omp_baseline, sparse_pca_solve, sparse_regression_solve
from .data import correlation_matrix, ingest_csv, pitprops_correlation, standardize
from .exceptions import BudgetError, InputError, NumericalError
from .verify import OracleBudget, brute_force_qcqp, run_property_suite

logger = logging.getLogger(__name__)

PCA_METHODS = ("char",)
REGRESS_METHODS = ("char", "omp", "brute")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines an experiment's outputs."""

    task: str
    input_path: Optional[str] = None
    response: Optional[str] = None
    ks: Tuple[int, ...] = ()
    methods: Tuple[str, ...] = ("char",)
    nodes: Optional[int] = None
    tol: float = 1e-12
    threads: int = 1
    seed: int = 0
    optimal_path: Optional[str] = None
    sizes: Tuple[int, ...] = ()

    def config_hash(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha1(blob.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class RunRecord:
    """One solve: method, instance, certified value, and timing."""

    method: str
    dataset: str
    k: int
    value: float
    loss: Optional[float]
    time_ms: float
    support: Tuple[int, ...]
    config_hash: str
    gap: Optional[float] = None
    eta_trace: Tuple[float, ...] = field(default=())

    def to_row(self) -> Dict[str, object]:
        return {
            "method": self.method,
            "dataset": self.dataset,
            "k": self.k,
            "value": repr(self.value),
            "loss": "" if self.loss is None else repr(self.loss),
            "gap": "" if self.gap is None else repr(self.gap),
            "time_ms": repr(self.time_ms),
            "support": " ".join(str(i) for i in self.support),
            "config_hash": self.config_hash,
        }

    @staticmethod
    def from_row(row: Dict[str, str]) -> "RunRecord":
        return RunRecord(
            method=row["method"],
            dataset=row["dataset"],
            k=int(row["k"]),
            value=float(row["value"]),
            loss=float(row["loss"]) if row["loss"] else None,
            time_ms=float(row["time_ms"]),
            support=tuple(int(s) for s in row["support"].split()) if row["support"] else (),
            config_hash=row["config_hash"],
            gap=float(row["gap"]) if row["gap"] else None,
        )


CSV_COLUMNS = ["method", "dataset", "k", "value", "loss", "gap", "time_ms", "support", "config_hash"]


def parse_k_list(text: str) -> Tuple[int, ...]:
    """Parse "5,10" / "1-4" / mixtures into a sorted tuple of distinct k."""
    ks = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, _, hi = part.partition("-") if not part.startswith("-") else (None, None, None)
            if lo is None:
                raise InputError(f"bad k value {part!r}")
            try:
                lo_i, hi_i = int(lo), int(hi)
            except ValueError:
                raise InputError(f"bad k range {part!r}") from None
            if hi_i < lo_i:
                raise InputError(f"empty k range {part!r}")
            ks.update(range(lo_i, hi_i + 1))
        else:
            try:
                ks.add(int(part))
            except ValueError:
                raise InputError(f"bad k value {part!r}") from None
    if not ks:
        raise InputError("no k values given")
    if min(ks) < 1:
        raise InputError(f"k must be >= 1, got {min(ks)}")
    return tuple(sorted(ks))


def _load_pca_matrix(path: str) -> Tuple[str, np.ndarray]:
    if path == "pitprops":
        return "pitprops", pitprops_correlation()
    d = ingest_csv(path)
    d = standardize(d)
    return d.name, correlation_matrix(d.x)


def _read_optimal(path: str) -> Dict[int, float]:
    """Reference optima: two-column CSV of k, value (header optional)."""
    d = ingest_csv(path)
    table = d.x
    if table.shape[1] != 2:
        raise InputError(f"{path!r}: expected two columns (k, value)")
    return {int(k): float(v) for k, v in table}


def _solve_one(task: str, method: str, name: str, payload, k: int,
               cfg: ExperimentConfig) -> RunRecord:
    t0 = time.perf_counter()
    loss = None
    gap = None
    trace: Tuple[float, ...] = ()
    if task in ("pca", "bench"):
        rep = sparse_pca_solve(payload, k, ell=cfg.nodes, tie_atol=cfg.tol)
        value, support, trace = rep.value, rep.support, rep.eta_trace
    elif method == "char":
        a, b = payload
        rep = sparse_regression_solve(a, b, k, tie_atol=cfg.tol)
        value, support, loss, trace = rep.value, rep.support, rep.loss, rep.eta_trace
    elif method == "omp":
        a, b = payload
        rep = omp_baseline(a, b, k)
        value, support, loss, trace = rep.value, rep.support, rep.loss, rep.eta_trace
    elif method == "brute":
        a, b = payload
        g = a.T @ b
        res = brute_force_qcqp(np.outer(g, g), a.T @ a, k)
        value, support = res.value, res.support
        loss = float(b @ b) - value
    else:
        raise InputError(f"unknown method {method!r}")
    dt = (time.perf_counter() - t0) * 1e3
    return RunRecord(
        method=method,
        dataset=name,
        k=k,
        value=float(value),
        loss=loss,
        time_ms=dt,
        support=tuple(support),
        config_hash=cfg.config_hash(),
        gap=gap,
        eta_trace=trace,
    )


def run_experiment(cfg: ExperimentConfig) -> List[RunRecord]:
    """Run the (method, k) grid for one experiment config.

    Grid points run in a thread pool of ``cfg.threads`` workers; records
    come back sorted by (method, k) so reruns are comparable line by line.
    """
    if not cfg.ks and cfg.task != "bench":
        raise InputError("no k values given")
    grid: List[Tuple[str, str, object, int]] = []
    if cfg.task == "pca":
        name, a = _load_pca_matrix(cfg.input_path)
        for k in cfg.ks:
            if k > a.shape[0]:
                raise InputError(f"k={k} exceeds {a.shape[0]} features")
            grid.append(("char", name, a, k))
    elif cfg.task == "regress":
        bad = [m for m in cfg.methods if m not in REGRESS_METHODS]
        if bad:
            raise InputError(f"unknown regression method(s) {bad}")
        d = ingest_csv(cfg.input_path, response_column=cfg.response)
        if d.response is None:
            raise InputError("regress requires --response")
        payload = (d.x, d.response)
        for m in cfg.methods:
            for k in cfg.ks:
                if k > d.n_features:
                    raise InputError(f"k={k} exceeds {d.n_features} features")
                grid.append((m, d.name, payload, k))
    elif cfg.task == "bench":
        if not cfg.sizes:
            raise InputError("bench requires --sizes")
        rng = np.random.default_rng(cfg.seed)
        for n in cfg.sizes:
            g = rng.standard_normal((max(n + 1, int(1.2 * n)), n))
            c = correlation_matrix(g)
            for k in cfg.ks:
                if k > n:
                    raise InputError(f"k={k} exceeds size {n}")
                grid.append(("char", f"synthetic-n{n}", c, k))
    else:
        raise InputError(f"unknown task {cfg.task!r}")

    def work(point):
        method, name, payload, k = point
        return _solve_one(cfg.task, method, name, payload, k, cfg)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            records = list(pool.map(work, grid))
    else:
        records = [work(p) for p in grid]

    if cfg.task == "pca" and cfg.optimal_path:
        reference = _read_optimal(cfg.optimal_path)
        fixed = []
        for r in records:
            opt = reference.get(r.k)
            gap = None if opt is None or opt == 0.0 else (opt - r.value) / opt
            fixed.append(RunRecord(**{**asdict(r), "gap": gap, "eta_trace": r.eta_trace}))
        records = fixed
    records.sort(key=lambda r: (r.dataset, r.method, r.k))
    return records


def write_records(records: Sequence[RunRecord], cfg: ExperimentConfig,
                  output_dir: str, fmt: str) -> str:
    os.makedirs(output_dir, exist_ok=True)
    path = os.path.join(output_dir, f"{cfg.task}_records.{fmt}")
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for r in records:
                writer.writerow(r.to_row())
    else:
        doc = {
            "config": asdict(cfg),
            "metadata": {
                "version": __version__,
                "standardization": "column mean 0, population variance 1 (divisor n)",
            },
            "records": [
                {**r.to_row(), "value": r.value, "loss": r.loss, "gap": r.gap,
                 "time_ms": r.time_ms, "support": list(r.support),
                 "eta_trace": list(r.eta_trace)}
                for r in records
            ],
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    return path


def _print_table(records: Sequence[RunRecord]) -> None:
    header = f"{'method':<7} {'dataset':<20} {'k':>3} {'value':>12} {'loss':>12} {'gap':>10} {'ms':>8}"
    print(header)
    print("-" * len(header))
    for r in records:
        loss = f"{r.loss:.6g}" if r.loss is not None else "-"
        gap = f"{r.gap:.3g}" if r.gap is not None else "-"
        print(
            f"{r.method:<7} {r.dataset:<20} {r.k:>3} {r.value:>12.6g} "
            f"{loss:>12} {gap:>10} {r.time_ms:>8.2f}"
        )


def _parse_budget(text: str) -> OracleBudget:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise InputError("--budget expects max_n,max_k,max_subsets")
    try:
        n, k, subsets = (int(p) for p in parts)
    except ValueError:
        raise InputError(f"bad --budget {text!r}") from None
    return OracleBudget(max_n=n, max_k=k, max_subsets=subsets)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparseqcqp",
        description="Sparse QCQP solver benchmarks (greedy conditioning over principal minors).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--nodes", type=int, default=None,
                       help="interpolation nodes (default k+1)")
        p.add_argument("--tol", type=float, default=1e-12,
                       help="tie tolerance for candidate selection")
        p.add_argument("--threads", type=int, default=1, help="worker threads")
        p.add_argument("--output-dir", default=".", help="where to write records")
        p.add_argument("--format", choices=("csv", "json"), default="csv",
                       help="records file format")
        p.add_argument("--seed", type=int, default=0, help="rng seed")

    p_pca = sub.add_parser("pca", help="sparse PCA on a CSV table (or 'pitprops')")
    p_pca.add_argument("--input", required=True,
                       help="CSV of samples-by-features, or the literal 'pitprops'")
    p_pca.add_argument("--k", required=True, help="sparsity levels, e.g. 5,10 or 1-10")
    p_pca.add_argument("--optimal", default=None,
                       help="CSV of (k, optimal value) reference pairs for gap reporting")
    common(p_pca)

    p_reg = sub.add_parser("regress", help="sparse linear regression on a CSV table")
    p_reg.add_argument("--input", required=True, help="CSV of samples-by-columns")
    p_reg.add_argument("--response", required=True,
                       help="response column name or index")
    p_reg.add_argument("--k", required=True, help="sparsity levels, e.g. 1-10")
    p_reg.add_argument("--methods", default="char,omp",
                       help="comma list from {char,omp,brute}")
    common(p_reg)

    p_ver = sub.add_parser("verify", help="run the brute-force property suite")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--budget", default=None, help="max_n,max_k,max_subsets")
    p_ver.add_argument("--trials", type=int, default=12, help="instances per property")

    p_bench = sub.add_parser("bench", help="synthetic timing sweep")
    p_bench.add_argument("--sizes", required=True, help="matrix sizes, e.g. 100,200,500")
    p_bench.add_argument("--k", default="5,10", help="sparsity levels")
    common(p_bench)
    return parser


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "verify":
        budget = _parse_budget(args.budget) if args.budget else OracleBudget()
        results = run_property_suite(seed=args.seed, budget=budget, trials=args.trials)
        failed = [r for r in results if not r.passed]
        for r in results:
            mark = "ok" if r.passed else "FAIL"
            print(f"{mark:>4}  {r.name}  {r.detail}")
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
        if failed:
            raise NumericalError(f"{len(failed)} property check(s) failed")
        return 0

    if args.command == "pca":
        cfg = ExperimentConfig(
            task="pca", input_path=args.input, ks=parse_k_list(args.k),
            nodes=args.nodes, tol=args.tol, threads=args.threads,
            seed=args.seed, optimal_path=args.optimal,
        )
    elif args.command == "regress":
        methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
        cfg = ExperimentConfig(
            task="regress", input_path=args.input, response=args.response,
            ks=parse_k_list(args.k), methods=methods, nodes=args.nodes,
            tol=args.tol, threads=args.threads, seed=args.seed,
        )
    else:
        cfg = ExperimentConfig(
            task="bench", ks=parse_k_list(args.k),
            sizes=parse_k_list(args.sizes), nodes=args.nodes, tol=args.tol,
            threads=args.threads, seed=args.seed,
        )
    records = run_experiment(cfg)
    path = write_records(records, cfg, args.output_dir, args.format)
    _print_table(records)
    print(f"wrote {len(records)} record(s) to {path}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
