"""Command-line front end: ``entropy-gap {gen,verify,markov,scan}``.

Reports are deterministic functions of the configuration: sample ``i`` is
drawn from ``seed XOR i`` and results are collected in sample order, so the
JSON (or CSV) bytes do not depend on the worker count. Wall-clock time goes
to the log unless ``--timing`` asks for it in the report.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import inequality_suites as iq
from . import markov_analysis as ma
from . import quantum_states as qs
from .batch import derive_seed, ordered_map, sample_rng, worker_count
from .errors import EntropyGapError, InvalidConfig

log = logging.getLogger("entropy_gap")

SUITES = (
    "substate",
    "norm-sandwich",
    "monotonicity",
    "bipartite",
    "cmi",
    "berta",
    "berta-general",
    "marginal-mono",
    "super-ssa",
    "sigma-substate",
    "two-marginal",
    "golden-thompson",
    "markov",
    "scan",
)
IDENTITY_SUITES = ("berta", "berta-general")
TRIPARTITE_SUITES = (
    "cmi",
    "berta",
    "berta-general",
    "marginal-mono",
    "super-ssa",
    "sigma-substate",
    "two-marginal",
    "markov",
    "scan",
)
GEN_KINDS = ("hs", "pure", "markov-classical-c")


@dataclass
class RunConfig:
    suite: str = "all"
    dims: tuple[int, ...] = (2, 2, 2)
    n_samples: int = 100
    seed: int = 0
    tol_identity: float = iq.TOL_IDENTITY
    tol_inequality: float = iq.TOL_INEQUALITY
    tol_markov: float = 1e-9
    ensemble: str = "hs"
    input_files: list[str] = field(default_factory=list)
    output: str | None = None
    format: str = "json"
    workers: int = 1

    def validate(self) -> None:
        if self.suite != "all" and self.suite not in SUITES:
            raise InvalidConfig(f"unknown suite {self.suite!r}")
        if self.n_samples < 1:
            raise InvalidConfig("n_samples must be >= 1")
        if any(d < 2 for d in self.dims):
            raise InvalidConfig("every subsystem dimension must be >= 2")
        if min(self.tol_identity, self.tol_inequality, self.tol_markov) <= 0:
            raise InvalidConfig("tolerances must be positive")
        if self.format not in ("json", "csv"):
            raise InvalidConfig(f"unknown format {self.format!r}")
        if self.ensemble not in ma.ENSEMBLES:
            raise InvalidConfig(f"unknown ensemble {self.ensemble!r}")

    def echo(self) -> dict:
        d = asdict(self)
        d["dims"] = list(self.dims)
        d.pop("workers")
        d.pop("output")
        return d


# --- per-sample evaluation ----------------------------------------------------------


def _d(cfg: RunConfig) -> int:
    return int(np.prod(cfg.dims))


def _tripartite_dims(cfg: RunConfig) -> tuple[int, int, int]:
    if len(cfg.dims) != 3:
        raise InvalidConfig(f"suite needs three subsystem dims, got {cfg.dims}")
    return cfg.dims


def _bipartite_dims(cfg: RunConfig) -> tuple[int, int]:
    if len(cfg.dims) < 2:
        raise InvalidConfig("bipartite suite needs at least two subsystem dims")
    return cfg.dims[0], _d(cfg) // cfg.dims[0]


def _first(inp, make):
    return inp if inp is not None else make()


def _run_substate(cfg, rng, inp):
    d = _d(cfg)
    rho = _first(inp, lambda: qs.random_density_hs(d, rng))
    sigma = qs.random_density_hs(rho.dim, rng)
    sub = sigma.with_matrix(0.9 * sigma.matrix, qs.SUBSTATE)
    return iq.check_substate_chain(rho, sub, cfg.tol_inequality)


def _run_norm_sandwich(cfg, rng, inp):
    d = _d(cfg)
    M = inp.matrix if inp is not None else qs.random_psd(d, rng)
    return iq.check_norm_sandwich(M, qs.random_psd(M.shape[0], rng), cfg.tol_inequality)


def _run_monotonicity(cfg, rng, inp):
    d = _d(cfg)
    rho = _first(inp, lambda: qs.random_density_hs(d, rng))
    sigma = qs.random_density_hs(rho.dim, rng)
    phi = qs.random_channel(rho.dim, rho.dim, 2, rng)
    return iq.check_monotonicity_gap(rho, sigma, phi, cfg.tol_inequality)


def _run_bipartite(cfg, rng, inp):
    dims = _bipartite_dims(cfg) if inp is None else None
    rho = _first(inp, lambda: qs.random_density_hs(dims, rng))
    if inp is not None:
        rho = iq.as_bipartite(rho, "rho_AB")
    sigma = qs.random_density_hs(rho.dims, rng)
    return iq.check_bipartite_chain(rho, sigma, cfg.tol_inequality)


def _rho3(cfg, rng, inp):
    if inp is not None:
        return inp
    return ma.draw_state(_tripartite_dims(cfg), rng, cfg.ensemble)


def _run_cmi(cfg, rng, inp):
    return iq.check_cmi_chain(_rho3(cfg, rng, inp), cfg.tol_inequality)


def _run_berta(cfg, rng, inp):
    rho = _rho3(cfg, rng, inp)
    return iq.berta_verdict(rho, qs.random_density_hs(rho.dims, rng), cfg.tol_identity)


def _run_berta_general(cfg, rng, inp):
    rho = _rho3(cfg, rng, inp)
    dA, dB, dC = rho.dims
    return iq.berta_verdict_general(
        rho,
        qs.random_density_hs((dA, dC), rng),
        qs.random_density_hs((dB, dC), rng),
        qs.random_density_hs(dC, rng),
        cfg.tol_identity,
    )


def _pair_suite(check):
    def run(cfg, rng, inp):
        rho = _rho3(cfg, rng, inp)
        return check(rho, qs.random_density_hs(rho.dims, rng), cfg.tol_inequality)

    return run


def _run_two_marginal(cfg, rng, inp):
    return iq.check_two_marginal_chain(_rho3(cfg, rng, inp), cfg.tol_inequality)


def _run_golden_thompson(cfg, rng, inp):
    d = _d(cfg)
    A = inp.matrix if inp is not None else qs.random_hermitian(d, rng)
    return iq.check_golden_thompson(A, qs.random_hermitian(A.shape[0], rng), cfg.tol_inequality)


def _run_markov(cfg, rng, inp):
    return ma.check_markov_trace_theorem(_rho3(cfg, rng, inp), cfg.tol_markov)


def _run_scan(cfg, rng, inp):
    rho = _rho3(cfg, rng, inp)
    tr = ma.trace_of_markov_operator(rho)
    return iq.make_verdict(
        "scan",
        [("one", 1.0), ("Tr M", tr)],
        cfg.tol_markov,
        metadata={"dims": list(rho.dims)},
    )


RUNNERS: dict[str, Callable] = {
    "substate": _run_substate,
    "norm-sandwich": _run_norm_sandwich,
    "monotonicity": _run_monotonicity,
    "bipartite": _run_bipartite,
    "cmi": _run_cmi,
    "berta": _run_berta,
    "berta-general": _run_berta_general,
    "marginal-mono": _pair_suite(iq.check_marginal_monotonicity),
    "super-ssa": _pair_suite(iq.check_super_ssa),
    "sigma-substate": _pair_suite(iq.check_sigma_substate_chain),
    "two-marginal": _run_two_marginal,
    "golden-thompson": _run_golden_thompson,
    "markov": _run_markov,
    "scan": _run_scan,
}


def _sample_gap(result) -> float:
    if isinstance(result, ma.MarkovReport):
        return 1.0 - result.trace_M
    return result.worst_gap


def _sample_passed(result) -> bool:
    if isinstance(result, ma.MarkovReport):
        return result.verdict != ma.INDETERMINATE and result.theorem_holds
    return result.passed


def run_sample(suite: str, cfg: RunConfig, index: int, inp=None) -> dict:
    """Evaluate one sample; library errors mark the sample failed instead of raising."""
    seed = derive_seed(cfg.seed, index)
    entry = {"index": index, "seed": seed}
    try:
        result = RUNNERS[suite](cfg, sample_rng(cfg.seed, index), inp)
    except InvalidConfig:
        raise
    except EntropyGapError as exc:
        entry.update(passed=False, reason=f"{type(exc).__name__}: {exc}", result=None)
        return entry
    entry.update(
        passed=_sample_passed(result),
        reason=None if _sample_passed(result) else _reason(result),
        gap=_sample_gap(result),
        result=result.to_dict(),
    )
    return entry


def _reason(result) -> str:
    if isinstance(result, ma.MarkovReport):
        return f"verdict {result.verdict}; " + "; ".join(result.notes)
    return "; ".join(result.reasons)


def run_suite(suite: str, cfg: RunConfig, inputs=None) -> dict:
    if suite in TRIPARTITE_SUITES and not inputs:
        _tripartite_dims(cfg)
    if suite == "bipartite" and not inputs:
        _bipartite_dims(cfg)
    items = list(enumerate(inputs)) if inputs else [(i, None) for i in range(cfg.n_samples)]
    samples = ordered_map(
        lambda item: run_sample(suite, cfg, item[0], item[1]), items, cfg.workers
    )
    passed = [s for s in samples if s["passed"]]
    gaps = [(s["gap"], s["seed"]) for s in samples if "gap" in s]
    worst_gap, worst_seed = None, None
    if gaps:
        key = (lambda t: -t[0]) if suite in IDENTITY_SUITES else (lambda t: t[0])
        worst_gap, worst_seed = min(gaps, key=key)
    failed = [s for s in samples if not s["passed"]]
    if failed:
        worst_seed = failed[0]["seed"] if worst_seed is None else worst_seed
    return {
        "suite": suite,
        "samples": samples,
        "aggregate": {
            "pass_count": len(passed),
            "fail_count": len(samples) - len(passed),
            "worst_gap": worst_gap,
            "worst_sample_seed": worst_seed,
        },
    }


def cmd_verify(cfg: RunConfig, timing: bool = False) -> tuple[dict, int]:
    cfg.validate()
    inputs = [qs.load_state(p) for p in cfg.input_files] or None
    if inputs:
        for p, s in zip(cfg.input_files, inputs):
            qs.require_valid(s, 1e-8, what=f"input {p}")
    suites = SUITES if cfg.suite == "all" else (cfg.suite,)
    t0 = time.perf_counter()
    sections = [run_suite(s, cfg, inputs) for s in suites]
    wall = time.perf_counter() - t0
    report = {"config": cfg.echo(), "suites": sections}
    if timing:
        report["wall_time"] = wall
    log.info("verify finished in %.2f s", wall)
    n_fail = sum(sec["aggregate"]["fail_count"] for sec in sections)
    return report, 0 if n_fail == 0 else 1


# --- serialization -------------------------------------------------------------------


def _flatten(prefix: str, value, out: list):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    elif isinstance(value, bool) or value is None or isinstance(value, str):
        return
    elif isinstance(value, (int, float)):
        out.append((prefix, value))


def report_rows(report: dict) -> list[tuple]:
    """Long-format rows ``(suite, sample, seed, passed, field, value)``."""
    rows = []
    for sec in report["suites"]:
        for s in sec["samples"]:
            fields: list = []
            _flatten("", {"gap": s.get("gap"), "result": s["result"]}, fields)
            for name, value in fields:
                rows.append((sec["suite"], s["index"], s["seed"], s["passed"], name, value))
    return rows


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "sample", "seed", "passed", "field", "value"])
    for row in report_rows(report):
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --- gen / markov / scan ---------------------------------------------------------------


def gen_state(kind: str, dims, rng) -> qs.MultipartiteState:
    if kind == "hs":
        return qs.random_density_hs(dims, rng)
    if kind == "pure":
        return qs.random_pure(dims, rng)
    if kind == "markov-classical-c":
        if len(dims) != 3:
            raise InvalidConfig("markov-classical-c needs three subsystem dims")
        return qs.random_markov_classical_c(dims, rng)
    raise InvalidConfig(f"unknown kind {kind!r}")


def cmd_gen(dims, n: int, seed: int, kind: str, out_dir) -> list[Path]:
    if n < 1:
        raise InvalidConfig("n must be >= 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tag = "x".join(str(d) for d in dims)
    paths = []
    for i in range(n):
        state = gen_state(kind, dims, sample_rng(seed, i))
        path = out_dir / f"{kind}_{tag}_seed{seed}_{i:04d}.json"
        qs.save_state(state, path)
        paths.append(path)
    return paths


def cmd_markov(input_file=None, dims=(2, 2, 2), seed: int = 0, ensemble: str = "hs", tol: float = 1e-9):
    """Return ``(report_dict, exit_code)`` for one state."""
    if input_file:
        rho = qs.load_state(input_file)
        qs.require_valid(rho, 1e-8, what=str(input_file))
    else:
        rho = ma.draw_state(tuple(dims), sample_rng(seed, 0), ensemble)
    rep = ma.check_markov_trace_theorem(rho, tol)
    payload = {"source": str(input_file) if input_file else {"dims": list(dims), "seed": seed, "ensemble": ensemble}}
    payload.update(rep.to_dict())
    ok = rep.verdict in (ma.MARKOV, ma.NOT_MARKOV)
    return payload, 0 if ok else 1


def cmd_scan(dims, n_samples: int, seed: int, ensemble: str = "hs", bins: int = 10, top_k: int = 3, workers: int = 1):
    return ma.scan_trace_statistic(dims, n_samples, seed, ensemble, bins, top_k, workers).to_dict()


# --- argument parsing -------------------------------------------------------------------


def _dims_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like 2,2,2, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entropy-gap", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n_default=100):
        sp.add_argument("--dims", type=_dims_arg, default=(2, 2, 2))
        sp.add_argument("--n", type=int, default=n_default, dest="n")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None)

    g = sub.add_parser("gen", help="write random states in the JSON state format")
    common(g, n_default=1)
    g.add_argument("--kind", choices=GEN_KINDS, default="hs")
    g.add_argument("--out-dir", default=None, help="alias of --out")

    v = sub.add_parser("verify", help="run verifier suites and write a report")
    common(v)
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--tol-id", type=float, default=iq.TOL_IDENTITY)
    v.add_argument("--tol-ineq", type=float, default=iq.TOL_INEQUALITY)
    v.add_argument("--tol-markov", type=float, default=1e-9)
    v.add_argument("--ensemble", choices=ma.ENSEMBLES, default="hs")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--input", nargs="+", default=[])
    v.add_argument("--workers", type=int, default=None)
    v.add_argument("--timing", action="store_true", help="include wall_time in the report")

    m = sub.add_parser("markov", help="Markov trace-criterion report for one state")
    common(m)
    m.add_argument("--input", default=None)
    m.add_argument("--ensemble", choices=ma.ENSEMBLES, default="hs")
    m.add_argument("--tol", type=float, default=1e-9)

    s = sub.add_parser("scan", help="sample Tr M over an ensemble")
    common(s, n_default=1000)
    s.add_argument("--ensemble", choices=ma.ENSEMBLES, default="hs")
    s.add_argument("--bins", type=int, default=10)
    s.add_argument("--top-k", type=int, default=3)
    s.add_argument("--workers", type=int, default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "gen":
            out = args.out_dir or args.out or "."
            paths = cmd_gen(args.dims, args.n, args.seed, args.kind, out)
            for path in paths:
                print(path)
            return 0
        if args.command == "verify":
            cfg = RunConfig(
                suite=args.suite,
                dims=args.dims,
                n_samples=args.n,
                seed=args.seed,
                tol_identity=args.tol_id,
                tol_inequality=args.tol_ineq,
                tol_markov=args.tol_markov,
                ensemble=args.ensemble,
                input_files=list(args.input),
                output=args.out,
                format=args.format,
                workers=worker_count(args.workers),
            )
            report, code = cmd_verify(cfg, timing=args.timing)
            _emit(to_csv(report) if cfg.format == "csv" else to_json(report), cfg.output)
            return code
        if args.command == "markov":
            payload, code = cmd_markov(args.input, args.dims, args.seed, args.ensemble, args.tol)
            _emit(to_json(payload), args.out)
            return code
        if args.command == "scan":
            summary = cmd_scan(
                args.dims, args.n, args.seed, args.ensemble, args.bins, args.top_k,
                worker_count(args.workers),
            )
            _emit(to_json(summary), args.out)
            return 0
    except (EntropyGapError, OSError) as exc:
        print(f"entropy-gap: error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
