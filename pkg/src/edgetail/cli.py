"""Command-line front end: closed-form rates, sampling, spectra, star
decompositions, tail estimates, certificate verification, exact small-graph
oracles, typical-scale checks, and exponent reports over JSONL records.

Exit codes: 0 on success, 2 for invalid inputs, 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .errors import (ConfigError, ConvergenceError, DomainError, EdgetailError,
                     FormatError, InsufficientDataError, NotAForestError,
                     NotFoundError, OrderError, SizeError, ZeroVectorError)
from .graphs import Graph, read_graph_text, write_graph_text
from .rates import (RegimeParams, TailSpec, classify_regime, rate_deg_lower,
                    rate_deg_upper, rate_dense_upper, rate_lower_tail,
                    rate_lt_lambda1, rate_marginal_upper, rate_upper_tail)
from . import ramsey, sampler, spectral, structure, tails

SCHEMA_VERSION = 1

_VALIDATION_ERRORS = (DomainError, OrderError, SizeError, FormatError,
                      ConfigError, ZeroVectorError, NotAForestError,
                      ValueError)
_NUMERICAL_ERRORS = (ConvergenceError, InsufficientDataError, NotFoundError,
                     AssertionError)


def _parse_seed(text: str) -> int:
    # decimal or hex (0x...) master seeds
    try:
        return int(text, 0)
    except ValueError:
        raise DomainError(f"cannot parse seed {text!r}") from None


def _parse_floats(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise DomainError(f"cannot parse float list {text!r}") from None


def _resolve_p(args) -> float:
    if getattr(args, "p", None) is not None:
        return args.p
    if getattr(args, "p_over_n", None) is not None:
        if not args.n:
            raise DomainError("--p-over-n needs --n")
        return args.p_over_n / args.n
    raise DomainError("one of --p or --p-over-n is required")


def _config_hash(payload: dict) -> str:
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _emit(args, record: dict) -> None:
    line = json.dumps(record, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
    else:
        print(line)


def _load_graph(args, n: int, p: float, seed: int) -> Graph:
    if getattr(args, "graph_in", None):
        return read_graph_text(args.graph_in)
    return sampler.sample_gnp(n, p, seed)


def _make_spec(args) -> TailSpec:
    name = args.spec
    if name in ("UT", "LT"):
        offsets = _parse_floats(args.deltas) if args.deltas else None
        if not offsets:
            raise DomainError(f"--spec {name} needs --deltas")
        return TailSpec("eigenvalue", "upper" if name == "UT" else "lower",
                        offsets)
    if name in ("degUT", "degLT"):
        offsets = _parse_floats(args.eps) if args.eps else None
        if not offsets:
            raise DomainError(f"--spec {name} needs --eps")
        return TailSpec("degree", "upper" if name == "degUT" else "lower",
                        offsets)
    raise DomainError(f"unknown spec {name!r}; expected UT, LT, degUT, degLT")


def _spec_label(spec: TailSpec) -> str:
    name = {"eigenvalue": {"upper": "UT", "lower": "LT"},
            "degree": {"upper": "degUT", "lower": "degLT"}}[spec.target][spec.side]
    return name + ":" + ",".join(repr(d) for d in spec.deltas)


def _spec_from_label(label: str) -> TailSpec:
    name, _, rest = label.partition(":")
    table = {"UT": ("eigenvalue", "upper"), "LT": ("eigenvalue", "lower"),
             "degUT": ("degree", "upper"), "degLT": ("degree", "lower")}
    if name not in table:
        raise FormatError(f"unknown spec label {label!r}")
    target, side = table[name]
    return TailSpec(target, side, _parse_floats(rest))


def cmd_rates(args) -> int:
    shown = False
    if args.ut:
        print(f"ut {rate_upper_tail(_parse_floats(args.ut))}")
        shown = True
    if args.lt:
        print(f"lt {rate_lower_tail(_parse_floats(args.lt))}")
        shown = True
    if args.deg_ut:
        print(f"deg-ut {rate_deg_upper(_parse_floats(args.deg_ut))}")
        shown = True
    if args.deg_lt:
        print(f"deg-lt {rate_deg_lower(_parse_floats(args.deg_lt))}")
        shown = True
    if args.marginal:
        idx_part, _, d_part = args.marginal.partition(":")
        indices = tuple(int(x) for x in idx_part.split(","))
        print(f"marginal {rate_marginal_upper(indices, _parse_floats(d_part))}")
        shown = True
    if args.lt_lambda1:
        n_s, p_s, q_s = args.lt_lambda1.split(",")
        print(f"lt-lambda1 {rate_lt_lambda1(int(n_s), float(p_s), float(q_s))}")
        shown = True
    if not shown:
        raise DomainError("no rate requested; pass --ut/--lt/--deg-ut/"
                          "--deg-lt/--marginal/--lt-lambda1")
    return 0


def cmd_sample(args) -> int:
    p = _resolve_p(args)
    g = sampler.sample_gnp(args.n, p, args.seed)
    if args.out:
        write_graph_text(g, args.out)
    else:
        sys.stdout.write(f"{g.n} {g.m}\n")
        for u, v in g.edge_array.tolist():
            sys.stdout.write(f"{u} {v}\n")
    print(f"# n={g.n} m={g.m} seed={args.seed}", file=sys.stderr)
    return 0


def cmd_spectrum(args) -> int:
    p = _resolve_p(args) if args.graph_in is None else 0.0
    g = _load_graph(args, args.n, p, args.seed)
    res = spectral.top_r_eigenvalues(g, args.r, tol=args.tol,
                                     method=args.method)
    _emit(args, {"schema_version": SCHEMA_VERSION, "n": g.n, "m": g.m,
                 "r": args.r, "method": res.method,
                 "eigenvalues": [float(v) for v in res.eigenvalues],
                 "max_residual": float(np.max(res.residuals))})
    return 0


def cmd_decompose(args) -> int:
    p = _resolve_p(args)
    g = _load_graph(args, args.n, p, args.seed)
    rp = RegimeParams.compute(args.n, p)
    part = structure.degree_partition(g, rp)
    dec = structure.star_decompose(g, rp)
    if args.bundle_dir:
        structure.write_decomposition_bundle(dec, args.bundle_dir)
    _emit(args, {
        "schema_version": SCHEMA_VERSION, "n": g.n, "m": g.m,
        "seed": args.seed, "regime": rp.regime.name,
        "x1": len(part.x1), "x2": len(part.x2), "y": len(part.y),
        "t1": len(part.t1), "f1_edges": dec.f1.m, "f2_edges": dec.f2.m,
        "cycles_removed": len(dec.cycles),
        "f1_star_forest": structure.star_forest_ok(dec.f1),
        "f2_norm": spectral.spectral_norm(dec.f2),
    })
    return 0


def cmd_estimate(args) -> int:
    p = _resolve_p(args)
    spec = _make_spec(args)
    label = _spec_label(spec)
    t0 = time.perf_counter()
    if args.method == "direct":
        est = tails.mc_estimate(spec, args.n, p, args.trials, args.seed)
    elif args.method == "tilted":
        q_prime = args.q_prime if args.q_prime is not None else p / 2.0
        est = tails.is_estimate_tilted(spec, args.n, p, q_prime, args.trials,
                                       args.seed)
    elif args.method == "planted":
        est = tails.is_estimate_planted(spec, args.n, p, spec, args.trials,
                                        args.seed)
    elif args.method == "enumerate":
        est = tails.enumerate_exact(args.n, p, spec)
    else:
        raise DomainError(f"unknown method {args.method!r}")
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    constants = {"q_prime": args.q_prime} if args.method == "tilted" else {}
    record = tails.estimate_record(est, args.n, p, args.seed, label,
                                   elapsed_ms, constants)
    record["schema_version"] = SCHEMA_VERSION
    record["config_hash"] = _config_hash(
        {"cmd": "estimate", "n": args.n, "p": p, "spec": label,
         "method": args.method, "trials": args.trials, "seed": args.seed,
         "constants": constants})
    record["summary_log_prob"] = est.summary_log_prob
    _emit(args, record)
    return 0


def cmd_ramsey_verify(args) -> int:
    p = _resolve_p(args)
    cfg = ramsey.OverlapConfig.make(
        r=args.r, delta_r=args.delta_r, eps=args.eps_const,
        eps1=args.eps1, K=args.big_k, L=args.big_l,
        relaxed=not args.strict)
    g = _load_graph(args, args.n, p, args.seed)
    rp = RegimeParams.compute(args.n, p)
    verdict = ramsey.verify_lt_implication(g, cfg, rp)
    record = ramsey.verdict_record(verdict)
    record["schema_version"] = SCHEMA_VERSION
    _emit(args, record)
    return 0


def cmd_oracle(args) -> int:
    p = _resolve_p(args)
    pred = tails.parse_event(args.event)
    est = tails.enumerate_exact(args.n, p, pred)
    print(est.prob)
    return 0


def cmd_verify_typical(args) -> int:
    p = _resolve_p(args)
    rp = RegimeParams.compute(args.n, p)
    deg_ratios = []
    eig_ratios = []
    for i in range(args.samples):
        g = sampler.sample_gnp(args.n, p, sampler.derived_seed(args.seed, i))
        dmax = float(g.degrees.max()) if g.n else 0.0
        deg_ratios.append(dmax / rp.lp)
        if dmax > 0:
            lam1 = spectral.top_r_eigenvalues(g, 1).eigenvalues[0]
            eig_ratios.append(lam1 / math.sqrt(dmax))
    _emit(args, {
        "schema_version": SCHEMA_VERSION, "n": args.n, "p": p,
        "samples": args.samples, "lp": rp.lp,
        "median_dmax_over_lp": float(np.median(deg_ratios)),
        "median_lambda1_over_sqrt_dmax":
            float(np.median(eig_ratios)) if eig_ratios else None,
    })
    return 0


def cmd_report(args) -> int:
    records = []
    for path in args.inputs:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
    groups = {}
    for rec in records:
        key = (rec["spec"], rec["method"])
        groups.setdefault(key, []).append(rec)
    rows = []
    for (label, method), recs in sorted(groups.items()):
        spec = _spec_from_label(label)
        theory = spec.rate()
        scale = "log_n" if spec.side == "upper" else "log_log_over_log_n"
        pts = [(rec["n"], rec.get("summary_log_prob", rec["log_prob"]))
               for rec in recs]
        try:
            fit = tails.fit_exponent(pts, scale)
            fitted, stderr, used = fit.slope, fit.slope_stderr, fit.used
            gap = abs(fitted - theory)
        except (InsufficientDataError, DomainError) as exc:
            fitted = stderr = gap = float("nan")
            used = 0
            print(f"# {label}/{method}: {exc}", file=sys.stderr)
        rows.append({"spec": label, "method": method, "scale": scale,
                     "points": used, "theory_rate": theory,
                     "fitted_exponent": fitted, "fit_stderr": stderr,
                     "abs_gap": gap})
    out = args.out or "report.csv"
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["spec", "method", "scale",
                                                "points", "theory_rate",
                                                "fitted_exponent",
                                                "fit_stderr", "abs_gap"])
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {out} ({len(rows)} row(s))")
    return 0


def _add_np_args(sp, need_n=True):
    if need_n:
        sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float)
    sp.add_argument("--p-over-n", dest="p_over_n", type=float)
    sp.add_argument("--seed", type=_parse_seed, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="edgetail",
        description="Sparse random graph eigenvalue tail toolkit")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--config", help="JSON file with default argument values")
    ap.add_argument("--threads", type=int,
                    help="thread cap exported to BLAS/OpenMP pools")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("rates", help="closed-form tail rates")
    sp.add_argument("--ut")
    sp.add_argument("--lt")
    sp.add_argument("--deg-ut", dest="deg_ut")
    sp.add_argument("--deg-lt", dest="deg_lt")
    sp.add_argument("--marginal")
    sp.add_argument("--lt-lambda1", dest="lt_lambda1")
    sp.set_defaults(fn=cmd_rates)

    sp = sub.add_parser("sample", help="draw one G(n, p) sample")
    _add_np_args(sp)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_sample)

    sp = sub.add_parser("spectrum", help="top eigenvalues of a sample")
    _add_np_args(sp)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--method", choices=["auto", "dense", "krylov"],
                    default="auto")
    sp.add_argument("--in", dest="graph_in")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_spectrum)

    sp = sub.add_parser("decompose", help="degree partition and star split")
    _add_np_args(sp)
    sp.add_argument("--in", dest="graph_in")
    sp.add_argument("--bundle-dir", dest="bundle_dir")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("estimate", help="tail probability estimate")
    _add_np_args(sp)
    sp.add_argument("--spec", required=True,
                    choices=["UT", "LT", "degUT", "degLT"])
    sp.add_argument("--deltas")
    sp.add_argument("--eps")
    sp.add_argument("--method", required=True,
                    choices=["direct", "tilted", "planted", "enumerate"])
    sp.add_argument("--trials", type=int, default=100000)
    sp.add_argument("--q-prime", dest="q_prime", type=float)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_estimate)

    sp = sub.add_parser("ramsey-verify", help="run the certificate pipeline")
    _add_np_args(sp)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--delta-r", dest="delta_r", type=float, required=True)
    sp.add_argument("--eps", dest="eps_const", type=float, required=True)
    sp.add_argument("--eps1", type=float, required=True)
    sp.add_argument("--K", dest="big_k", type=int, required=True)
    sp.add_argument("--L", dest="big_l", type=int)
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--in", dest="graph_in")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_ramsey_verify)

    sp = sub.add_parser("oracle", help="exact probability on tiny graphs")
    _add_np_args(sp)
    sp.add_argument("--event", required=True)
    sp.set_defaults(fn=cmd_oracle)

    sp = sub.add_parser("verify-typical", help="typical-scale ratio table")
    _add_np_args(sp)
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_verify_typical)

    sp = sub.add_parser("report", help="exponent fits over JSONL records")
    sp.add_argument("inputs", nargs="+")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_report)
    return ap


def _apply_config(ap: argparse.ArgumentParser, argv: list) -> list:
    # --config supplies defaults; explicit flags win.  The config file maps
    # long option names (without dashes) to values.
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    path = argv[idx + 1]
    with open(path, encoding="utf-8") as fh:
        stored = json.load(fh)
    extra = []
    for key, value in stored.items():
        flag = "--" + key.replace("_", "-")
        if flag in argv:
            continue
        if isinstance(value, bool):
            if value:
                extra.append(flag)
        else:
            extra.extend([flag, str(value)])
    # insert config-derived options right after the subcommand
    return argv + extra


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        argv = _apply_config(ap, argv)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        args = ap.parse_args(argv)
        if args.threads:
            for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                        "MKL_NUM_THREADS"):
                os.environ[var] = str(args.threads)
        return args.fn(args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
