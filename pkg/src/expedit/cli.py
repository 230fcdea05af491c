"""Command-line front end: ``expedit <command> [options]``.

Commands
    exact       exact e_k(n) and alpha_k(n) by coalesced DP
    mc          Monte Carlo estimate with both confidence intervals
    lb          certified lower bound beta_k* (plus the analytic bound)
    rate        closed-form radii Q(n) and Delta_lambda(n, N)
    conjecture  empirical (1 - alpha_tilde) * k
    tables      small-scale regeneration of the reference tables

Records are written as JSON lines (default), CSV or aligned text.

Exit codes: 0 success, 2 bad arguments, 3 resource guard tripped,
4 lower-bound budget exhausted.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import exact, lower_bound, montecarlo
from .strings import ResourceGuardError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_BUDGET = 4

# Published reference values shown next to computed cells by `tables`.
REFERENCE_BETA_STAR = {
    2: 0.17055, 3: 0.28366, 4: 0.35978, 5: 0.41517, 6: 0.45776, 7: 0.49183,
    8: 0.51990, 16: 0.64475, 32: 0.73867, 2**10: 0.94359, 2**20: 0.99686,
    2**30: 0.99978, 2**40: 0.99998,
}
REFERENCE_MC_BY_LENGTH = {  # k = 4
    2**8: 0.53946, 2**9: 0.53144, 2**10: 0.52614, 2**11: 0.52263,
    2**12: 0.52039, 2**13: 0.51891, 2**14: 0.51801, 2**15: 0.51739,
}
REFERENCE_MC_BY_ALPHABET = {  # n = 2**15
    2: 0.28817, 3: 0.42852, 4: 0.51739, 5: 0.57998, 6: 0.62710, 7: 0.66409,
    8: 0.69402, 16: 0.81906, 32: 0.89939,
}


@dataclass
class RunConfig:
    command: str
    k: int | None = None
    n: int | None = None
    N: int | None = None
    lam: float = 0.999
    eps: float = 1e-8
    seed: int = 0
    workers: int | None = None
    precision_bits: int = 0
    budget: int = lower_bound.DEFAULT_BUDGET
    output_format: str = "json"
    out: str | None = None
    trace: bool = False
    caps: dict = field(default_factory=dict)


class UsageError(ValueError):
    pass


def rational(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator), "value": float(q)}


def parse_rational(d: dict) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def load_record(d: dict):
    """Rebuild the typed object behind an emitted JSON record."""
    kind = d.get("record")
    body = {key: v for key, v in d.items() if key != "record"}
    if kind == "SampleStats":
        return montecarlo.SampleStats(**body)
    if kind == "ConfidenceInterval":
        return montecarlo.ConfidenceInterval(**body)
    if kind == "BetaBracket":
        body.pop("beta_hat", None)
        body["trace"] = [tuple(p) for p in body.get("trace", [])]
        return lower_bound.BetaBracket(**body)
    if kind == "ExactResult":
        return {"k": body["k"], "n": body["n"],
                "e": parse_rational(body["e"]), "alpha": parse_rational(body["alpha"])}
    return body


# -- commands -----------------------------------------------------------------

def _need(cfg: RunConfig, *names: str) -> None:
    for name in names:
        if getattr(cfg, name) is None:
            raise UsageError(f"--{name} is required for '{cfg.command}'")


def _validate(cfg: RunConfig) -> None:
    if cfg.k is not None and cfg.k < 2:
        raise UsageError("--k must be >= 2")
    if cfg.n is not None and cfg.n < 1:
        raise UsageError("--n must be >= 1")
    if cfg.N is not None and cfg.N < 1:
        raise UsageError("--N must be >= 1")
    if not 0 < cfg.lam < 1:
        raise UsageError("--lambda must lie in (0, 1)")
    if cfg.eps <= 0:
        raise UsageError("--eps must be positive")
    if cfg.seed < 0 or cfg.seed >= 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    if cfg.workers is not None and cfg.workers < 1:
        raise UsageError("--workers must be >= 1")
    if cfg.budget < 1:
        raise UsageError("--budget must be >= 1")
    if cfg.precision_bits and cfg.precision_bits < 53:
        raise UsageError("--precision-bits must be 0 (double) or >= 53")


def cmd_exact(cfg: RunConfig) -> tuple[list[dict], int]:
    _need(cfg, "k", "n")
    e, alpha = exact.expected_distance_exact(
        cfg.k, cfg.n, workers=cfg.workers or montecarlo.default_workers(),
        max_columns=cfg.caps["max_columns"], max_patterns=cfg.caps["max_patterns"],
    )
    return [{"record": "ExactResult", "k": cfg.k, "n": cfg.n,
             "e": rational(e), "alpha": rational(alpha)}], EXIT_OK


def cmd_mc(cfg: RunConfig) -> tuple[list[dict], int]:
    _need(cfg, "k", "n", "N")
    stats = montecarlo.estimate_alpha_n(cfg.k, cfg.n, cfg.N, cfg.seed, workers=cfg.workers)
    recs = [{"record": "SampleStats", **stats.to_dict()}]
    for ci in (montecarlo.ci_alpha_n(stats, cfg.lam), montecarlo.ci_alpha_limit(stats, cfg.lam)):
        recs.append({"record": "ConfidenceInterval", **ci.to_dict()})
    return recs, EXIT_OK


def _evaluator(cfg: RunConfig):
    if cfg.precision_bits:
        return lower_bound.IntervalArithmetic(cfg.precision_bits)
    return lower_bound.FloatArithmetic()


def cmd_lb(cfg: RunConfig) -> tuple[list[dict], int]:
    _need(cfg, "k")
    br = lower_bound.beta_star(cfg.k, cfg.eps, budget=cfg.budget, evaluator=_evaluator(cfg))
    rec = {"record": "BetaBracket", **br.to_dict()}
    if not cfg.trace:
        rec.pop("trace")
    rec["beta_hat"] = lower_bound.beta_hat_analytic(cfg.k) if cfg.k >= 3 else None
    code = EXIT_OK if br.status == "certified" else EXIT_BUDGET
    return [rec], code


def cmd_rate(cfg: RunConfig) -> tuple[list[dict], int]:
    _need(cfg, "n")
    q = montecarlo.q_rate_bound(cfg.n)
    rec = {"record": "Rate", "n": cfg.n, "Q": q, "Q_half": q / 2}
    if cfg.N is not None:
        d = montecarlo.delta_radius(cfg.n, cfg.N, cfg.lam)
        rec.update(N=cfg.N, level=cfg.lam, delta=d, R=d + q / 2)
    return [rec], EXIT_OK


def cmd_conjecture(cfg: RunConfig) -> tuple[list[dict], int]:
    _need(cfg, "k", "n", "N")
    c = montecarlo.estimate_c_alpha(cfg.k, cfg.n, cfg.N, cfg.seed, workers=cfg.workers)
    return [{"record": "Conjecture", "k": cfg.k, "n": cfg.n, "N": cfg.N,
             "seed": cfg.seed, "c_alpha": c}], EXIT_OK


def cmd_tables(cfg: RunConfig) -> tuple[list[dict], int]:
    recs: list[dict] = []
    code = EXIT_OK
    ev = _evaluator(cfg)
    for k, ref in REFERENCE_BETA_STAR.items():
        br = lower_bound.beta_star(k, cfg.eps, budget=cfg.budget, evaluator=ev)
        if br.status != "certified":
            code = EXIT_BUDGET
        recs.append(_cell("beta_star", k=k, n=None, value=br.lower, provenance="computed"))
        recs.append(_cell("beta_star", k=k, n=None, value=ref, provenance="reference"))
    N = cfg.N or 50
    for n, ref in REFERENCE_MC_BY_LENGTH.items():
        if n > cfg.caps["max_length"]:
            continue
        s = montecarlo.estimate_alpha_n(4, n, N, cfg.seed, workers=cfg.workers)
        recs.append(_cell("mc_by_length", k=4, n=n, value=s.alpha_tilde, provenance="computed", N=N))
        recs.append(_cell("mc_by_length", k=4, n=n, value=ref, provenance="reference", N=2**39 // n**2))
    n = min(2**15, cfg.caps["max_length"])
    for k, ref in REFERENCE_MC_BY_ALPHABET.items():
        s = montecarlo.estimate_alpha_n(k, n, N, cfg.seed, workers=cfg.workers)
        recs.append(_cell("mc_by_alphabet", k=k, n=n, value=s.alpha_tilde, provenance="computed", N=N))
        recs.append(_cell("mc_by_alphabet", k=k, n=2**15, value=ref, provenance="reference", N=2**9))
    return recs, code


def _cell(table, k, n, value, provenance, N=None) -> dict:
    return {"record": "TableCell", "table": table, "k": k, "n": n, "N": N,
            "value": value, "provenance": provenance}


COMMANDS = {
    "exact": cmd_exact,
    "mc": cmd_mc,
    "lb": cmd_lb,
    "rate": cmd_rate,
    "conjecture": cmd_conjecture,
    "tables": cmd_tables,
}


# -- output -------------------------------------------------------------------

def _flat(rec: dict) -> dict:
    out = {}
    for key, v in rec.items():
        if isinstance(v, dict) and "num" in v:
            out[key] = v["value"]
            out[key + "_exact"] = f"{v['num']}/{v['den']}"
        elif isinstance(v, (list, tuple)):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def format_records(records: Iterable[dict], fmt: str) -> str:
    records = list(records)
    if fmt == "json":
        return "".join(json.dumps(r) + "\n" for r in records)
    buf = io.StringIO()
    if fmt == "csv":
        header = None
        writer = None
        for r in records:
            flat = _flat(r)
            if list(flat) != header:
                header = list(flat)
                writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
                writer.writeheader()
            writer.writerow(flat)
        return buf.getvalue()
    for r in records:
        flat = _flat(r)
        width = max(len(key) for key in flat)
        for key, v in flat.items():
            buf.write(f"{key:<{width}}  {v}\n")
        buf.write("\n")
    return buf.getvalue()


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="expedit", description="Expected edit distance between random strings.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--k", type=int, help="alphabet size")
    p.add_argument("--n", type=int, help="string length")
    p.add_argument("--N", type=int, help="number of sampled pairs")
    p.add_argument("--lambda", dest="lam", type=float, default=0.999, help="confidence level in (0, 1)")
    p.add_argument("--eps", type=float, default=1e-8, help="target accuracy for lb")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: $EXPEDIT_WORKERS or 1)")
    p.add_argument("--precision-bits", type=int, default=0,
                   help="interval arithmetic mantissa bits for lb (0 = double)")
    p.add_argument("--budget", type=int, default=lower_bound.DEFAULT_BUDGET,
                   help="iteration budget per sign evaluation")
    p.add_argument("--format", dest="output_format", choices=["json", "csv", "text"], default="json")
    p.add_argument("--out", help="write records here instead of stdout")
    p.add_argument("--trace", action="store_true", help="include per-step brackets in lb output")
    p.add_argument("--max-columns", type=int, default=exact.DEFAULT_MAX_COLUMNS)
    p.add_argument("--max-patterns", type=int, default=exact.DEFAULT_MAX_PATTERNS)
    p.add_argument("--max-length", type=int, default=2**12,
                   help="longest n sampled by `tables`")
    return p


def parse_config(argv: list[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    caps = {"max_columns": ns.max_columns, "max_patterns": ns.max_patterns, "max_length": ns.max_length}
    cfg = RunConfig(
        command=ns.command, k=ns.k, n=ns.n, N=ns.N, lam=ns.lam, eps=ns.eps, seed=ns.seed,
        workers=ns.workers, precision_bits=ns.precision_bits, budget=ns.budget,
        output_format=ns.output_format, out=ns.out, trace=ns.trace, caps=caps,
    )
    _validate(cfg)
    return cfg


def run(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        records, code = COMMANDS[cfg.command](cfg)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    except ResourceGuardError as exc:
        print(f"expedit: resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"expedit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = format_records(records, cfg.output_format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
