"""Command-line interface: ``avtest {test,critvals,power,efficiency,lao,tables}``.

Exit codes: 0 on success, 2 when ``test`` rejects at the first listed alpha,
1 on invalid input or any library error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import bahadur, montecarlo, reference
from .alternatives import AltFamily, AlternativeSpec
from .errors import AVTestError
from .sample import Family, Sample, StatisticKind, TupleStrategy, default_strategy, evaluate

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REJECT = 2

TABLE_CHOICES = ("efficiency-integral", "efficiency-ks", "critical-values",
                 "power-integral", "power-ks", "all")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags, which would read as a rejection
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def _fmt(v):
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def render_text(header, rows) -> str:
    cells = [[str(h) for h in header]] + [[_fmt(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row])
    return buf.getvalue()


def render_json(record) -> str:
    return json.dumps(record, indent=2, sort_keys=True) + "\n"


def _emit(args, record, header, rows, out):
    if args.format == "json":
        out.write(render_json(record))
    elif args.format == "csv":
        out.write(render_csv(header, rows))
    else:
        out.write(render_text(header, rows))


# ---------------------------------------------------------------------------
# Input
# ---------------------------------------------------------------------------

def _parse_float(text, where):
    try:
        v = float(text)
    except ValueError:
        raise UsageError(f"{where}: cannot parse {text.strip()!r} as a number") from None
    if not math.isfinite(v):
        raise UsageError(f"{where}: non-finite value {text.strip()!r}")
    if v < 0:
        raise UsageError(f"{where}: negative value {v!r}; data must be nonnegative")
    return v


def read_values(path, column=None) -> np.ndarray:
    """Read newline-delimited numbers, or one column of a CSV file when ``column`` is set.

    ``column`` is a header name, or a 0-based index when the file has no
    header.  Blank lines and lines starting with ``#`` are skipped.
    """
    fh = sys.stdin if path == "-" else open(path, newline="")
    with fh:
        lines = fh.read().splitlines()
    values = []
    if column is None:
        for i, line in enumerate(lines, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            values.append(_parse_float(s, f"line {i}"))
    else:
        rows = [(i, r) for i, r in enumerate(csv.reader(lines), 1)
                if r and not r[0].lstrip().startswith("#")]
        if not rows:
            raise UsageError(f"{path}: no data rows")
        idx = None
        first = rows[0][1]
        if column in [c.strip() for c in first]:
            idx = [c.strip() for c in first].index(column)
            rows = rows[1:]
        elif column.isdigit():
            idx = int(column)
            try:
                [float(c) for c in first]
            except ValueError:
                rows = rows[1:]
        else:
            raise UsageError(f"{path}: no column named {column!r} in header {first!r}")
        for i, r in rows:
            if idx >= len(r):
                raise UsageError(f"line {i}: missing column {column!r}")
            values.append(_parse_float(r[idx], f"line {i}"))
    if not values:
        raise UsageError(f"{path}: no data values")
    return np.asarray(values)


def _kind(args) -> StatisticKind:
    return StatisticKind(Family(args.kind), args.k)


def _strategy(args, n, k):
    mode = getattr(args, "tuples", "auto")
    if mode == "exact":
        return TupleStrategy.exact(budget=max(n ** k, 1))
    if mode == "sampled":
        return TupleStrategy.sampled(args.tuple_count, args.seed)
    return default_strategy(n, k, args.seed)


def _alternative(args) -> AlternativeSpec:
    return AlternativeSpec(AltFamily(args.family), args.theta, args.beta)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_test(args, out) -> int:
    x = read_values(args.data, args.column)
    sample = Sample(x)
    kind = _kind(args)
    strategy = _strategy(args, sample.n, kind.k)
    res = evaluate(sample, kind, strategy)
    if args.method == "asymptotic":
        p = montecarlo.p_value(kind, sample.n, res.value, "asymptotic")
    else:
        cfg = montecarlo.MonteCarloConfig(kind, sample.n, args.reps, args.seed,
                                          tuple_strategy=strategy if strategy.mode == "exact" else None)
        null = montecarlo.simulate(cfg, args.threads).values()
        p = montecarlo.p_value(kind, sample.n, res.value, "montecarlo", null_values=null)
    res = type(res)(res.kind, res.value, res.n, p, args.method, res.tuple_error)
    decisions = {repr(a): bool(p <= a) for a in args.alpha}
    record = res.to_dict()
    record["decisions"] = decisions
    rows = [[kind.label, res.n, res.value, p, a, "reject" if p <= a else "fail-to-reject"]
            for a in args.alpha]
    _emit(args, record, ["statistic", "n", "value", "p_value", "alpha", "decision"], rows, out)
    return EXIT_REJECT if p <= args.alpha[0] else EXIT_OK


def cmd_critvals(args, out) -> int:
    kind = _kind(args)
    cfg = montecarlo.MonteCarloConfig(kind, args.n, args.reps, args.seed,
                                      tuple_strategy=_strategy(args, args.n, kind.k))
    table = montecarlo.critical_values(cfg, args.alpha, args.threads)
    rows = [[kind.label, args.n, a, q] for a, q in table.entries.items()]
    _emit(args, table.to_dict(), ["statistic", "n", "alpha", "critical_value"], rows, out)
    return EXIT_OK


def cmd_power(args, out) -> int:
    kind = _kind(args)
    alt = _alternative(args)
    strategy = _strategy(args, args.n, kind.k)
    null_cfg = montecarlo.MonteCarloConfig(kind, args.n, args.reps, args.seed, strategy)
    table = montecarlo.critical_values(null_cfg, args.alpha, args.threads)
    sim = montecarlo.simulate(montecarlo.MonteCarloConfig(
        kind, args.n, args.reps, args.seed + 1, strategy, alt), args.threads)
    ests = [montecarlo.power_from_values(kind, sim.values(), a, table[a], alt, args.n,
                                         sim.tuple_error) for a in args.alpha]
    record = {"critical_values": table.to_dict(), "estimates": [e.to_dict() for e in ests]}
    rows = [[kind.label, alt.label, alt.theta, args.n, e.alpha, e.critical_value_used,
             e.rejection_rate, e.mc_std_error] for e in ests]
    _emit(args, record, ["statistic", "alternative", "theta", "n", "alpha", "critical_value",
                         "power", "std_error"], rows, out)
    return EXIT_OK


def cmd_efficiency(args, out) -> int:
    families = [args.family] if args.family else [f.value for f in AltFamily]
    fam = Family(args.kind)
    reports = []
    best = {}
    for f in families:
        spec = AltFamily(f)
        if args.best_k:
            best[f] = bahadur.best_k_scan(fam, spec, (args.k, args.k_max), args.beta)
        reports.append(bahadur.local_efficiency(StatisticKind(fam, args.k), spec, args.beta))
    record = {"reports": [r.to_dict() for r in reports]}
    header = ["statistic", "alternative", "efficiency", "slope_curvature", "kl_curvature",
              "b_coefficient", "witness_t"]
    rows = [[r.kind.label, r.family, r.efficiency, r.slope_curvature, r.kl_curvature,
             r.b_coefficient, r.witness_t] for r in reports]
    if args.best_k:
        record["best_k"] = {f: {"k": kb, "efficiency": e} for f, (kb, e) in best.items()}
        header += ["best_k", "best_efficiency"]
        rows = [row + list(best[f]) for row, f in zip(rows, families)]
    _emit(args, record, header, rows, out)
    return EXIT_OK


def lao_curve(kind: StatisticKind, theta: float, x_max: float, points: int):
    """Grid ``x`` on ``[0, x_max]`` with density values; jump points appear from both sides."""
    dens = bahadur.lao(kind, theta)
    x = np.linspace(0.0, x_max, points)
    jumps = np.asarray([b for b in dens.breaks if 0 < b < x_max])
    x = np.unique(np.concatenate([x, jumps, np.nextafter(jumps, 0.0)]))
    return dens, x, dens(x)


def cmd_lao(args, out) -> int:
    kind = _kind(args)
    dens, x, g = lao_curve(kind, args.theta, args.x_max, args.points)
    if args.format == "json":
        out.write(render_json({"kind": kind.to_dict(), "theta": dens.theta,
                               "max_theta": dens.max_theta, "witness_t": dens.witness_t,
                               "x": x.tolist(), "g": g.tolist()}))
    elif args.format == "csv":
        out.write(render_csv(["x", "g"], zip(x.tolist(), g.tolist())))
    else:
        out.write(render_text(["x", "g"], zip(x.tolist(), g.tolist())))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Table reproduction
# ---------------------------------------------------------------------------

def efficiency_integral_rows():
    rows = []
    for k in (2, 3):
        for f, pub in reference.EFFICIENCY[("integral", k)].items():
            e = bahadur.local_efficiency(StatisticKind.integral(k), f).efficiency
            rows.append([f"I^({k})", f, k, pub, e, e - pub])
    for f, (kp, pub) in reference.BEST_K.items():
        kb, e = bahadur.best_k_scan(Family.INTEGRAL, f, (2, 20))
        rows.append(["I^(k*) best", f, kb, pub, e, e - pub if kb == kp else None])
    return rows


def efficiency_ks_rows():
    rows = []
    for k in (2, 3):
        for f, pub in reference.EFFICIENCY[("kolmogorov", k)].items():
            rep = bahadur.local_efficiency(StatisticKind.kolmogorov(k), f)
            rows.append([f"D^({k})", f, k, pub, rep.efficiency, rep.efficiency - pub])
    return rows


def _exact(n, k):
    return TupleStrategy.exact(budget=max(n ** k, 1))


def simulate_tables(orders, n, reps, seed, threads, want_critical=True, want_power=True):
    """Null and alternative simulations shared by the critical-value and power tables.

    Returns ``(critical_rows, power_rows)``; power rows carry both statistics.
    """
    crit_rows, power_rows = [], []
    for k in orders:
        strat = _exact(n, k)
        base = montecarlo.MonteCarloConfig(StatisticKind.integral(k), n, reps, seed, strat)
        null = montecarlo.simulate(base, threads)
        alphas = sorted(set(reference.POWER_ALPHAS) | set(reference.CRITICAL_ALPHAS),
                        reverse=True)
        crits = {fam: {a: montecarlo.upper_quantile(np.sort(null.values(fam)), a) for a in alphas}
                 for fam in Family}
        if want_critical and k in reference.CRITICAL_VALUES:
            for a, pub in reference.CRITICAL_VALUES[k].items():
                q = crits[Family.KOLMOGOROV][a]
                crit_rows.append([f"D^({k})", k, a, pub, q, q - pub])
        if not want_power:
            continue
        for f in reference.FAMILIES:
            for theta in reference.POWER_THETAS:
                alt = AlternativeSpec(AltFamily(f), theta)
                sim = montecarlo.simulate(montecarlo.MonteCarloConfig(
                    StatisticKind.integral(k), n, reps, seed + 1, strat, alt), threads)
                for fam, table in ((Family.INTEGRAL, reference.POWER_INTEGRAL),
                                   (Family.KOLMOGOROV, reference.POWER_KOLMOGOROV)):
                    pubs = table[(f, theta, k)]
                    for a, pub in zip(reference.POWER_ALPHAS, pubs):
                        est = montecarlo.power_from_values(
                            StatisticKind(fam, k), sim.values(fam), a, crits[fam][a], alt, n)
                        power_rows.append([fam.value, f, theta, k, a, pub, est.rejection_rate,
                                           est.mc_std_error, est.rejection_rate - pub])
    return crit_rows, power_rows


EFF_HEADER = ["statistic", "alternative", "k", "published", "computed", "delta"]
CRIT_HEADER = ["statistic", "k", "alpha", "published", "computed", "delta"]
POWER_HEADER = ["family", "alternative", "theta", "k", "alpha", "published", "computed",
                "std_error", "delta"]


def cmd_tables(args, out) -> int:
    which = args.which
    want = (lambda name: which in (name, "all"))
    sections = []
    if want("efficiency-integral"):
        sections.append(("efficiency-integral", EFF_HEADER, efficiency_integral_rows()))
    if want("efficiency-ks"):
        sections.append(("efficiency-ks", EFF_HEADER, efficiency_ks_rows()))
    need_crit = want("critical-values")
    need_power = want("power-integral") or want("power-ks")
    if need_crit or need_power:
        orders = args.orders if need_power else [k for k in args.orders if k in (2, 3)]
        crit_rows, power_rows = simulate_tables(orders, args.n, args.reps, args.seed,
                                                args.threads, need_crit, need_power)
        if need_crit:
            sections.append(("critical-values", CRIT_HEADER, crit_rows))
        for name, fam in (("power-integral", "integral"), ("power-ks", "kolmogorov")):
            if want(name):
                sections.append((name, POWER_HEADER, [r for r in power_rows if r[0] == fam]))
    if args.format == "json":
        record = {"tables": [
            {"table": name, "columns": header, "rows": rows,
             "max_abs_delta": max((abs(r[-1]) for r in rows if r[-1] is not None), default=None)}
            for name, header, rows in sections]}
        out.write(render_json(record))
        return EXIT_OK
    for i, (name, header, rows) in enumerate(sections):
        if i:
            out.write("\n")
        if args.format == "csv":
            out.write(render_csv(["table"] + header, [[name] + r for r in rows]))
            continue
        out.write(f"== {name} ==\n")
        out.write(render_text(header, rows))
        deltas = [abs(r[-1]) for r in rows if r[-1] is not None]
        if deltas:
            out.write(f"max |delta| = {max(deltas):.4g}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _alphas(text):
    vals = [float(v) for v in text.split(",") if v.strip()]
    for v in vals:
        if not 0 < v <= 1:
            raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1], got {v}")
    return vals


def _add_common(p, seed=True, threads=True):
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    if seed:
        p.add_argument("--seed", type=int, default=0)
    if threads:
        p.add_argument("--threads", type=int, default=1,
                       help="worker processes for Monte Carlo replicates")


def _add_kind(p, default_kind="integral"):
    p.add_argument("--kind", choices=("integral", "kolmogorov"), default=default_kind)
    p.add_argument("--k", type=int, default=2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="avtest", description="Scale-free exponentiality tests "
                     "comparing maxima of k-tuples with weighted sums.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("test", help="test a data file for exponentiality")
    p.add_argument("data", help="file of nonnegative numbers, one per line ('-' for stdin)")
    p.add_argument("--column", help="CSV column name, or 0-based index")
    _add_kind(p)
    p.add_argument("--method", choices=("asymptotic", "montecarlo"), default=None)
    p.add_argument("--alpha", type=_alphas, default=[0.05],
                   help="comma-separated levels; the first decides the exit code")
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--tuples", choices=("auto", "exact", "sampled"), default="auto")
    p.add_argument("--tuple-count", type=int, default=10_000_000)
    _add_common(p)

    p = sub.add_parser("critvals", help="simulate null critical values")
    _add_kind(p, "kolmogorov")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--alpha", type=_alphas, default=list(reference.CRITICAL_ALPHAS))
    p.add_argument("--tuples", choices=("auto", "exact", "sampled"), default="auto")
    p.add_argument("--tuple-count", type=int, default=10_000_000)
    _add_common(p)

    p = sub.add_parser("power", help="simulate power against a parametric alternative")
    _add_kind(p)
    p.add_argument("--family", choices=[f.value for f in AltFamily], required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--beta", type=float, default=3.0)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--alpha", type=_alphas, default=list(reference.POWER_ALPHAS))
    p.add_argument("--tuples", choices=("auto", "exact", "sampled"), default="auto")
    p.add_argument("--tuple-count", type=int, default=10_000_000)
    _add_common(p)

    p = sub.add_parser("efficiency", help="local Bahadur efficiency")
    _add_kind(p)
    p.add_argument("--family", choices=[f.value for f in AltFamily], default=None)
    p.add_argument("--beta", type=float, default=3.0)
    p.add_argument("--best-k", action="store_true", help="also scan k from --k to --k-max")
    p.add_argument("--k-max", type=int, default=20)
    _add_common(p, seed=False, threads=False)

    p = sub.add_parser("lao", help="sampled curve of a most favorable alternative density")
    _add_kind(p)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--x-max", type=float, default=30.0)
    p.add_argument("--points", type=int, default=30001)
    p.add_argument("--format", choices=("text", "json", "csv"), default="csv")

    p = sub.add_parser("tables", help="reproduce the published efficiency, critical-value "
                       "and power tables with per-cell deltas")
    p.add_argument("--which", choices=TABLE_CHOICES, default="all")
    p.add_argument("--n", type=int, default=reference.SIM_N)
    p.add_argument("--reps", type=int, default=reference.SIM_REPLICATES)
    p.add_argument("--orders", type=int, nargs="+", default=list(reference.POWER_ORDERS))
    _add_common(p)
    return parser


COMMANDS = {"test": cmd_test, "critvals": cmd_critvals, "power": cmd_power,
            "efficiency": cmd_efficiency, "lao": cmd_lao, "tables": cmd_tables}


def _validate(args):
    if args.command == "test" and args.method is None:
        args.method = "asymptotic" if args.kind == "integral" else "montecarlo"
    if getattr(args, "reps", 1) < 1:
        raise UsageError("--reps must be >= 1")
    if getattr(args, "threads", 1) < 1:
        raise UsageError("--threads must be >= 1")
    if getattr(args, "seed", 0) < 0:
        raise UsageError("--seed must be nonnegative")
    if args.command == "lao" and args.points < 2:
        raise UsageError("--points must be >= 2")


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        err.write(f"avtest: error: {e}\n")
        return EXIT_ERROR
    except (AVTestError, ValueError) as e:
        err.write(f"avtest: error: {e}\n")
        return EXIT_ERROR
    except OSError as e:
        err.write(f"avtest: error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
