"""Command-line interface.

Every subcommand writes to stdout unless ``-o`` is given.  For ``figure`` the
environment variable ``ENTRODIV_OUTPUT_DIR`` supplies a default directory
(``<dir>/<figure>.csv``).
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .black_scholes import MarketParams
from .emit import emit, format_value, json_text, write_text
from .entropy import Cauchy, DensityGrid, Gaussian, LogNormal, d_measure_analytic, d_measure_grid
from .errors import DiversificationError, InputFormatError, NumericalError, ValidationError
from .maxent import MomentTargets, d_difference_surface, solve_maxent
from .overlays import (
    DEFAULT_HORIZON,
    DEFAULT_MIN_GAP_PCT,
    DEFAULT_NU,
    DEFAULT_RATE,
    DEFAULT_SIGMAS,
    DEFAULT_TERM,
    DEFAULT_WIDTH_PCT,
    FIGURE_STRIKES,
    BenefitRow,
    UnderlyingModel,
    benefit_collar,
    benefit_long_put,
    benefit_put_spread,
    sweep_figure,
)
from .spectral import pdi, pdi_weighted, eigen_spectrum
from .weights import (
    ThreeAssetRow,
    TwoAssetRow,
    herfindahl,
    herfindahl_rescaled,
    three_asset_comparison_grid,
    two_asset_comparison,
    weight_entropy,
    weight_entropy_subdivision,
)

OUTPUT_DIR_ENV = "ENTRODIV_OUTPUT_DIR"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4
EXIT_INPUT_FORMAT = 5
EXIT_IO = 6

EXIT_CODES_HELP = """\
exit status:
  0  success (divergent benefits are reported in the output, not as errors)
  1  a self-check failed
  2  usage error or unknown subcommand
  3  parameter outside its domain / invalid input values
  4  numerical failure (quadrature or solver did not converge)
  5  malformed input CSV
  6  I/O error writing output
"""

BENEFIT_HEADER = list(BenefitRow._fields)


@dataclass
class RunConfig:
    """A parsed invocation."""

    command: str
    params: dict[str, Any] = field(default_factory=dict)
    output: str | None = None
    fmt: str | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.fmt not in (None, "csv", "json"):
            raise ValidationError(f"output format must be csv or json, got {self.fmt!r}")
        for key in ("grid_points", "cases", "tol"):
            v = self.params.get(key)
            if v is not None and v <= 0:
                raise ValidationError(f"--{key.replace('_', '-')} must be positive")


# ---------------------------------------------------------------------------
# Input parsing
# ---------------------------------------------------------------------------


def read_matrix(path: str) -> np.ndarray:
    """Header-free numeric CSV as a 2-D float array."""
    rows = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            for lineno, rec in enumerate(csv.reader(fh), 1):
                if not rec or all(not c.strip() for c in rec):
                    continue
                try:
                    rows.append([float(c) for c in rec])
                except ValueError:
                    raise InputFormatError(f"{path}:{lineno}: non-numeric entry in {rec!r}") from None
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise InputFormatError(f"{path}: no data")
    width = {len(r) for r in rows}
    if len(width) != 1:
        raise InputFormatError(f"{path}: rows have differing lengths {sorted(width)}")
    return np.array(rows)


def read_density_grid(path: str) -> DensityGrid:
    """Two-column ``abscissa,density`` CSV; a non-numeric first line is a header."""
    rows = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            for lineno, rec in enumerate(csv.reader(fh), 1):
                if not rec or all(not c.strip() for c in rec):
                    continue
                if len(rec) != 2:
                    raise InputFormatError(f"{path}:{lineno}: expected 2 columns, got {len(rec)}")
                try:
                    rows.append((float(rec[0]), float(rec[1])))
                except ValueError:
                    if lineno == 1:
                        continue
                    raise InputFormatError(f"{path}:{lineno}: non-numeric entry in {rec!r}") from None
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise InputFormatError(f"{path}: no data")
    a = np.array(rows)
    return DensityGrid(a[:, 0], a[:, 1])


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


# ---------------------------------------------------------------------------
# Command implementations.  Each returns (header, rows) for tables or a dict
# for single results, plus an optional human-readable rendering.
# ---------------------------------------------------------------------------


def _emit_record(record: dict[str, Any], text: str, cfg: RunConfig) -> None:
    if cfg.fmt == "json":
        write_text(json_text(record), cfg.output)
    elif cfg.fmt == "csv":
        emit([list(record.values())], list(record), "csv", cfg.output)
    else:
        write_text(text, cfg.output)


def _cmd_weights(cfg: RunConfig) -> int:
    p = cfg.params
    values = list(p["weights"] or [])
    if p.get("csv"):
        m = read_matrix(p["csv"])
        if m.shape[1] != 1:
            raise InputFormatError(f"{p['csv']}: expected one column, got {m.shape[1]}")
        values += m[:, 0].tolist()
    if not values:
        raise ValidationError("no weights given")
    allow = p["allow_zero"]
    record = {
        "n": len(values),
        "herfindahl": herfindahl(values, allow),
        "herfindahl_rescaled": herfindahl_rescaled(values, allow) if len(values) > 1 else math.nan,
        "entropy_bits": weight_entropy(values, 2, allow),
        "entropy_nats": weight_entropy(values, math.e, allow),
    }
    text = (
        f"herfindahl = {format_value(record['herfindahl'])}\n"
        f"herfindahl_rescaled = {format_value(record['herfindahl_rescaled'])}\n"
        f"weight_entropy = {format_value(record['entropy_bits'])} bits "
        f"({format_value(record['entropy_nats'])} nats)\n"
    )
    _emit_record(record, text, cfg)
    return EXIT_OK


def _cmd_pdi(cfg: RunConfig) -> int:
    p = cfg.params
    c = read_matrix(p["covariance"])
    if p.get("weights"):
        w = read_matrix(p["weights"]).ravel()
        value = pdi_weighted(c, w)
    else:
        value = pdi(eigen_spectrum(c))
    spectrum = eigen_spectrum(c).lambdas
    record = {"pdi": value, "n_assets": c.shape[0], "weighted": bool(p.get("weights"))}
    text = f"PDI = {format_value(value)}\n"
    if cfg.fmt == "json":
        record["spectrum"] = list(spectrum)
    _emit_record(record, text, cfg)
    return EXIT_OK


def _cmd_entropy(cfg: RunConfig) -> int:
    p = cfg.params
    if p.get("grid"):
        d = d_measure_grid(read_density_grid(p["grid"]))
    else:
        dist = p["dist"]
        if dist == "gaussian":
            obj = Gaussian(p["sigma"], p["mean"])
        elif dist == "cauchy":
            obj = Cauchy(p["gamma"], p["x0"])
        else:
            obj = LogNormal(p["nu"], p["sigma"])
        d = d_measure_analytic(obj)
    record = {"unit": "nats", "value_bits": d.bits, "value_nats": d.nats}
    text = f"D = {format_value(d.nats)} nats ({format_value(d.bits)} bits)\n"
    _emit_record(record, text, cfg)
    return EXIT_OK


def _market(p: dict[str, Any]) -> tuple[UnderlyingModel, MarketParams]:
    tau = p["tau"] if p.get("tau") is not None else p["term"] - p["horizon"]
    u = UnderlyingModel(p["sigma"], nu=p["nu"], horizon_years=p["horizon"])
    return u, MarketParams(r=p["r"], sigma=p["sigma"], tau=tau)


def _cmd_overlay(cfg: RunConfig) -> int:
    p = cfg.params
    u, m = _market(p)
    kind = p["overlay"]
    kw = {"tol": p["tol"]}
    if p.get("grid_points"):
        kw["start_intervals"] = p["grid_points"]
    if kind == "put":
        k = p["strike_pct"]
        b = benefit_long_put(u, m, k / 100.0, **kw)
    elif kind == "put-spread":
        k = p["upper_pct"]
        lower = p["lower_pct"] if p.get("lower_pct") is not None else k - p["width_pct"]
        b = benefit_put_spread(u, m, k / 100.0, lower / 100.0, **kw)
    else:
        k = p["call_pct"]
        b = benefit_collar(u, m, p["put_pct"] / 100.0, k / 100.0, p["min_gap_pct"], **kw)
    row = BenefitRow(float(k), float(p["sigma"]), b, b / math.log(2.0), math.isinf(b))
    if cfg.fmt is None:
        status = " (diverged)" if row.diverged else ""
        write_text(
            f"benefit = {format_value(row.benefit_nats)} nats "
            f"({format_value(row.benefit_bits)} bits){status}\n",
            cfg.output,
        )
    else:
        emit([row], BENEFIT_HEADER, cfg.fmt, cfg.output)
    return EXIT_OK


def _cmd_maxent(cfg: RunConfig) -> int:
    p = cfg.params
    if p["excess_kurtosis"]:
        t = MomentTargets.from_excess(p["variance"], p["skew"], p["kurt"])
    else:
        t = MomentTargets(p["variance"], p["skew"], p["kurt"])
    sol = solve_maxent(t)
    record = {
        "converged": sol.converged,
        "delta_d_nats": sol.delta_d,
        "entropy_nats": sol.entropy_nats,
        "lambda1": sol.lagrange_multipliers[0],
        "lambda2": sol.lagrange_multipliers[1],
        "lambda3": sol.lagrange_multipliers[2],
        "lambda4": sol.lagrange_multipliers[3],
        "log_normalizer": sol.log_normalizer,
        "residual": sol.residual,
    }
    lam = ", ".join(format_value(v) for v in sol.lagrange_multipliers)
    text = (
        f"converged = {'yes' if sol.converged else 'no'} (moment residual {format_value(sol.residual)})\n"
        f"multipliers (x, x^2, x^3, x^4) = {lam}\n"
        f"log_normalizer = {format_value(sol.log_normalizer)}\n"
        f"entropy = {format_value(sol.entropy_nats)} nats\n"
        f"delta_D = {format_value(sol.delta_d)} nats\n"
    )
    _emit_record(record, text, cfg)
    return EXIT_OK if sol.converged else EXIT_NUMERICAL


def _figure_rows(cfg: RunConfig):
    p = cfg.params
    which = p["figure"]
    n = p.get("grid_points")
    if which in FIGURE_STRIKES:
        lo, hi = FIGURE_STRIKES[which]
        lo = p["strike_min"] if p.get("strike_min") is not None else lo
        hi = p["strike_max"] if p.get("strike_max") is not None else hi
        strikes = np.linspace(lo, hi, n or 101)
        tau = p["tau"] if p.get("tau") is not None else p["term"] - p["horizon"]
        rows = sweep_figure(
            which, strikes, p["sigma"] or DEFAULT_SIGMAS,
            r=p["r"], nu=p["nu"], horizon=p["horizon"], tau=tau,
            width_pct=p["width_pct"], put_pct=p["put_pct"], min_gap_pct=p["min_gap_pct"],
        )
        return BENEFIT_HEADER, rows
    if which == "fig5":
        n = n or 21
        skews = np.linspace(p["skew_min"], p["skew_max"], n)
        kurts = np.linspace(p["kurt_min"], p["kurt_max"], n)
        rows = d_difference_surface(p["variance"], skews, kurts, excess=p["excess_kurtosis"])
        return ["skew", "kurt", "delta_d_nats", "defined"], rows
    if which == "fig6":
        return list(TwoAssetRow._fields), two_asset_comparison(n or 101)
    return list(ThreeAssetRow._fields), three_asset_comparison_grid(n or 61, n or 61)


def _cmd_figure(cfg: RunConfig) -> int:
    header, rows = _figure_rows(cfg)
    out = cfg.output
    if out is None and os.environ.get(OUTPUT_DIR_ENV):
        out = str(Path(os.environ[OUTPUT_DIR_ENV]) / f"{cfg.params['figure']}.{cfg.fmt or 'csv'}")
        print(f"writing {out}", file=sys.stderr)
    emit(rows, header, cfg.fmt or "csv", out)
    return EXIT_OK


def _cmd_check(cfg: RunConfig) -> int:
    """Seeded randomized sweep of the weight-entropy and PDI identities."""
    seed = cfg.seed if cfg.seed is not None else 20240101
    cases = cfg.params["cases"]
    rng = np.random.default_rng(seed)
    print(f"seed = {seed}", file=sys.stderr)
    failures = 0
    for _ in range(cases):
        n_top = int(rng.integers(1, 6))
        top = rng.dirichlet(np.ones(n_top))
        subs = [rng.dirichlet(np.ones(int(rng.integers(1, 6)))) for _ in range(n_top)]
        flat = np.concatenate([t * s for t, s in zip(top, subs)])
        lhs = weight_entropy(flat / flat.sum(), 2)
        rhs = weight_entropy_subdivision(top, [weight_entropy(s, 2) for s in subs], 2)
        m = int(rng.integers(1, 11))
        failures += abs(lhs - rhs) > 1e-12
        failures += abs(weight_entropy(np.full(m, 1.0 / m), 2) - math.log2(m)) > 1e-12
        failures += abs(pdi(np.full(m, 1.0 / m)) - m) > 1e-12
    record = {"cases": cases, "failures": int(failures), "seed": seed}
    _emit_record(record, f"{cases} cases, {failures} failures (seed {seed})\n", cfg)
    return EXIT_OK if failures == 0 else EXIT_FAILURE


COMMANDS = {
    "weights": _cmd_weights,
    "pdi": _cmd_pdi,
    "entropy": _cmd_entropy,
    "overlay": _cmd_overlay,
    "maxent": _cmd_maxent,
    "figure": _cmd_figure,
    "check": _cmd_check,
}


def run(cfg: RunConfig) -> int:
    """Dispatch a parsed configuration; returns the exit status."""
    try:
        return COMMANDS[cfg.command](cfg)
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_FORMAT
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DiversificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO


# ---------------------------------------------------------------------------
# Argument parser
# ---------------------------------------------------------------------------


def _add_market(p: argparse.ArgumentParser, sigma_list: bool = False) -> None:
    g = p.add_argument_group("market parameters")
    if sigma_list:
        g.add_argument("--sigma", type=_float_list, default=None,
                       help="comma-separated annual log-return volatilities (default 0.15,0.25,0.35)")
    else:
        g.add_argument("--sigma", type=float, default=0.25, help="annual log-return volatility")
    g.add_argument("--r", type=float, default=DEFAULT_RATE, help="risk-free rate (default 0.10)")
    g.add_argument("--nu", type=float, default=DEFAULT_NU,
                   help="log of the expected growth factor over the horizon (default 0.10)")
    g.add_argument("--horizon", type=float, default=DEFAULT_HORIZON,
                   help="measurement horizon in years (default 1)")
    g.add_argument("--term", type=float, default=DEFAULT_TERM, help="option term in years (default 2)")
    g.add_argument("--tau", type=float, default=None,
                   help="remaining option life at the horizon (default term - horizon)")
    g.add_argument("--width-pct", type=float, default=DEFAULT_WIDTH_PCT,
                   help="put-spread width in percent of initial value (default 10)")
    g.add_argument("--put-pct", type=float, default=100.0, help="collar put strike, percent (default 100)")
    g.add_argument("--min-gap-pct", type=float, default=DEFAULT_MIN_GAP_PCT,
                   help="collar strike gap below which the benefit is reported as divergent (default 0.1)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default=None,
                        help="machine-readable output format")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized checks")

    parser = argparse.ArgumentParser(
        prog="entrodiv",
        description="Portfolio diversification measures: weight indices, PDI and the entropy measure.",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], epilog=EXIT_CODES_HELP,
                              formatter_class=argparse.RawDescriptionHelpFormatter, **kw)

    p = add("weights", help="Herfindahl index and weight entropy")
    p.add_argument("weights", nargs="*", type=float, help="portfolio weights summing to 1")
    p.add_argument("--csv", help="one-column CSV of weights")
    p.add_argument("--allow-zero", action="store_true", help="accept zero weights (0 log 0 = 0)")

    p = add("pdi", help="Portfolio Diversification Index of a covariance matrix")
    p.add_argument("covariance", help="square, header-free CSV covariance matrix")
    p.add_argument("--weights", help="one-column CSV of weights for the weighted PDI")

    p = add("entropy", help="diversification measure D of a density")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--dist", choices=("gaussian", "cauchy", "lognormal"))
    src.add_argument("--grid", help="two-column CSV: abscissa,density")
    p.add_argument("--sigma", type=float, default=1.0, help="Gaussian or log-normal scale")
    p.add_argument("--mean", type=float, default=0.0, help="Gaussian mean")
    p.add_argument("--gamma", type=float, default=1.0, help="Cauchy scale")
    p.add_argument("--x0", type=float, default=0.0, help="Cauchy location")
    p.add_argument("--nu", type=float, default=DEFAULT_NU, help="log-normal log expected value")

    p = add("overlay", help="diversification benefit of one option overlay")
    p.add_argument("overlay", choices=("put", "put-spread", "collar"))
    p.add_argument("--strike-pct", type=float, default=100.0, help="put strike, percent")
    p.add_argument("--upper-pct", type=float, default=100.0, help="put-spread upper strike, percent")
    p.add_argument("--lower-pct", type=float, default=None,
                   help="put-spread lower strike, percent (default upper - width)")
    p.add_argument("--call-pct", type=float, default=120.0, help="collar call strike, percent")
    p.add_argument("--grid-points", type=int, default=None,
                   help="initial Simpson intervals in log space (default 256, doubled until converged)")
    p.add_argument("--tol", type=float, default=1e-8, help="convergence tolerance in nats (default 1e-8)")
    _add_market(p)

    p = add("maxent", help="maximum-entropy density with given moments")
    p.add_argument("--variance", type=float, default=0.0625)
    p.add_argument("--skew", type=float, default=0.0)
    p.add_argument("--kurt", type=float, default=3.0)
    p.add_argument("--excess-kurtosis", action="store_true", help="read --kurt as excess kurtosis")

    p = add("figure", help="CSV sweeps for the overlay, maximum-entropy and weight-comparison figures")
    p.add_argument("figure", choices=("fig2", "fig3", "fig4", "fig5", "fig6", "fig7"))
    p.add_argument("--grid-points", type=int, default=None, help="points per sweep axis")
    p.add_argument("--strike-min", type=float, default=None, help="first strike, percent")
    p.add_argument("--strike-max", type=float, default=None, help="last strike, percent")
    _add_market(p, sigma_list=True)
    g = p.add_argument_group("fig5 (maximum entropy surface)")
    g.add_argument("--variance", type=float, default=0.0625)
    g.add_argument("--skew-min", type=float, default=-1.0)
    g.add_argument("--skew-max", type=float, default=1.0)
    g.add_argument("--kurt-min", type=float, default=2.0)
    g.add_argument("--kurt-max", type=float, default=6.0)
    g.add_argument("--excess-kurtosis", action="store_true")

    p = add("check", help="seeded randomized identity checks")
    p.add_argument("--cases", type=int, default=1000)
    return parser


def parse_config(argv: Sequence[str] | None = None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    output, fmt, seed = ns.pop("output"), ns.pop("fmt"), ns.pop("seed")
    return RunConfig(command, ns, output, fmt, seed)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
