"""Command-line experiment runner.

Subcommands:

* share / reconstruct: split a secret into shares and put it back together.
* analyze: compute every closed-form bound for one configuration.
* verify: sweep a parameter axis, compare bounds against the exact
  enumeration oracle, and emit one CSV row per sweep point.
* plot: render a verify CSV as a log-scale SVG chart.

Experiments are driven by a JSON config file; any field can be overridden
on the command line with repeated --set path=value flags (flags win).
Outputs are deterministic: rows are computed in axis order, floats are
printed with 12 significant digits, and plots carry no timestamps, so a
fixed config and seed reproduce byte-identical files. The exact-enumeration
work cap can be raised or lowered via the SHAMIRLEAK_ENUM_CAP environment
variable.

Exit codes: 0 success, 1 verification failure (some margin < -1e-9),
2 configuration error, 3 enumeration cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from .bitexpand import expand
from .bounds import bound_bitwise, bound_sum, report
from .channels import (
    Channel,
    EnumerationCapError,
    LeakageProfile,
    bsc,
    bsc_eps,
    channel_leakage_rate,
    identity_channel,
    per_bit_channel,
    q_from_eps,
)
from .field import FieldSpec
from .infotheory import mutual_information
from .oracle import (
    _bitwise_joint,
    leakage_matrix,
    markov_gap,
    sampled_secret_distributions,
)
from .scheme import (
    LinearScheme,
    ShamirParams,
    ThresholdError,
    all_ones_scheme,
    reconstruct,
    share,
)

MARGIN_TOL = 1e-9
PLOT_FLOOR = 1e-12

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_CONFIG = 2
EXIT_CAP = 3


class ConfigError(ValueError):
    """A config file or flag override failed validation."""


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# ----------------------------------------------------------------------
# Config handling
# ----------------------------------------------------------------------

def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}")
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"config parse error in {path} at line {e.lineno} column {e.colno}: {e.msg}"
        )


def _apply_overrides(cfg: dict, overrides: list[str]) -> dict:
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like path=value, got {item!r}")
        path, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = cfg
        keys = path.split(".")
        for k in keys[:-1]:
            node = node.setdefault(k, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override path {path!r} crosses a non-object field")
        node[keys[-1]] = value
    return cfg


def _require(cfg: dict, key: str, where: str):
    if key not in cfg:
        raise ConfigError(f"missing required field {where}{key}")
    return cfg[key]


def _build_field(cfg: dict, where: str) -> FieldSpec:
    try:
        return FieldSpec.from_config(cfg)
    except (KeyError, TypeError):
        raise ConfigError(f"{where} must carry an integer 'l' (and optional 'poly')")
    except ValueError as e:
        raise ConfigError(f"{where}: {e}")


def _build_scheme(cfg: dict) -> LinearScheme:
    kind = _require(cfg, "kind", "scheme.")
    spec = _build_field(_require(cfg, "field", "scheme."), "scheme.field")
    n = int(_require(cfg, "N", "scheme."))
    try:
        if kind == "all_ones":
            return all_ones_scheme(n, spec)
        if kind == "shamir":
            t_raw = _require(cfg, "t", "scheme.")
            # "N" lets the threshold track the party count during N sweeps
            t = n if t_raw == "N" else int(t_raw)
            if "gammas" in cfg:
                params = ShamirParams(spec, n, t, tuple(int(g) for g in cfg["gammas"]))
            else:
                params = ShamirParams.with_default_points(spec, n, t)
            return LinearScheme.from_shamir(params)
    except ValueError as e:
        raise ConfigError(f"scheme: {e}")
    raise ConfigError(f"scheme.kind must be 'shamir' or 'all_ones', got {kind!r}")


def _build_channel(cfg: dict, l: int, where: str) -> Channel:
    kind = _require(cfg, "kind", where + ".")
    try:
        if kind == "bsc":
            return per_bit_channel(bsc(float(_require(cfg, "q", where + "."))), l)
        if kind == "matrix":
            ch = Channel(np.array(_require(cfg, "rows", where + "."), dtype=float))
            if ch.input_size != 1 << l:
                raise ValueError(
                    f"matrix has {ch.input_size} input rows, field needs {1 << l}"
                )
            return ch
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"{where}: {e}")
    raise ConfigError(f"{where}.kind must be 'bsc' or 'matrix', got {kind!r}")


def _channel_eps(cfg: dict, l: int, where: str) -> float:
    """Per-bit leakage rate of one configured channel."""
    if cfg.get("kind") == "bsc":
        return bsc_eps(float(_require(cfg, "q", where + ".")))
    return channel_leakage_rate(_build_channel(cfg, l, where), l)


def _per_share_channel_cfgs(cfg: dict, n: int) -> list[dict]:
    if "channels" in cfg:
        lst = cfg["channels"]
        if not isinstance(lst, list) or len(lst) != n:
            raise ConfigError(f"channels must list exactly {n} per-share entries")
        return lst
    return [dict(_require(cfg, "channel", ""))] * n


@dataclass(frozen=True)
class SweepRow:
    axis: float
    bound: float
    exact: float

    @property
    def margin(self) -> float:
        return self.bound - self.exact


# ----------------------------------------------------------------------
# Exact values for one sweep point
# ----------------------------------------------------------------------

def _secret_dists(cfg: dict, q: int) -> list[np.ndarray]:
    mode = cfg.get("mode", "uniform")
    if mode == "uniform":
        return [np.full(q, 1.0 / q)]
    if mode == "point":
        value = int(_require(cfg, "value", "secret."))
        if not 0 <= value < q:
            raise ConfigError(f"secret.value {value} outside the field")
        p = np.zeros(q)
        p[value] = 1.0
        return [p]
    if mode == "dirichlet":
        trials = int(cfg.get("trials", 50))
        seed = int(_require(cfg, "seed", "secret."))
        return sampled_secret_distributions(q, trials, seed)
    raise ConfigError(f"secret.mode must be uniform|point|dirichlet, got {mode!r}")


def _exact_point(
    scheme: LinearScheme,
    channels: list[Channel],
    t_prime: int,
    dists: list[np.ndarray],
    per_bit: bool,
) -> float:
    """Worst observed exact leakage at one sweep point.

    Colluders are the first t_prime parties and see their shares through
    identity channels. per_bit selects max over secret bits of I(bit; Z);
    otherwise I(secret; Z)/l.
    """
    chans = list(channels)
    for idx in range(t_prime):
        chans[idx] = identity_channel(scheme.spec.order)
    cond = leakage_matrix(scheme, chans)
    worst = 0.0
    for p in dists:
        joint = p[:, np.newaxis] * cond
        if per_bit:
            for i in range(scheme.spec.l):
                worst = max(worst, mutual_information(_bitwise_joint(joint, i)))
        else:
            worst = max(worst, mutual_information(joint) / scheme.spec.l)
    return worst


def _swept_configs(cfg: dict) -> list[tuple[float, dict]]:
    """Expand the sweep axis into (axis value, effective config) pairs."""
    sweep = _require(cfg, "sweep", "")
    axis = _require(sweep, "axis", "sweep.")
    values = _require(sweep, "values", "sweep.")
    if not isinstance(values, list) or len(values) == 0:
        raise ConfigError("sweep.values must be a nonempty list")
    out = []
    for v in sorted(values):
        point = json.loads(json.dumps(cfg))  # deep copy, config stays JSON-shaped
        if axis == "N":
            point["scheme"]["N"] = int(v)
            point["scheme"].pop("gammas", None)
        elif axis == "q":
            if point.get("channel", {}).get("kind") != "bsc":
                raise ConfigError("sweep axis 'q' needs a bsc channel config")
            point["channel"]["q"] = float(v)
        elif axis == "eps":
            if point.get("channel", {}).get("kind") != "bsc":
                raise ConfigError("sweep axis 'eps' needs a bsc channel config")
            point["channel"]["q"] = q_from_eps(float(v))
        elif axis == "t_prime":
            point["t_prime"] = int(v)
        else:
            raise ConfigError(f"sweep.axis must be N|q|eps|t_prime, got {axis!r}")
        out.append((float(v), point))
    return out


def _verify_rows(cfg: dict) -> tuple[list[SweepRow], list[str]]:
    """All sweep rows plus warnings for rows skipped at the enumeration cap."""
    mode = cfg.get("mode", "bitwise")
    rows: list[SweepRow] = []
    warnings: list[str] = []

    if mode == "markov":
        grids = _require(cfg, "markov", "")
        ks = [int(k) for k in _require(grids, "k_values", "markov.")]
        qs = [float(q) for q in _require(grids, "q_values", "markov.")]
        alphas = [float(a) for a in _require(grids, "alpha_values", "markov.")]
        idx = 0
        for k in ks:
            for q in qs:
                for alpha in alphas:
                    idx += 1
                    gap_mi, gap_markov = markov_gap(k, q, alpha)
                    rows.append(SweepRow(float(idx), 0.0, max(gap_mi, gap_markov)))
        return rows, warnings

    if mode not in ("bitwise", "sum"):
        raise ConfigError(f"mode must be bitwise|sum|markov, got {mode!r}")

    for axis_value, point in _swept_configs(cfg):
        try:
            scheme = _build_scheme(_require(point, "scheme", ""))
            l = scheme.spec.l
            t_prime = int(point.get("t_prime", 0))
            if not 0 <= t_prime < scheme.t:
                raise ConfigError(f"t_prime={t_prime} must satisfy 0 <= t' < t")
            chan_cfgs = _per_share_channel_cfgs(point, scheme.N)
            channels = [
                _build_channel(c, l, f"channels[{i}]") for i, c in enumerate(chan_cfgs)
            ]
            honest_eps = [
                _channel_eps(c, l, f"channels[{i}]")
                for i, c in enumerate(chan_cfgs)
                if i >= t_prime
            ]
            dists = _secret_dists(point.get("secret", {}), scheme.spec.order)
            if mode == "bitwise":
                n_tilde = expand(scheme.recovery_coefficients, scheme.spec).min_summands
                bound = bound_bitwise(n_tilde, t_prime, max(honest_eps))
                exact = _exact_point(scheme, channels, t_prime, dists, per_bit=True)
            else:
                profile = LeakageProfile(
                    tuple(honest_eps), l, scheme.N, scheme.t, t_prime
                )
                bound = bound_sum(profile)
                exact = _exact_point(scheme, channels, t_prime, dists, per_bit=False)
            rows.append(SweepRow(axis_value, bound, exact))
        except EnumerationCapError as e:
            warnings.append(f"axis={_fmt(axis_value)} skipped: {e}")
    return rows, warnings


def _write_csv(rows: list[SweepRow], stream) -> None:
    stream.write("axis,bound,exact,margin\n")
    for r in rows:
        stream.write(
            f"{_fmt(r.axis)},{_fmt(r.bound)},{_fmt(r.exact)},{_fmt(r.margin)}\n"
        )


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------

def _parse_field_flag(text: str) -> FieldSpec:
    cfg = {}
    for part in text.split(","):
        if "=" not in part:
            raise ConfigError(f"--field expects l=...,poly=..., got {text!r}")
        k, v = part.split("=", 1)
        cfg[k.strip()] = int(v, 0)
    return _build_field(cfg, "--field")


def cmd_share(args) -> int:
    spec = _parse_field_flag(args.field)
    if args.gammas:
        gammas = tuple(int(g, 0) for g in args.gammas.split(","))
    else:
        gammas = tuple(range(1, args.n + 1))
    params = ShamirParams(spec, args.n, args.t, gammas)
    coeffs = None
    if args.coeffs is not None:
        coeffs = tuple(int(c, 0) for c in args.coeffs.split(",")) if args.coeffs else ()
    shares = share(args.secret, params, coeffs=coeffs, seed=args.seed)
    payload = {
        "field": spec.to_config(),
        "N": params.N,
        "t": params.t,
        "gammas": list(params.gammas),
        "shares": list(shares),
    }
    text = json.dumps(payload, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    try:
        with open(args.share_file) as fh:
            payload = json.load(fh)
        spec = _build_field(payload["field"], "share file field")
        params = ShamirParams(
            spec, int(payload["N"]), int(payload["t"]),
            tuple(int(g) for g in payload["gammas"]),
        )
        pairs = list(zip(payload["gammas"], payload["shares"]))
    except (OSError, KeyError, TypeError, json.JSONDecodeError) as e:
        raise ConfigError(f"unreadable share file {args.share_file}: {e}")
    if args.use:
        picked = []
        for tok in args.use.split(","):
            i = int(tok)
            if not 1 <= i <= len(pairs):
                raise ConfigError(f"--use index {i} out of range 1..{len(pairs)}")
            picked.append(pairs[i - 1])
        pairs = picked
    secret = reconstruct(pairs, params)
    print(secret)
    return EXIT_OK


def _load_experiment(args) -> dict:
    cfg = _load_config(args.config) if args.config else {}
    return _apply_overrides(cfg, args.set or [])


def cmd_analyze(args) -> int:
    cfg = _load_experiment(args)
    scheme = _build_scheme(_require(cfg, "scheme", ""))
    l = scheme.spec.l
    t_prime = int(cfg.get("t_prime", 0))
    chan_cfgs = _per_share_channel_cfgs(cfg, scheme.N)
    honest_eps = tuple(
        _channel_eps(c, l, f"channels[{i}]")
        for i, c in enumerate(chan_cfgs)
        if i >= t_prime
    )
    try:
        profile = LeakageProfile(honest_eps, l, scheme.N, scheme.t, t_prime)
    except ValueError as e:
        raise ConfigError(str(e))
    n_tilde = expand(scheme.recovery_coefficients, scheme.spec).min_summands
    rep = report(
        profile,
        scheme,
        n_tilde,
        bsc_leakage=all(c.get("kind") == "bsc" for c in chan_cfgs),
        uniform_secret=cfg.get("secret", {}).get("mode", "uniform") == "uniform",
    )
    text = rep.to_json() + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load_experiment(args)
    rows, warnings = _verify_rows(cfg)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    out_path = args.output or cfg.get("output")
    buf = io.StringIO()
    _write_csv(rows, buf)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    svg_path = args.svg or cfg.get("svg")
    if svg_path and rows:
        _render_svg([(r.axis, r.bound, r.exact, r.margin) for r in rows], svg_path)
    if not rows:
        print("no rows computed: every sweep point exceeded the cap", file=sys.stderr)
        return EXIT_CAP
    worst = min(r.margin for r in rows)
    if worst < -MARGIN_TOL:
        print(f"FAIL: worst margin {_fmt(worst)} < -{MARGIN_TOL}", file=sys.stderr)
        return EXIT_VERIFY_FAIL
    print(f"PASS: {len(rows)} rows, worst margin {_fmt(worst)}", file=sys.stderr)
    return EXIT_OK


def _read_rows(path: str) -> list[tuple[float, float, float, float]]:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ConfigError(f"{path}: empty CSV")
            if header != ["axis", "bound", "exact", "margin"]:
                raise ConfigError(
                    f"{path}: expected header axis,bound,exact,margin, got {','.join(header)}"
                )
            rows = []
            for lineno, rec in enumerate(reader, start=2):
                if len(rec) != 4:
                    raise ConfigError(f"{path}: row {lineno} has {len(rec)} fields, want 4")
                try:
                    rows.append(tuple(float(x) for x in rec))
                except ValueError:
                    raise ConfigError(f"{path}: row {lineno} is not numeric: {rec}")
    except OSError as e:
        raise ConfigError(f"cannot read CSV {path}: {e}")
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    return rows


def _render_svg(rows: list[tuple[float, float, float, float]], out_path: str) -> None:
    """Log-scale bound-vs-exact chart, byte-stable across runs."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "shamirleak"
    plt.rcParams["svg.fonttype"] = "none"  # keep labels as searchable text
    xs = [r[0] for r in rows]
    clamped = False

    def floor(vals):
        nonlocal clamped
        out = []
        for v in vals:
            if v < PLOT_FLOOR:
                clamped = True
                out.append(PLOT_FLOOR)
            else:
                out.append(v)
        return out

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(xs, floor([r[1] for r in rows]), marker="o", label="bound")
    ax.plot(xs, floor([r[2] for r in rows]), marker="s", label="exact")
    ax.set_yscale("log")
    ax.set_xlabel("sweep axis")
    ax.set_ylabel("bits")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    if clamped:
        fig.text(0.01, 0.01, f"values below {PLOT_FLOOR:g} shown at the floor", fontsize=7)
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def cmd_plot(args) -> int:
    _render_svg(_read_rows(args.csv), args.output)
    return EXIT_OK


# ----------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shamirleak",
        description="Shamir secret sharing with statistical leakage analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("share", help="split a secret into shares")
    p.add_argument("--secret", type=lambda s: int(s, 0), required=True)
    p.add_argument("--n", type=int, required=True, help="number of parties")
    p.add_argument("--t", type=int, required=True, help="reconstruction threshold")
    p.add_argument("--field", required=True, help="e.g. l=3,poly=0b1011")
    p.add_argument("--gammas", help="comma-separated evaluation points (default 1..N)")
    p.add_argument("--coeffs", help="comma-separated polynomial coefficients")
    p.add_argument("--seed", type=int, help="seed for random coefficients")
    p.add_argument("-o", "--output", help="write share file here (default stdout)")
    p.set_defaults(func=cmd_share)

    p = sub.add_parser("reconstruct", help="recover the secret from a share file")
    p.add_argument("share_file")
    p.add_argument("--use", help="comma-separated 1-based share indices (default all)")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("analyze", help="closed-form bounds for one configuration")
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--set", action="append", metavar="PATH=VALUE",
                   help="override a config field (repeatable, flags win)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="sweep bounds against the exact oracle")
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--set", action="append", metavar="PATH=VALUE")
    p.add_argument("-o", "--output", help="CSV path (default stdout)")
    p.add_argument("--svg", help="also render the sweep chart here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="render a verify CSV as SVG")
    p.add_argument("csv")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except EnumerationCapError as e:
        print(f"resource cap: {e}", file=sys.stderr)
        return EXIT_CAP
    except (ThresholdError, ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
