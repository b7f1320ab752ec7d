"""Command-line entry point: ``qslab <subcommand> [options]``.

Every subcommand builds a list of records (or one document) and prints it
as JSON, CSV or an aligned table.  Exact rationals are printed as
``num/den`` and floats with 17 significant digits, so identical
invocations give byte-identical output.

Exit status is 0 on success, 1 when a check fails and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction

import numpy as np

from . import exact, ledger, limit, metrics, mgf, toll, verify

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2

MONTE_CARLO = {"simulate", "density", "fixed-point", "local-limit"}
FORMATS = ("json", "csv", "table")


class UsageError(ValueError):
    """Invalid option combination, detected before any computation."""


# --------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    """Parsed invocation.  Round-trips through :meth:`to_json`."""

    command: str
    n: int | None = None
    m: int | None = None
    N: int | None = None
    p: float | None = None
    reps: int | None = None
    seed: int | None = None
    lam: list[float] = field(default_factory=list)
    eps: float | None = None
    delta: float | None = None
    grid: list[float] = field(default_factory=lambda: [-1.5, 3.0, 451])
    seed_A: float = ledger.SEED_COEFFICIENT
    metric: str = "dp"
    scaling: str = "Y"
    method: str = "split"
    surrogate: str = "exact"
    suite: str = "all"
    n_max: int = exact.DEFAULT_N_MAX
    format: str = "json"
    cache_dir: str | None = None
    dps: int = 40

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> RunConfig:
        return cls(**json.loads(text))

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> RunConfig:
        names = {f.name for f in fields(cls)}
        kwargs = {k: v for k, v in vars(ns).items() if k in names and v is not None}
        if isinstance(kwargs.get("lam"), float):
            kwargs["lam"] = [kwargs["lam"]]
        if kwargs.get("cache_dir") is None:
            kwargs["cache_dir"] = os.environ.get(exact.CACHE_ENV) or None
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        def need(name, lo=None, hi=None):
            v = getattr(self, name)
            if v is None:
                raise UsageError(f"{self.command}: --{name.replace('_', '-')} is required")
            if lo is not None and v < lo:
                raise UsageError(f"{self.command}: --{name} must be >= {lo}")
            if hi is not None and v > hi:
                raise UsageError(f"{self.command}: --{name}={v} exceeds the cap {hi}")

        c = self.command
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")
        if c in MONTE_CARLO:
            need("seed", 0)
            need("reps", 1)
        if c in ("pmf", "moments", "toll"):
            need("n", 1 if c != "pmf" else 0, self.n_max if c == "pmf" else None)
        elif c == "bn":
            need("n", 1)
        elif c in ("ledger", "certify-d2"):
            need("N", 1)
        elif c == "dist":
            need("n", 1, self.n_max)
            need("m", 1, self.n_max)
            if self.metric == "dp":
                need("p", 1)
        elif c in ("simulate", "density"):
            need("n", 1)
        elif c == "fixed-point":
            if self.surrogate == "exact":
                need("n", 1, self.n_max)
            else:
                need("n", 1)
        elif c == "local-limit":
            need("n", 1, self.n_max)
            need("m", 1)
        elif c == "mgf":
            need("n", 1, self.n_max)
            if not self.lam:
                self.lam = list(mgf.LAMBDA_GRID)
        elif c == "ldp":
            need("n", 1, self.n_max)
            need("eps")
            if self.eps <= 0:
                raise UsageError("ldp: --eps must be positive")
            if any(v <= 0 for v in self.lam):
                raise UsageError("ldp: --lam must be positive")
            if not self.lam and self.n < 3:
                raise UsageError("ldp: lambda = ln ln n needs n >= 3; pass --lam")
        elif c == "verify":
            if self.suite not in (*verify.SUITES, "all"):
                raise UsageError(f"unknown suite {self.suite!r}")
            if self.suite in ("limit", "all") and self.seed is None:
                raise UsageError(f"verify --suite {self.suite}: --seed is required")
        if len(self.grid) != 3 or self.grid[2] < 2 or self.grid[1] <= self.grid[0]:
            raise UsageError("--grid takes LO HI POINTS with LO < HI and POINTS >= 2")
        if self.delta is not None and self.delta <= 0:
            raise UsageError("--delta must be positive")


# --------------------------------------------------------------------------
# output


def _fmt_float(x: float) -> str:
    if math.isfinite(x):
        return format(x, ".17g")
    return "inf" if x > 0 else "-inf" if x < 0 else "nan"


def _scalar(v):
    """Canonical text or JSON-native form of one value."""
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, Fraction):
        return exact.format_rational(v)
    if isinstance(v, (float, np.floating)):
        return _FloatText(_fmt_float(float(v)))
    return v


class _FloatText(str):
    """Marks a float already rendered with 17 significant digits."""


def _canonical(obj):
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    return _scalar(obj)


def dumps_json(obj) -> str:
    """JSON with floats written as bare 17-digit numbers.

    Non-finite floats become the strings ``"inf"``, ``"-inf"``, ``"nan"``.
    """
    marks: list[str] = []

    def mark(o):
        if isinstance(o, dict):
            return {k: mark(v) for k, v in o.items()}
        if isinstance(o, list):
            return [mark(v) for v in o]
        if isinstance(o, _FloatText):
            if o in ("inf", "-inf", "nan"):
                return str(o)
            marks.append(str(o))
            return f"\x00{len(marks) - 1}\x00"
        return o

    text = json.dumps(mark(_canonical(obj)), indent=2)
    for i, s in enumerate(marks):
        text = text.replace(f'"\\u0000{i}\\u0000"', s, 1)
    return text


def _cell(v) -> str:
    v = _scalar(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return json.dumps(_canonical(v), separators=(",", ":"))
    return str(v)


def render(records: list[dict], fmt: str, document=None) -> str:
    if fmt == "json":
        return dumps_json(document if document is not None else {"records": records}) + "\n"
    if not records:
        return ""
    header = list(records[0])
    rows = [[_cell(r.get(k)) for k in header] for r in records]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(lines) + "\n"


def _tag(record: dict, anchor: str, mode: str, seed=None) -> dict:
    record = dict(record)
    record["anchor"] = anchor
    record["mode"] = mode
    if seed is not None:
        record["seed"] = seed
    return record


# --------------------------------------------------------------------------
# subcommands; each returns (records, document or None, exit status)


def cmd_pmf(cfg):
    pmf = exact.exact_pmf(cfg.n)
    records = [_tag({"n": cfg.n, "k": k, "mass": m}, "exact-law", "exact") for k, m in pmf.items()]
    return records, None, EXIT_OK


def cmd_moments(cfg):
    n = cfg.n
    var = exact.variance_comparisons(n)
    rec = {
        "n": n,
        "mean": exact.mean_comparisons(n),
        "variance": var,
        "variance_Y": var / (n * n),
        "sd_Y": math.sqrt(var) / n,
    }
    return [_tag(rec, "mean-variance", "exact")], None, EXIT_OK


def cmd_toll(cfg):
    n = cfg.n
    records = [
        _tag({"n": n, "i": i, "c_discrete": c, "c_limit": toll.c_limit(i / n)}, "toll", "exact")
        for i, c in enumerate(toll.c_discrete_row(n), start=1)
    ]
    return records, None, EXIT_OK


def cmd_bn(cfg):
    lo = cfg.m if cfg.m is not None else cfg.n
    records = []
    for n in range(lo, cfg.n + 1):
        row = toll.b_n_exact(n, cfg.dps)
        rec = {
            "n": n,
            "b_n_squared": float(row.b_n_squared),
            "b_n": float(row.b_n),
            "n_b_n": float(n * row.b_n),
            "b_n_bound": float(row.lemma_bound),
            "holds": row.holds,
        }
        records.append(_tag(rec, "toll-error-lemma", "float"))
    status = EXIT_OK if all(r["holds"] for r in records) else EXIT_CHECK_FAILED
    return records, None, status


def cmd_ledger(cfg):
    L = ledger.build_ledger(cfg.N, cfg.dps)
    header, *rows = list(L.to_csv_rows())
    records = [_tag(dict(zip(header, r)), "d2-ledger", "float") for r in rows]
    return records, None, EXIT_OK


def cmd_certify(cfg):
    try:
        cert = ledger.certify_d2(cfg.N, cfg.seed_A)
    except (ledger.CertificationError, ledger.InvalidCoefficientError) as exc:
        doc = _tag({"N": cfg.N, "seed_A": cfg.seed_A, "error": str(exc), "passed": False},
                   "d2-theorem", "float")
        return [doc], doc, EXIT_CHECK_FAILED
    doc = _tag({**cert.to_dict(), "passed": cert.final_A < 2}, "d2-theorem", "float")
    records = [
        _tag({"step": i, "A_in": it["A_in"], "A_out": it["A_out"]}, "d2-refinement", "float")
        for i, it in enumerate(cert.iterations)
    ]
    return records, doc, EXIT_OK if doc["passed"] else EXIT_CHECK_FAILED


def cmd_dist(cfg):
    a = exact.normalized(cfg.n, cfg.scaling)
    b = exact.normalized(cfg.m, cfg.scaling)
    rec = {"n": cfg.n, "m": cfg.m, "scaling": cfg.scaling}
    if cfg.metric == "ks":
        rec["ks"] = metrics.ks_distance(a, b)
        return [_tag(rec, "ks-metric", "exact")], None, EXIT_OK
    p = cfg.p
    rec["p"] = int(p) if float(p).is_integer() else p
    exact_power = float(p).is_integer()
    if exact_power:
        rec["d_p_power"] = metrics.wasserstein_p_power(a, b, int(p))
    rec["d_p"] = metrics.wasserstein_p(a, b, p)
    return [_tag(rec, "dp-metric", "exact" if exact_power else "float")], None, EXIT_OK


def cmd_simulate(cfg):
    batch = limit.sample_path_lengths(cfg.n, cfg.reps, cfg.seed, method=cfg.method)
    doc = json.loads(batch.to_json())
    records = [
        _tag({"n": cfg.n, "count": k, "frequency": f}, "bst-representation", "monte-carlo", cfg.seed)
        for k, f in batch.histogram().items()
    ]
    return records, doc, EXIT_OK


def _grid(cfg):
    lo, hi, pts = cfg.grid
    return limit.default_grid(lo, hi, int(pts))


def _density(cfg, n):
    batch = limit.sample_path_lengths(n, cfg.reps, cfg.seed, method=cfg.method)
    return limit.density_window(limit.empirical_cdf(batch), _grid(cfg), cfg.delta)


def cmd_density(cfg):
    est = _density(cfg, cfg.n)
    header, *rows = list(est.csv_rows())
    records = [_tag(dict(zip(header, r)), "density-window", "monte-carlo", cfg.seed) for r in rows]
    return records, None, EXIT_OK


def cmd_fixed_point(cfg):
    if cfg.surrogate == "exact":
        sur = exact.normalized(cfg.n)
    else:
        sur = limit.empirical_cdf(limit.sample_path_lengths(cfg.n, cfg.reps, cfg.seed))
    resid = limit.fixed_point_residual(sur, cfg.reps, cfg.seed)
    rec = {"n": cfg.n, "surrogate": cfg.surrogate, "reps": cfg.reps, "ks_residual": resid}
    return [_tag(rec, "fixed-point", "monte-carlo", cfg.seed)], None, EXIT_OK


def cmd_local_limit(cfg):
    est = _density(cfg, cfg.m)
    records = [
        _tag({"n": cfg.n, **row}, "local-limit", "monte-carlo", cfg.seed)
        for row in limit.local_limit_probe(cfg.n, est)
    ]
    return records, None, EXIT_OK


def cmd_mgf(cfg):
    n = cfg.n
    atoms = exact.normalized(n)
    records = []
    for lam in cfg.lam:
        value = mgf.exact_mgf(atoms, lam)
        cor = mgf.corollary_bound(n, lam)
        rec = {
            "lambda": lam,
            "n": n,
            "exact_mgf": value,
            "homer_bound": mgf.homer_bound(lam),
            "corollary_bound": cor,
            "remark_bound": mgf.remark_bound(lam),
            "margin": cor - value,
        }
        records.append(_tag(rec, "mgf-bounds", "float"))
    status = EXIT_OK if all(r["margin"] >= 0 for r in records) else EXIT_CHECK_FAILED
    return records, None, status


def cmd_ldp(cfg):
    n = cfg.n
    tail = mgf.exact_tail(exact.exact_pmf(n), cfg.eps)
    lams = cfg.lam or [math.log(math.log(n))]
    records = []
    for lam in lams:
        bound = mgf.large_dev_bound(n, cfg.eps, lam)
        rec = {"n": n, "eps": cfg.eps, "lambda": lam, "exact_tail": tail, "bound": bound,
               "holds": exact.float_up(tail) <= bound}
        records.append(_tag(rec, "large-deviation", "float"))
    status = EXIT_OK if all(r["holds"] for r in records) else EXIT_CHECK_FAILED
    return records, None, status


def cmd_verify(cfg):
    reports = verify.run_suite(cfg.suite, cfg.seed)
    doc = {"suite": cfg.suite, "passed": all(r.passed for r in reports),
           "suites": [r.to_dict() for r in reports]}
    records = [
        {"suite": r.suite, "name": c.name, "passed": c.passed, "anchor": c.anchor, "mode": c.mode,
         "seed": c.seed}
        for r in reports
        for c in r.checks
    ]
    return records, doc, EXIT_OK if doc["passed"] else EXIT_CHECK_FAILED


COMMANDS = {
    "pmf": (cmd_pmf, "exact law of the comparison count X_n"),
    "moments": (cmd_moments, "exact mean and variance of X_n"),
    "toll": (cmd_toll, "discrete toll values C_n(i) beside C(i/n)"),
    "bn": (cmd_bn, "toll approximation error n b_n against its bound"),
    "ledger": (cmd_ledger, "recursive d2 bound table up to N"),
    "certify-d2": (cmd_certify, "certify d2(Y_n, Y) < A/sqrt(n)"),
    "dist": (cmd_dist, "d_p or KS distance between Y_n and Y_m"),
    "simulate": (cmd_simulate, "seeded sample batch of comparison counts"),
    "density": (cmd_density, "window density estimate from a sample batch"),
    "fixed-point": (cmd_fixed_point, "KS residual of the limit fixed-point equation"),
    "local-limit": (cmd_local_limit, "n P(X_n = k) against a density estimate"),
    "mgf": (cmd_mgf, "exact MGF of Y_n beside its explicit bounds"),
    "ldp": (cmd_ldp, "large deviation bound beside the exact tail"),
    "verify": (cmd_verify, "run a verification suite"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--n-max", type=int, default=exact.DEFAULT_N_MAX,
                        help="cap on n for exact laws (default %(default)s)")
    common.add_argument("--cache-dir", help=f"pmf cache directory (default ${exact.CACHE_ENV})")
    common.add_argument("--config-out", help="also write the parsed configuration as JSON here")

    parser = argparse.ArgumentParser(prog="qslab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = {name: sub.add_parser(name, parents=[common], help=h) for name, (_, h) in COMMANDS.items()}

    for name in ("pmf", "moments", "toll", "dist", "simulate", "density", "fixed-point",
                 "local-limit", "mgf", "ldp"):
        p[name].add_argument("--n", type=int)
    p["bn"].add_argument("--n", type=int, help="largest n")
    p["bn"].add_argument("--m", type=int, help="smallest n (default: only --n)")
    for name in ("bn", "ledger"):
        p[name].add_argument("--dps", type=int, default=40, help="mpmath working digits")
    for name in ("ledger", "certify-d2"):
        p[name].add_argument("--N", type=int, default=100)
    p["certify-d2"].add_argument("--seed-A", type=float, default=ledger.SEED_COEFFICIENT)
    p["dist"].add_argument("--m", type=int)
    p["dist"].add_argument("--p", type=float, default=2.0)
    p["dist"].add_argument("--metric", choices=("dp", "ks"), default="dp")
    p["dist"].add_argument("--scaling", choices=exact.SCALINGS, default="Y")
    for name in MONTE_CARLO:
        p[name].add_argument("--seed", type=int, help="required; there is no implicit entropy")
        p[name].add_argument("--reps", type=int, default=10**5)
    for name in ("simulate", "density", "local-limit"):
        p[name].add_argument("--method", choices=("split", "insert"), default="split")
    for name in ("density", "local-limit"):
        p[name].add_argument("--delta", type=float)
        p[name].add_argument("--grid", type=float, nargs=3, metavar=("LO", "HI", "POINTS"),
                             default=[-1.5, 3.0, 451])
    p["local-limit"].add_argument("--m", type=int, default=10**4, help="sample size n for the density")
    p["fixed-point"].add_argument("--surrogate", choices=("exact", "empirical"), default="exact")
    p["mgf"].add_argument("--lam", type=float, nargs="+", help="default: the fixed suite grid")
    p["ldp"].add_argument("--eps", type=float)
    p["ldp"].add_argument("--lam", type=float, nargs="+", help="default: ln ln n")
    p["verify"].add_argument("--suite", choices=(*verify.SUITES, "all"), default="all")
    p["verify"].add_argument("--seed", type=int)
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.from_namespace(ns)
    except UsageError as exc:
        print(f"qslab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if ns.config_out:
        with open(ns.config_out, "w") as fh:
            fh.write(cfg.to_json() + "\n")
    exact.set_default_cache(exact.PmfCache(max(cfg.n_max, limit.DEFAULT_LEAF_CUTOFF), cfg.cache_dir))
    try:
        records, document, status = COMMANDS[cfg.command][0](cfg)
    except (exact.ResourceLimitError, ValueError) as exc:
        print(f"qslab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    stdout.write(render(records, cfg.format, document))
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
