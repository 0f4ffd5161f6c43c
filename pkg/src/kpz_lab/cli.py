"""Command-line surface: exact-distribution tables, simulations, comparisons.

Four subcommands:

* ``dist``      tabulate an exact CDF (Tracy-Widom GUE, the finite-time
                crossover family, its spatial edge variant, or the Gaussian
                baseline) on an s-grid, as CSV.
* ``simulate``  draw exclusion-process heights or polymer partition values;
                raw samples or a rescaled ECDF table, as CSV.
* ``compare``   sup-norm / KS distance between two emitted files.
* ``selftest``  reduced-size run of every module's internal checks.

All tables are CSV with a ``# kpz-lab format v1`` first line, '.' decimal
point, LF line endings and 12 significant digits; files are written
atomically (temp file in the target directory, then rename).  Exit codes:
0 success, 2 validation error, 3 numerical-certificate failure, 4 resource
bound.  A plain ``key=value`` config file can supply defaults for any long
flag; explicit flags win.
"""

import argparse
import math
import os
import sys
import tempfile

import numpy as np

from . import asep_exact
from . import asep_sim
from . import distributions
from . import fredholm
from . import polymer
from . import quadrature
from . import special

FORMAT_LINE = "# kpz-lab format v1"

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_RESOURCE = 4

# ---------------------------------------------------------------------------
# table I/O


def _fmt(v):
    return "%.12g" % (float(v),)


def write_table(path, header, xs, ys):
    """Emit a two-column CSV table (atomically when path is a file)."""
    lines = [FORMAT_LINE, header]
    lines.extend("%s,%s" % (_fmt(a), _fmt(b)) for a, b in zip(xs, ys))
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_table(path):
    """Parse a two-column CSV table; returns (header, xs, ys)."""
    header = None
    xs, ys = [], []
    with open(path, "r") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line
                continue
            cells = line.split(",")
            if len(cells) != 2:
                raise ValueError("%s: malformed row %r" % (path, line))
            xs.append(float(cells[0]))
            ys.append(float(cells[1]))
    if header is None or not xs:
        raise ValueError("%s: no table found" % (path,))
    return header, np.array(xs), np.array(ys)


def _grid(s_min, s_max, step):
    if step <= 0:
        raise ValueError("step must be positive")
    if s_max < s_min:
        raise ValueError("s-max must not be below s-min")
    count = int(math.floor((s_max - s_min) / step + 1e-9)) + 1
    if count > 100_000:
        raise ValueError("resource bound: grid would have %d points" % count)
    return s_min + step * np.arange(count)


# ---------------------------------------------------------------------------
# option plumbing: flag > config file > builtin default


def _load_config(path):
    cfg = {}
    if path is None:
        return cfg
    with open(path, "r") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError("config: expected key=value, got %r" % line)
            key, _, val = line.partition("=")
            cfg[key.strip()] = val.strip()
    return cfg


class Options:
    def __init__(self, namespace, defaults):
        self._ns = namespace
        self._cfg = _load_config(getattr(namespace, "config", None))
        self._defaults = defaults

    def get(self, name):
        val = getattr(self._ns, name)
        if val is not None:
            return val
        conv, default = self._defaults[name]
        raw = self._cfg.get(name.replace("_", "-"))
        if raw is None:
            return default
        if conv is bool:
            return raw.lower() in ("1", "true", "yes", "on")
        return conv(raw)


# ---------------------------------------------------------------------------
# dist


_DIST_DEFAULTS = {
    "s_min": (float, -5.0),
    "s_max": (float, 3.0),
    "step": (float, 0.25),
    "method": (str, "fredholm"),
    "route": (str, "kernel"),
    "t": (float, 1.0),
    "x": (float, 0.0),
    "resolution": (int, 0),
    "output": (str, None),
}


def _cmd_dist(ns):
    opt = Options(ns, _DIST_DEFAULTS)
    grid = _grid(opt.get("s_min"), opt.get("s_max"), opt.get("step"))
    res = opt.get("resolution")
    kind = ns.kind
    if kind == "gaussian":
        vals = [special.gaussian_cdf(s) for s in grid]
    elif kind == "tw-gue":
        method = opt.get("method")
        if method == "fredholm":
            n = res if res else 80
            vals = [distributions.tw_gue_fredholm(s, n=n) for s in grid]
        elif method == "painleve":
            vals = [distributions.tw_gue_painleve(s) for s in grid]
        else:
            raise ValueError("method must be fredholm or painleve")
    elif kind == "kpz-crossover":
        t = opt.get("t")
        route = opt.get("route")
        if route == "kernel":
            n_x = res if res else 80
            vals = [distributions.kpz_crossover_cdf(s, t, n_x=n_x)
                    for s in grid]
        elif route == "csc":
            vals = [distributions.kpz_crossover_cdf_csc(s, t) for s in grid]
        else:
            raise ValueError("route must be kernel or csc")
    else:  # kpz-edge
        n_x = res if res else 96
        vals = [distributions.kpz_edge_cdf(s, opt.get("t"), opt.get("x"),
                                           n_x=n_x)
                for s in grid]
    write_table(opt.get("output"), "s,value", grid, vals)
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate


_SIM_ASEP_DEFAULTS = {
    "geometry": (str, "wedge"),
    "gamma": (float, 1.0),
    "t": (float, 1.0),
    "x": (int, 0),
    "samples": (int, 100),
    "seed": (int, 0),
    "ecdf": (bool, False),
    "output": (str, None),
}

_SIM_POLYMER_DEFAULTS = {
    "length": (int, 50),
    "beta": (float, 0.3),
    "weights": (str, "normal"),
    "samples": (int, 100),
    "seed": (int, 0),
    "output": (str, None),
}


def _cmd_simulate(ns):
    if ns.kind == "asep":
        opt = Options(ns, _SIM_ASEP_DEFAULTS)
        geometry = opt.get("geometry")
        gamma = opt.get("gamma")
        t = opt.get("t")
        x = opt.get("x")
        samples = opt.get("samples")
        seed = opt.get("seed")
        if samples < 1:
            raise ValueError("samples must be positive")
        if not 0.0 < gamma <= 1.0:
            raise ValueError("gamma must lie in (0, 1]")
        if t < 0:
            raise ValueError("t must be nonnegative")
        t_sim = t / gamma
        n_sites = 2 * (abs(x) + int(math.ceil(4 * t_sim)) + 50) + 1
        if samples * n_sites * t_sim > 2e10:
            raise ValueError("resource bound: ~%.2g total events requested"
                             % (samples * n_sites * t_sim))
        if opt.get("ecdf"):
            vals = asep_sim.empirical_onepoint(geometry, gamma, t, x,
                                               samples, seed)
            uniq, counts = np.unique(vals, return_counts=True)
            ecdf = np.cumsum(counts) / float(samples)
            write_table(opt.get("output"), "s,ecdf", uniq, ecdf)
        else:
            raw = asep_sim.sample_heights(geometry, gamma, t_sim, x,
                                          samples, seed)
            write_table(opt.get("output"), "index,value",
                        np.arange(samples), raw)
        return EXIT_OK

    opt = Options(ns, _SIM_POLYMER_DEFAULTS)
    n = opt.get("length")
    beta = opt.get("beta")
    weights = opt.get("weights")
    samples = opt.get("samples")
    seed = opt.get("seed")
    if samples < 1:
        raise ValueError("samples must be positive")
    if n < 0:
        raise ValueError("length must be nonnegative")
    if samples * (n + 1) ** 2 > 4e9:
        raise ValueError("resource bound: length^2 x samples too large")
    vals = []
    for r in range(samples):
        field = polymer.DisorderField(
            n=n, dist=weights, seed=(seed * 1_000_003 + r) % 2 ** 63)
        vals.append(polymer.martingale_W(field, n, beta))
    write_table(opt.get("output"), "index,value", np.arange(samples), vals)
    return EXIT_OK


# ---------------------------------------------------------------------------
# compare


def _classify(header):
    first = header.split(",")[0].strip().lower()
    return "samples" if first == "index" else "table"


def _ecdf_at(sorted_vals, points):
    return np.searchsorted(sorted_vals, points, side="right") \
        / float(sorted_vals.size)


def _step_at(xs, ys, points):
    idx = np.searchsorted(xs, points, side="right") - 1
    out = np.where(idx >= 0, ys[np.clip(idx, 0, ys.size - 1)], 0.0)
    return out


def _cmd_compare(ns):
    header_a, xa, ya = read_table(ns.file_a)
    header_b, xb, yb = read_table(ns.file_b)
    kind_a, kind_b = _classify(header_a), _classify(header_b)
    print("rows: %d vs %d" % (xa.size, xb.size))

    if kind_a == "table" and kind_b == "table":
        lo = max(xa.min(), xb.min())
        hi = min(xa.max(), xb.max())
        if lo > hi:
            raise ValueError("tables cover disjoint s-ranges")
        mask_a = (xa >= lo) & (xa <= hi)
        mask_b = (xb >= lo) & (xb <= hi)
        # evaluate on the sparser grid, interpolate the denser table
        if mask_a.sum() <= mask_b.sum():
            pts, ref = xa[mask_a], ya[mask_a]
            other = np.interp(pts, xb, yb)
        else:
            pts, ref = xb[mask_b], yb[mask_b]
            other = np.interp(pts, xa, ya)
        sup = float(np.max(np.abs(ref - other))) if pts.size else 0.0
        print("sup-norm distance: %s" % _fmt(sup))
        is_ecdf_a = "ecdf" in header_a
        is_ecdf_b = "ecdf" in header_b
        if is_ecdf_a != is_ecdf_b:
            # empirical-vs-exact pair: KS against the exact table's grid,
            # with the ECDF extended by 0/1 outside its sample range
            if is_ecdf_a:
                ex, ey, sx, sy = xb, yb, xa, ya
            else:
                ex, ey, sx, sy = xa, ya, xb, yb
            emp = _step_at(sx, sy, ex)
            ks = float(np.max(np.abs(emp - ey)))
            print("KS distance: %s" % _fmt(ks))
        return EXIT_OK

    if kind_a == "samples" and kind_b == "samples":
        a = np.sort(ya)
        b = np.sort(yb)
        pts = np.concatenate([a, b])
        ks = float(np.max(np.abs(_ecdf_at(a, pts) - _ecdf_at(b, pts))))
        print("KS distance: %s" % _fmt(ks))
        return EXIT_OK

    # one sample file, one table: classic one-sample KS on the table grid
    if kind_a == "samples":
        vals, tx, ty = np.sort(ya), xb, yb
    else:
        vals, tx, ty = np.sort(yb), xa, ya
    ks = float(np.max(np.abs(_ecdf_at(vals, tx) - ty)))
    print("KS distance: %s" % _fmt(ks))
    return EXIT_OK


# ---------------------------------------------------------------------------
# selftest


def _st_quadrature():
    nodes, weights = quadrature.interval_rule(0.0, 1.0, 12)
    val = float(np.sum(weights * nodes ** 23))
    assert abs(val - 1.0 / 24.0) < 1e-14, val


def _st_special():
    want = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
    assert abs(special.airy_ai(0.0) - want) < 1e-13
    assert abs(special.gaussian_cdf(0.0) - 0.5) < 1e-15
    assert abs(special.log_gamma(5.0).real - math.log(24.0)) < 1e-12


def _st_fredholm_certificate():
    value, delta = fredholm.resolution_certificate(
        lambda n: distributions.tw_gue_fredholm(0.0, n=n), 40)
    assert delta < 1e-8, delta
    assert abs(value - 0.969372828355) < 1e-9, value


def _st_crossover_routes():
    a = distributions.kpz_crossover_cdf(0.0, 1.0, n_x=64, t_points=8)
    b = distributions.kpz_crossover_cdf_csc(0.0, 1.0, points=12)
    assert abs(a - b) < 1e-6, (a, b)


def _st_asep_exact_short_time():
    params = asep_exact.AsepParams.from_gamma(0.5)
    t = 0.01
    val = asep_exact.asep_height_cdf(params, t, 0, 2, sizes=(96, 64, 64))
    assert abs(val / (params.q * t) - 1.0) < 0.03, val


def _st_asep_sim_microscopic():
    env = asep_sim.build_environment((-40, 40), 20.0, 0.25, 0.75, seed=5)
    state = asep_sim.init_geometry("wedge", (-40, 40), seed=5)
    out = asep_sim.evolve(state, env, 20.0, debug=True)  # raises on drift
    assert out.flux > 0


def _st_asep_engine_agreement():
    t_sim = 2.0
    half = int(math.ceil(4 * t_sim)) + 50
    ref = np.empty(150)
    for r in range(150):
        env = asep_sim.build_environment((-half, half), t_sim, 0.25, 0.75,
                                         seed=3000 + r)
        s0 = asep_sim.init_geometry("wedge", (-half, half), seed=0)
        ref[r] = asep_sim.height(asep_sim.evolve(s0, env, t_sim), 0)
    bat = asep_sim.sample_heights("wedge", 0.5, t_sim, 0, 600, seed=99)
    a, b = np.sort(ref), np.sort(bat.astype(float))
    pts = np.concatenate([a, b])
    ks = float(np.max(np.abs(_ecdf_at(a, pts) - _ecdf_at(b, pts))))
    assert ks < 0.15, ks


def _st_gartner_identity_and_canary():
    par = asep_sim.gartner_params(0.01)
    for s1 in (-1, 1):
        for s2 in (-1, 1):
            assert asep_sim.gartner_identity_check(par, (s1, s2)) < 1e-12
    import dataclasses
    bad = dataclasses.replace(par, lambda_eps=par.lambda_eps + 1e-6)
    worst = max(asep_sim.gartner_identity_check(bad, (s1, s2))
                for s1 in (-1, 1) for s2 in (-1, 1))
    assert worst > 1e-10, worst  # the identity must detect a wrong slope


def _st_hopf_cole_normalization():
    eps = 1e-3
    par = asep_sim.gartner_params(eps)
    state = asep_sim.init_geometry("wedge", (-1000, 1000), seed=0)
    z = 0.5 / math.sqrt(eps) \
        * np.exp(-par.lambda_eps * asep_sim.height_profile(state))
    assert abs(eps * z.sum() - 1.0) < 0.05


def _st_polymer_transfer():
    field = polymer.DisorderField(n=10, dist="exponential", seed=3)
    log_tr = polymer.partition_transfer(field, 10, 0.7).log_value(2) \
        + 10 * math.log(2.0)
    log_en = polymer.partition_enumerate(field, 10, 2, 0.7, log=True)
    assert abs(math.expm1(log_tr - log_en)) < 1e-12


def _st_polymer_endpoint():
    field = polymer.DisorderField(n=12, dist="normal", seed=4)
    _, probs = polymer.endpoint_law(field, 12, 0, 5, 0.8)
    assert abs(probs.sum() - 1.0) < 1e-12


def _st_polymer_martingale():
    field = polymer.DisorderField(n=60, dist="normal", seed=6)
    assert abs(polymer.martingale_W(field, 60, 0.0) - 1.0) < 1e-13
    assert polymer.martingale_W(field, 60, 0.4) > 0.0


def _st_table_roundtrip():
    import io
    xs = np.array([-1.0, 0.0, 2.5])
    ys = np.array([0.1234567890123, 0.5, 1.0 / 3.0])
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "t.csv")
        write_table(path, "s,value", xs, ys)
        _, rx, ry = read_table(path)
        write_table(path + "2", "s,value", rx, ry)
        with open(path, "rb") as fa, open(path + "2", "rb") as fb:
            assert fa.read() == fb.read()


def _st_simulation_determinism():
    a = asep_sim.sample_heights("brownian", 0.5, 1.5, 0, 64, seed=12)
    b = asep_sim.sample_heights("brownian", 0.5, 1.5, 0, 64, seed=12)
    assert np.array_equal(a, b)


_SELFTEST = [
    ("quadrature-exactness", _st_quadrature),
    ("special-functions", _st_special),
    ("fredholm-certificate", _st_fredholm_certificate),
    ("crossover-route-agreement", _st_crossover_routes),
    ("asep-exact-short-time", _st_asep_exact_short_time),
    ("asep-sim-microscopic", _st_asep_sim_microscopic),
    ("asep-engine-agreement", _st_asep_engine_agreement),
    ("gartner-identity-canary", _st_gartner_identity_and_canary),
    ("hopf-cole-normalization", _st_hopf_cole_normalization),
    ("polymer-transfer-vs-enumeration", _st_polymer_transfer),
    ("polymer-endpoint-normalization", _st_polymer_endpoint),
    ("polymer-martingale", _st_polymer_martingale),
    ("table-roundtrip", _st_table_roundtrip),
    ("simulation-determinism", _st_simulation_determinism),
]


def _cmd_selftest(ns):
    failures = 0
    for name, fn in _SELFTEST:
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - report and continue
            failures += 1
            print("FAIL %-32s %s" % (name, exc))
        else:
            print("ok   %s" % name)
    print("selftest: %d/%d passed" % (len(_SELFTEST) - failures,
                                      len(_SELFTEST)))
    return EXIT_OK if failures == 0 else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# parser


def _add_common(parser, defaults):
    parser.add_argument("--config", help="key=value file of flag defaults")
    parser.add_argument("-o", "--output", help="output CSV path (stdout "
                        "when omitted)")
    for name, (conv, _) in defaults.items():
        if name in ("output",):
            continue
        flag = "--" + name.replace("_", "-")
        if conv is bool:
            parser.add_argument(flag, action="store_const", const=True,
                                default=None)
        else:
            parser.add_argument(flag, type=conv, default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kpz-lab",
        description="exact KPZ crossover statistics and particle "
                    "simulations")
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("dist", help="tabulate an exact CDF")
    p_dist.add_argument("kind", choices=["tw-gue", "kpz-crossover",
                                         "kpz-edge", "gaussian"])
    _add_common(p_dist, _DIST_DEFAULTS)
    p_dist.set_defaults(func=_cmd_dist)

    p_sim = sub.add_parser("simulate", help="run a Monte Carlo simulation")
    sim_sub = p_sim.add_subparsers(dest="kind", required=True)
    p_asep = sim_sub.add_parser("asep", help="exclusion-process heights")
    _add_common(p_asep, _SIM_ASEP_DEFAULTS)
    p_asep.set_defaults(func=_cmd_simulate)
    p_poly = sim_sub.add_parser("polymer", help="polymer partition values")
    _add_common(p_poly, _SIM_POLYMER_DEFAULTS)
    p_poly.set_defaults(func=_cmd_simulate)

    p_cmp = sub.add_parser("compare", help="distance between two tables")
    p_cmp.add_argument("file_a")
    p_cmp.add_argument("file_b")
    p_cmp.set_defaults(func=_cmd_compare)

    p_self = sub.add_parser("selftest", help="reduced-size invariant suite")
    p_self.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        if str(exc).startswith("resource bound"):
            return EXIT_RESOURCE
        return EXIT_VALIDATION
    except RuntimeError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
