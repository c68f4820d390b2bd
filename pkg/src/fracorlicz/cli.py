"""Command-line interface: gate classification, sigma tables, conjugates,
the example matrix, seminorm estimates and the acceptance suite."""
import argparse
import json
import sys
from fractions import Fraction
from importlib import resources

import numpy as np

from .conditions import GATES, SmoothnessParams, classify_gate
from .errors import AdmissibilityError, DomainError, InconclusiveError, NoEmbeddingError, PreconditionError
from .modulus import EquivalenceConfig, sigma, sigma_table, verify_equivalence, write_sigma_csv
from .norms import SampledFunction, luxemburg_norm
from .young import Exponential, LInftyGauge, Power, PowerLog, TabulatedMonotone, young_from_dict

__all__ = ["parse_young", "parse_s", "classify", "run_example_matrix", "load_manifest", "main"]

EXIT_OK, EXIT_MALFORMED, EXIT_NO_EMBEDDING, EXIT_INADMISSIBLE, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4

_KINDS = {
    "power": (Power, ("p",)),
    "powerlog": (PowerLog, ("p0", "alpha0", "p", "alpha")),
    "exp": (Exponential, ("gamma0", "gamma")),
    "linf": (LInftyGauge, ()),
}


def _number(text):
    return float(Fraction(text.strip()))


def parse_s(text):
    """Smoothness as an exact rational when given as 'a/b' or a short decimal."""
    f = Fraction(str(text).strip())
    return f if f.denominator != 1 else float(f)


def parse_young(text):
    """Parse 'power:p=5', 'powerlog:p0=..,alpha0=..,p=..,alpha=..', 'exp:gamma0=..,gamma=..',
    'linf', 'table:path=FILE' or a JSON descriptor as written by YoungFunction.to_json."""
    if text.strip().startswith("{"):
        return young_from_dict(json.loads(text))
    kind, _, rest = text.strip().partition(":")
    fields = {}
    for item in filter(None, (x.strip() for x in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError("expected key=value, got %r" % item)
        fields[key.strip()] = val.strip()
    if kind == "table":
        if "path" not in fields:
            raise ValueError("table needs path=FILE")
        return TabulatedMonotone.from_csv(fields["path"])
    if kind not in _KINDS:
        raise ValueError("unknown Young function kind %r" % kind)
    cls, names = _KINDS[kind]
    extra = set(fields) - set(names) - {"crossover", "level"}
    missing = [k for k in names if k not in fields]
    if extra or missing:
        raise ValueError("%s: missing %s, unexpected %s" % (kind, missing, sorted(extra)))
    args = [_number(fields[k]) for k in names]
    kw = {k: _number(fields[k]) for k in ("crossover", "level") if k in fields}
    return cls(*args, **kw)


def _required_gates(regime):
    return {"Subcritical01": ("TailSub",), "Mid1n": ("TailSub", "OriginGrad"),
            "Super_n": ("OriginGrad",)}.get(regime, ())


def classify(A, params):
    """Return (exit_code, report dict) for the embedding question."""
    regime = params.regime
    rep = {"regime": regime, "n": params.n, "s": float(params.s), "gates": {}}
    if regime == "Inadmissible":
        rep["admissible"] = False
        rep["embedding"] = False
        return EXIT_INADMISSIBLE, rep
    rep["admissible"] = True
    for gate in GATES:
        try:
            r = classify_gate(A, params, gate)
        except DomainError:
            continue
        rep["gates"][gate] = {"verdict": r.verdict, "dual_verdict": r.dual_verdict, "method": r.method}
    needed = [rep["gates"][g]["verdict"] for g in _required_gates(regime)]
    if "Diverges" in needed:
        code = EXIT_NO_EMBEDDING
    elif "Inconclusive" in needed:
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_OK
    rep["embedding"] = code == EXIT_OK
    if code == EXIT_OK:
        rep["sigma_regime"] = sigma(A, params).regime
    return code, rep


def load_manifest(path=None):
    if path is None:
        text = resources.files("fracorlicz").joinpath("data/examples_manifest.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)


def _expected(e):
    a, b, c = e["r_power"], e["log_power"], e["loglog_power"]
    near_zero = e["log_arg"] == "1+1/r"

    def g(r):
        L = np.log1p(1.0 / r) if near_zero else np.log1p(r)
        out = r ** a * L ** b
        return out * np.log(L) ** c if c else out

    return g


def run_example_matrix(manifest=None, config=None):
    """Check every manifest row; returns a list of result dicts with a 'pass' key."""
    man = manifest or load_manifest()
    cfg = config or EquivalenceConfig()
    results = []
    for row in man["rows"]:
        res = {"id": row["id"], "young": row["young"], "n": row["n"], "s": row["s"], "end": row["end"]}
        try:
            A = parse_young(row["young"])
            params = SmoothnessParams(row["n"], parse_s(row["s"]))
            sg = sigma(A, params)
            rep = verify_equivalence(sg, _expected(row["expected"]), row["end"], cfg, start=row.get("start", 1.0))
            res.update(regime=sg.regime, spread=rep.spread, slope=rep.slope)
            res["pass"] = rep.verdict
        except (PreconditionError, AdmissibilityError, ValueError) as exc:
            res.update(error="%s: %s" % (type(exc).__name__, exc))
            res["pass"] = False
        results.append(res)
    codes = {"NoEmbedding": EXIT_NO_EMBEDDING, "Inadmissible": EXIT_INADMISSIBLE}
    for row in man.get("necessity", []):
        A = parse_young(row["young"])
        code, _ = classify(A, SmoothnessParams(row["n"], parse_s(row["s"])))
        results.append({"id": "necessity:" + row["case"], "young": row["young"], "n": row["n"], "s": row["s"],
                        "end": "-", "code": code, "pass": code == codes[row["expect"]]})
    return results


def _emit(obj, fmt, out):
    if fmt == "json":
        out.write(json.dumps(obj, sort_keys=True, indent=1, default=float) + "\n")
    else:
        for k, v in obj.items():
            out.write("%s: %s\n" % (k, v))


def _cmd_classify(args, out):
    A = parse_young(args.young)
    params = SmoothnessParams(args.n, parse_s(args.s))
    code, rep = classify(A, params)
    rep["exit_code"] = code
    _emit(rep, args.format, out)
    return code


def _cmd_sigma_table(args, out):
    A = parse_young(args.young)
    params = SmoothnessParams(args.n, parse_s(args.s))
    npts = int(round(args.per_decade * np.log10(args.r_max / args.r_min))) + 1
    r = np.geomspace(args.r_min, args.r_max, npts)
    r[0], r[-1] = args.r_min, args.r_max
    tab = sigma_table(A, params, r)
    if args.format == "csv":
        out.write(write_sigma_csv(tab))
    else:
        _emit({k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in tab.items()}, "json", out)
    return EXIT_OK


def _cmd_conjugate(args, out):
    A = parse_young(args.young)
    t = np.array([_number(x) for x in args.t.split(",")])
    C = A.conjugate()
    vals = np.asarray(C(t), dtype=float)
    rows = [{"t": float(a), "conjugate": float(b)} for a, b in zip(t, vals)]
    if args.format == "csv":
        out.write("t,conjugate\n" + "".join("%.17g,%.17g\n" % (r["t"], r["conjugate"]) for r in rows))
    else:
        _emit({"young": args.young, "kind": type(C).__name__, "values": rows}, "json", out)
    return EXIT_OK


def _cmd_verify_examples(args, out):
    cfg = EquivalenceConfig(decades=args.grid_decades, C=args.tol_ratio, slope_tol=args.tol_slope)
    results = run_example_matrix(load_manifest(args.manifest), cfg)
    if args.format == "json":
        _emit({"results": results, "all_pass": all(r["pass"] for r in results)}, "json", out)
    else:
        for r in results:
            extra = ("spread=%.3g slope=%.3g" % (r["spread"], r["slope"]) if "spread" in r
                     else r.get("error", "exit=%s" % r.get("code", "")))
            out.write("%-4s %-48s n=%s s=%-4s %-12s %s\n" % ("PASS" if r["pass"] else "FAIL", r["id"],
                                                              r["n"], r["s"], r["end"], extra))
    return EXIT_OK if all(r["pass"] for r in results) else EXIT_MALFORMED


def _profile(args):
    if args.profile:
        return SampledFunction.from_csv(args.profile)
    return SampledFunction.indicator(0.0, args.support)


def _cmd_seminorm(args, out):
    from .seminorm import gagliardo_modular, make_trial, seminorm
    A = parse_young(args.young)
    params = SmoothnessParams(args.n, parse_s(args.s))
    f = _profile(args)
    u = make_trial(args.kind, f, params)
    kw = {"method": args.method, "seed": args.seed, "N": args.samples}
    est = gagliardo_modular(A, params, u, rel_cap=args.rel_cap, **kw)
    rep = {"kind": args.kind, "n": params.n, "s": float(params.s), "method": args.method,
           "modular": est.value, "stderr": est.stderr, "status": est.status,
           "seed": est.seed, "N": est.N, "profile_norm": luxemburg_norm(A, f).value}
    if est.status != "Diverges":
        sn = seminorm(A, params, u, **kw)
        rep["seminorm"] = sn.value
        rep["ratio_to_profile_norm"] = sn.value / rep["profile_norm"]
    else:
        rep["seminorm"] = float("inf")
    _emit(rep, "json" if args.format == "json" else "text", out)
    return EXIT_INCONCLUSIVE if est.status == "Inconclusive" else EXIT_OK


def _cmd_acceptance(args, out):
    from .acceptance import run_all
    nums = [int(x) for x in args.criteria.split(",")] if args.criteria else None
    results = run_all(nums, out)
    return EXIT_OK if all(r.ok for r in results) else EXIT_MALFORMED


def build_parser():
    p = argparse.ArgumentParser(prog="fracorlicz", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, young=True):
        if young:
            sp.add_argument("--young", required=True, help="e.g. power:p=5 or exp:gamma0=-1,gamma=1")
            sp.add_argument("--n", type=int, required=True)
            sp.add_argument("--s", required=True, help="non-integer smoothness, e.g. 0.5 or 3/2")
        sp.add_argument("--format", choices=("json", "text", "csv"), default="text")
        sp.add_argument("--out", help="write output to this file")
        sp.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("classify", help="regime, gate verdicts and embedding existence")
    common(c)
    t = sub.add_parser("sigma-table", help="theta, rho and sigma on a geometric r grid")
    common(t)
    t.add_argument("--r-min", type=float, default=1e-6)
    t.add_argument("--r-max", type=float, default=1e6)
    t.add_argument("--per-decade", type=int, default=4)
    j = sub.add_parser("conjugate", help="evaluate the Young conjugate")
    j.add_argument("--young", required=True)
    j.add_argument("--t", required=True, help="comma-separated points")
    j.add_argument("--format", choices=("json", "csv"), default="json")
    j.add_argument("--out")
    v = sub.add_parser("verify-examples", help="run the manifest of tabulated asymptotic rows")
    common(v, young=False)
    v.add_argument("--manifest", help="alternative manifest JSON")
    v.add_argument("--grid-decades", type=float, default=8.0)
    v.add_argument("--tol-ratio", type=float, default=10.0)
    v.add_argument("--tol-slope", type=float, default=0.02)
    m = sub.add_parser("seminorm", help="Gagliardo modular and seminorm of a trial function")
    common(m)
    m.add_argument("--kind", choices=("Radial", "RadialHigher", "Odd"), default="Radial")
    m.add_argument("--profile", help="step profile CSV (abscissa,value); default indicator of (0, support)")
    m.add_argument("--support", type=float, default=1.0)
    m.add_argument("--method", choices=("RadialQuadrature", "MonteCarlo"), default="RadialQuadrature")
    m.add_argument("--samples", type=int, default=10 ** 6, help="Monte Carlo sample count")
    m.add_argument("--rel-cap", type=float, default=None, help="Monte Carlo relative standard error cap")
    a = sub.add_parser("acceptance", help="run the acceptance criteria, one line each")
    a.add_argument("--criteria", help="comma-separated subset, e.g. 1,2,9")
    a.add_argument("--out")
    return p


_COMMANDS = {"classify": _cmd_classify, "sigma-table": _cmd_sigma_table, "conjugate": _cmd_conjugate,
             "verify-examples": _cmd_verify_examples, "seminorm": _cmd_seminorm, "acceptance": _cmd_acceptance}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    out = open(args.out, "w") if getattr(args, "out", None) else sys.stdout
    try:
        return _COMMANDS[args.command](args, out)
    except NoEmbeddingError as exc:
        sys.stderr.write("no embedding: %s\n" % exc)
        return EXIT_NO_EMBEDDING
    except InconclusiveError as exc:
        sys.stderr.write("inconclusive: %s\n" % exc)
        return EXIT_INCONCLUSIVE
    except AdmissibilityError as exc:
        sys.stderr.write("inadmissible: %s\n" % exc)
        return EXIT_INADMISSIBLE
    except (ValueError, OSError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_MALFORMED
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
