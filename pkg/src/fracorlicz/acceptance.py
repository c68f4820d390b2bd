"""The acceptance suite: twelve quantitative checks with runtime limits.

Each ``criterion_k()`` returns a CriterionResult; ``run_all`` runs a
selection and ``format_line`` renders the one-line summary.
"""
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .battery import random_profile, random_step_function, young_battery
from .calibration import MODULAR_BOUND_YOUNG, TRIAL_BOUND_SETUP, modular_bound_pairs
from .conditions import GATES, SmoothnessParams, classify_gate
from .errors import AdmissibilityError, DomainError, InconclusiveError, NoEmbeddingError
from .modulus import EquivalenceConfig, ModulusOfContinuity, sigma, theta, rho, verify_equivalence
from .norms import SampledFunction, decreasing_rearrangement, kernel_norms, luxemburg_norm, _make_modular, MeasureSpec
from .seminorm import (MODULAR_BOUND_CONSTANTS, TRIAL_BOUND_CONSTANTS, PairSampler, check_modular_bound,
                       gagliardo_modular, holder_quotient, make_trial, seminorm)
from .young import NumericConjugate, Power

__all__ = ["CriterionResult", "CRITERIA", "run_all", "format_line", "grid_oracle_1d"]


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float
    detail: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.passed and self.seconds < self.limit


def format_line(res):
    return "criterion %2d %-4s %-34s %6.1fs (limit %gs) %s" % (
        res.number, "PASS" if res.ok else "FAIL", res.name, res.seconds, res.limit,
        ", ".join("%s=%s" % (k, _short(v)) for k, v in res.detail.items()))


def _short(v):
    if isinstance(v, float):
        return "%.4g" % v
    return str(v)


def _timed(number, name, limit):
    def wrap(fn):
        def run():
            t0 = time.perf_counter()
            passed, detail = fn()
            return CriterionResult(number, name, bool(passed), time.perf_counter() - t0, limit, detail)
        run.number, run.title = number, name
        return run
    return wrap


# ---------------------------------------------------------------------------

@_timed(1, "conjugate sandwich", 10.0)
def criterion_1():
    t = np.geomspace(1e-4, 1e4, 60)
    worst = 0.0
    for A in young_battery():
        C = A.conjugate()
        prod = np.asarray(A.inverse(t), float) * np.asarray(C.inverse(t), float)
        worst = max(worst, float(np.max(np.maximum(t - prod, prod - 2 * t) / t)))
    return worst <= 1e-6, {"members": 12, "max_relative_violation": worst}


@_timed(2, "symbolic vs numeric Legendre", 5.0)
def criterion_2():
    t = np.geomspace(1e-3, 1e3, 40)
    worst = 0.0
    for p in (1.2, 2.0, 5.0):
        exact = (p - 1) * (t / p) ** (p / (p - 1))
        num = np.asarray(NumericConjugate(Power(p))(t), float)
        sym = np.asarray(Power(p).conjugate()(t), float)
        worst = max(worst, float(np.max(np.abs(num / exact - 1))), float(np.max(np.abs(sym / exact - 1))))
    return worst <= 1e-8, {"max_relative_error": worst}


_REGIME_PARAMS = [SmoothnessParams(2, 0.5), SmoothnessParams(3, 1.5), SmoothnessParams(2, 2.5)]


@_timed(3, "gate duality", 30.0)
def criterion_3():
    mism, inconclusive, checked = [], 0, 0
    for A in young_battery():
        if not math.isinf(A.finiteness_threshold) or type(A).__name__ == "LInftyGauge":
            continue
        for params in _REGIME_PARAMS:
            for gate in GATES:
                try:
                    rep = classify_gate(A, params, gate)
                except DomainError:
                    continue
                checked += 1
                if "Inconclusive" in (rep.verdict, rep.dual_verdict):
                    inconclusive += 1
                elif rep.verdict != rep.dual_verdict:
                    mism.append((repr(A), params.n, float(params.s), gate))
    return not mism and inconclusive == 0, {"checked": checked, "mismatches": len(mism),
                                             "inconclusive": inconclusive}


@_timed(4, "classical Hoelder exponent", 10.0)
def criterion_4():
    sg = sigma(Power(5.0), SmoothnessParams(2, 0.5))
    rep = verify_equivalence(sg, lambda r: r ** 0.1, "NearZero", decades=6)
    return rep.verdict and rep.spread < 10, {"spread": rep.spread, "slope": rep.slope}


@_timed(5, "example matrix", 300.0)
def criterion_5():
    from .cli import run_example_matrix
    res = [r for r in run_example_matrix() if not r["id"].startswith("necessity:")]
    failed = [r["id"] for r in res if not r["pass"]]
    return not failed, {"rows": len(res), "failed": len(failed)}


@_timed(6, "necessity direction", 30.0)
def criterion_6():
    from .cli import EXIT_INADMISSIBLE, classify, run_example_matrix, load_manifest
    man = load_manifest()
    res = run_example_matrix({"rows": [], "necessity": man["necessity"]})
    code, _ = classify(Power(2.0), SmoothnessParams(1, 2.5))
    bad = [r["id"] for r in res if not r["pass"]]
    return not bad and code == EXIT_INADMISSIBLE, {"rows": len(res), "failed": len(bad),
                                                   "n1_s2.5_exit": code}


def _first_members(regime_params, need, count=4):
    out = []
    for A in young_battery():
        try:
            sg = sigma(A, regime_params)
        except (NoEmbeddingError, InconclusiveError, AdmissibilityError):
            continue
        if all(k in sg.components for k in need):
            out.append(A)
        if len(out) == count:
            break
    return out


def _kernel_fn(A, params, col):
    memo = {}

    def f(r):
        out = []
        for x in np.atleast_1d(r):
            if x not in memo:
                memo[x] = kernel_norms(A, params, float(x))
            out.append(memo[x][col])
        return np.array(out)

    return f


@_timed(7, "kernel-norm equivalences", 60.0)
def criterion_7():
    # default tolerances; sampling density reduced to 2 points per decade for runtime
    cfg = EquivalenceConfig(per_decade=2)
    results = []
    for params, comps in ((SmoothnessParams(2, 0.5), ("theta",)), (SmoothnessParams(3, 1.5), ("theta", "rho")),
                          (SmoothnessParams(2, 2.5), ("rho",))):
        for A in _first_members(params, comps):
            sg = sigma(A, params)
            for comp, col in (("theta", 0), ("rho", 1)):
                if comp not in comps:
                    continue
                f = _kernel_fn(A, params, col)
                for end in ("NearZero", "NearInfinity"):
                    rep = verify_equivalence(f, sg.components[comp], end, cfg)
                    results.append((repr(A), params.n, float(params.s), comp, end, rep.verdict, rep.spread, rep.slope))
    A = Power(2.0)
    closed = max(abs(kernel_norms(A, SmoothnessParams(1, 0.75), r)[0] / (r ** 0.25 / math.sqrt(2)) - 1)
                 for r in (0.01, 0.3, 1.0, 7.0, 100.0))
    failed = [x for x in results if not x[5]]
    return not failed and closed <= 1e-6, {"checks": len(results), "failed": len(failed),
                                           "max_spread": max(x[6] for x in results),
                                           "max_abs_slope": max(abs(x[7]) for x in results),
                                           "closed_form_err": closed}


def grid_oracle_1d(u, s, L, cells=2000, box=1.5):
    """Brute-force J for A = Power(2), n = 1: midpoint sums on a cells^2 grid
    over [-box L, box L]^2, the diagonal cells filled with the squared
    derivative, plus the exact far field for pairs with one point outside."""
    M = box * L
    h = 2 * M / cells
    x = -M + h * (np.arange(cells) + 0.5)
    v = np.asarray(u(x), float)
    dv = np.gradient(v, h)
    total = 0.0
    for i0 in range(0, cells, 250):
        xi, vi = x[i0:i0 + 250, None], v[i0:i0 + 250, None]
        d = np.abs(xi - x[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            term = (vi - v[None, :]) ** 2 / d ** (2 * s) / d
        term[~np.isfinite(term)] = 0.0
        total += float(term.sum()) * h * h
    # diagonal cells: A(|v'| |x-y|^(1-s)) |x-y|^-1 over a cell pair, = v'^2 h^(3-2s) * c
    c_diag = 2.0 / ((2 - 2 * s) * (3 - 2 * s))
    total += float(np.sum(dv ** 2)) * h ** (3 - 2 * s) * c_diag
    # one point outside the box: int_{|y|>M} |v(x)|^2 |x-y|^(-1-2s) dy, both orders
    far = ((M - x) ** (-2 * s) + (M + x) ** (-2 * s)) / (2 * s)
    total += 2.0 * float(np.sum(v ** 2 * far)) * h
    return total


@_timed(8, "seminorm oracle agreement", 120.0)
def criterion_8():
    params, A = SmoothnessParams(1, 0.5), Power(2.0)
    rng = np.random.default_rng(8)
    profiles = [SampledFunction.indicator(0, 1)] + [random_profile(rng) for _ in range(4)]
    rows = []
    for f in profiles:
        u = make_trial("Radial", f, params)
        q = gagliardo_modular(A, params, u).value
        mc = gagliardo_modular(A, params, u, method="MonteCarlo", seed=2024, N=10 ** 6)
        g = grid_oracle_1d(u, 0.5, u.support_radius)
        rows.append((q, mc.value, mc.stderr, g))
    z = max(abs(q - m) / e for q, m, e, _ in rows)
    rel = max(abs(g / q - 1) for q, _, _, g in rows)
    return z <= 3 and rel <= 0.02, {"trials": len(rows), "max_mc_z": z, "max_grid_rel": rel}


@_timed(9, "scaling blow-up", 60.0)
def criterion_9():
    params = SmoothnessParams(1, 2.5)
    lip = ModulusOfContinuity(lambda r: r, "Lipschitz")
    ks = 2.0 ** np.arange(1, 11)
    sampler = PairSampler(1, seed=9, box=1.0, decades=(-3, 0), extra=[((1.0,), (0.0,))])
    q = [holder_quotient(make_trial("ScalingFamily", params=params, k=k), lip, sampler) for k in ks]
    slope = float(np.polyfit(np.log(ks), np.log(q), 1)[0])
    target = float(params.s) - params.n - 1
    return abs(slope - target) <= 0.1, {"slope": slope, "target": target}


@_timed(10, "modular inequality", 180.0)
def criterion_10():
    params = SmoothnessParams(1, 0.5)
    c = MODULAR_BOUND_CONSTANTS[(1, 0.5)]
    rng = np.random.default_rng(10)
    worst, count = 0.0, 0
    for A in MODULAR_BOUND_YOUNG[(1, 0.5)][:3]:
        for _ in range(5):
            u = make_trial("Radial", random_profile(rng), params)
            x, y = modular_bound_pairs(rng, 1, u.support_radius, random_pairs=50)
            rep = check_modular_bound(A, params, u, x, y)
            worst = max(worst, rep["max_ratio"])
            count += len(x)
    return worst <= 1.05 * c, {"pairs": count, "c": c, "max_ratio_over_c": worst / c}


@_timed(11, "trial-function bound", 180.0)
def criterion_11():
    detail, ok = {}, True
    for kind in ("Radial", "Odd"):
        (n, s), A = TRIAL_BOUND_SETUP[kind]
        params = SmoothnessParams(n, s)
        rng = np.random.default_rng(11)
        ratios = []
        for _ in range(10):
            f = random_profile(rng)
            ratios.append(seminorm(A, params, make_trial(kind, f, params)).value / luxemburg_norm(A, f).value)
        c = TRIAL_BOUND_CONSTANTS[kind]
        detail[kind + "_max_over_c"] = max(ratios) / c
        detail[kind + "_spread"] = max(ratios) / min(ratios)
        ok &= max(ratios) <= 1.05 * c
    return ok, detail


@_timed(12, "unit ball and rearrangement", 30.0)
def criterion_12():
    rng = np.random.default_rng(12)
    battery = [A for A in young_battery() if type(A).__name__ != "LInftyGauge"]
    unit_bad, rearr = 0, 0.0
    for i in range(100):
        A = battery[i % len(battery)]
        f = random_step_function(rng)
        nf = luxemburg_norm(A, f).value
        mod = _make_modular(f, MeasureSpec(f.grid[0], f.grid[-1]))
        for k in (0.5, 0.999, 1.001, 2.0):
            inside = mod(A, nf / k) <= 1.0
            unit_bad += inside != (k <= 1.0)
        g = decreasing_rearrangement(f)
        rearr = max(rearr, abs(luxemburg_norm(A, g).value / nf - 1))
    return unit_bad == 0 and rearr <= 1e-8, {"functions": 100, "unit_ball_failures": unit_bad,
                                             "rearrangement_rel_diff": rearr}


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


def run_all(numbers=None, out=None):
    results = []
    for crit in CRITERIA:
        if numbers and crit.number not in numbers:
            continue
        res = crit()
        results.append(res)
        if out is not None:
            out.write(format_line(res) + "\n")
            out.flush()
    return results
