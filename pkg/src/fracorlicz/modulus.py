"""Moduli of continuity theta_s, rho_s and the optimal sigma_s, plus an
operational test for asymptotic equivalence."""
import csv
import io
import json
import threading
from dataclasses import asdict, dataclass, field

import numpy as np

from .conditions import SmoothnessParams, build_E, build_F, classify_gate
from .errors import AdmissibilityError, EvaluationError, InconclusiveError, NoEmbeddingError

__all__ = [
    "ModulusOfContinuity",
    "EquivalenceConfig",
    "EquivalenceReport",
    "theta",
    "rho",
    "sigma",
    "verify_equivalence",
    "sigma_table",
    "write_sigma_csv",
]

_cache = {}
_lock = threading.Lock()


def _built(builder, A, params):
    key = (builder.__name__, A.to_json(), params.n, float(params.s))
    with _lock:
        hit = _cache.get(key)
    if hit is None:
        hit = builder(A, params)
        with _lock:
            _cache[key] = hit
    return hit


class ModulusOfContinuity:
    """Evaluatable r -> omega(r) > 0 with a regime tag and optional components."""

    def __init__(self, fn, regime, components=None, metadata=None):
        self._fn = fn
        self.regime = regime
        self.components = components or {}
        self.metadata = metadata or {}

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise ValueError("moduli are evaluated at r > 0")
        return self._fn(r)

    def check_vanishing(self):
        """omega(10^-k), k = 1..12, decreasing with final value below 1e-3 omega(1)."""
        r = 10.0 ** -np.arange(1, 13)
        v = self(r)
        ok = bool(np.all(np.diff(v) < 0) and v[-1] < 1e-3 * float(self(1.0)))
        return ok, v

    def check_quasi_monotone(self, bound=4.0, grid=None):
        """max_r omega(r) / min_{r' >= r} omega(r') <= bound on the grid."""
        r = np.geomspace(1e-6, 1e6, 193) if grid is None else np.asarray(grid, dtype=float)
        v = self(r)
        tail_min = np.minimum.accumulate(v[::-1])[::-1]
        worst = float(np.max(v / tail_min))
        return worst <= bound, worst

    def __repr__(self):
        return "ModulusOfContinuity(regime=%r)" % self.regime


def _inverse_modulus(G, params):
    n, s = params.n, float(params.s)

    def fn(r):
        return 1.0 / (r ** (n - s) * G.inverse(r ** (-float(n))))

    return fn


def theta(A, params):
    """theta_s(r) = 1 / (r^(n-s) E^-1(r^-n))."""
    E = _built(build_E, A, params)
    return ModulusOfContinuity(_inverse_modulus(E, params), "theta", metadata={"E": E.meta})


def rho(A, params):
    """rho_s(r) = 1 / (r^(n-s) F^-1(r^-n))."""
    F = _built(build_F, A, params)
    return ModulusOfContinuity(_inverse_modulus(F, params), "rho", metadata={"F": F.meta})


def _gate_or_raise(A, params, gate):
    rep = classify_gate(A, params, gate)
    if rep.verdict == "Diverges":
        raise NoEmbeddingError("gate %s diverges: no embedding" % gate, rep)
    if rep.verdict == "Inconclusive":
        raise InconclusiveError("gate %s is inconclusive" % gate, rep)
    return rep


def _piecewise(lip, far, r):
    return np.where(r < 1.0, r, far(np.maximum(r, 1.0)))


def sigma(A, params):
    """Optimal modulus of continuity for the given Young function and (n, s)."""
    if not isinstance(params, SmoothnessParams):
        params = SmoothnessParams(*params)
    regime = params.regime
    if regime == "Inadmissible":
        raise AdmissibilityError("s = %g >= n + 1 = %d admits no embedding" % (float(params.s), params.n + 1))
    reports = {}
    if regime == "Subcritical01":
        reports["TailSub"] = _gate_or_raise(A, params, "TailSub")
        th = theta(A, params)
        return ModulusOfContinuity(th._fn, "Subcritical01", {"theta": th},
                                   {"gates": {k: v.to_dict() for k, v in reports.items()}})
    if regime == "Mid1n":
        reports["TailSub"] = _gate_or_raise(A, params, "TailSub")
        reports["OriginGrad"] = _gate_or_raise(A, params, "OriginGrad")
        reports["TailGrad"] = classify_gate(A, params, "TailGrad")
        th, rh = theta(A, params), rho(A, params)

        def both(r):
            return th(r) + rh(r)

        comps = {"theta": th, "rho": rh}
        meta = {"gates": {k: v.to_dict() for k, v in reports.items()}}
        if reports["TailGrad"].verdict == "Converges":
            meta["junction_ratio"] = float(both(np.array([1.0]))[0])
            return ModulusOfContinuity(lambda r: _piecewise(None, both, r), "Mid1n_Case_ii", comps, meta)
        return ModulusOfContinuity(both, "Mid1n_Case_i", comps, meta)
    reports["OriginGrad"] = _gate_or_raise(A, params, "OriginGrad")
    reports["TailGrad"] = classify_gate(A, params, "TailGrad")
    rh = rho(A, params)
    meta = {"gates": {k: v.to_dict() for k, v in reports.items()}}
    if reports["TailGrad"].verdict == "Converges":
        meta["junction_ratio"] = float(rh(np.array([1.0]))[0])
        return ModulusOfContinuity(lambda r: _piecewise(None, rh, r), "Super_n_Case_ii", {"rho": rh}, meta)
    return ModulusOfContinuity(rh._fn, "Super_n_Case_i", {"rho": rh}, meta)


@dataclass
class EquivalenceConfig:
    decades: float = 8.0
    per_decade: int = 16
    C: float = 10.0
    slope_tol: float = 0.02
    slope_decades: float = 3.0
    start: float = 1.0


@dataclass
class EquivalenceReport:
    end: str
    r_min: float
    r_max: float
    ratio_min: float
    ratio_max: float
    spread: float
    slope: float
    verdict: bool
    config: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)


def verify_equivalence(f, g, end="NearZero", config=None, **overrides):
    """Test f ~ g toward ``end`` by sampling f/g on a geometric grid.

    Passes iff the ratio spread max/min is at most C and the log-log slope of
    the ratio over the last ``slope_decades`` decades is below ``slope_tol``.
    """
    cfg = config or EquivalenceConfig()
    if overrides:
        cfg = EquivalenceConfig(**{**asdict(cfg), **overrides})
    npts = int(round(cfg.decades * cfg.per_decade)) + 1
    if end == "NearZero":
        r = np.geomspace(cfg.start, cfg.start * 10.0 ** -cfg.decades, npts)
    elif end == "NearInfinity":
        r = np.geomspace(cfg.start, cfg.start * 10.0 ** cfg.decades, npts)
    else:
        raise ValueError("end must be NearZero or NearInfinity")
    fv = np.asarray(f(r), dtype=float)
    gv = np.asarray(g(r), dtype=float)
    for name, v in (("f", fv), ("g", gv)):
        bad = ~(np.isfinite(v) & (v > 0))
        if bad.any():
            i = int(np.argmax(bad))
            raise EvaluationError("%s is not positive and finite at r=%g" % (name, r[i]), (float(r[i]), float(v[i])))
    ratio = fv / gv
    k = int(round(cfg.slope_decades * cfg.per_decade)) + 1
    lr, lq = np.log(r[-k:]), np.log(ratio[-k:])
    slope = float(np.polyfit(lr, lq, 1)[0])
    spread = float(ratio.max() / ratio.min())
    verdict = bool(spread <= cfg.C and abs(slope) < cfg.slope_tol)
    return EquivalenceReport(end, float(r.min()), float(r.max()), float(ratio.min()), float(ratio.max()),
                             spread, slope, verdict, asdict(cfg))


def sigma_table(A, params, r):
    """Rows (r, theta, rho, sigma, regime); inapplicable components are NaN."""
    r = np.asarray(r, dtype=float)
    sg = sigma(A, params)
    th = sg.components.get("theta")
    rh = sg.components.get("rho")
    nan = np.full_like(r, np.nan)
    return {
        "r": r,
        "theta": th(r) if th is not None else nan,
        "rho": rh(r) if rh is not None else nan,
        "sigma": sg(r),
        "regime": sg.regime,
        "metadata": sg.metadata,
    }


def write_sigma_csv(table, out=None):
    """Write a sigma table as CSV; returns the text when ``out`` is None."""
    buf = io.StringIO() if out is None else out
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "theta", "rho", "sigma", "regime"])
    for i in range(len(table["r"])):
        w.writerow(["%.17g" % table[k][i] for k in ("r", "theta", "rho", "sigma")] + [table["regime"]])
    return buf.getvalue() if out is None else None
