"""Gate integrals and the auxiliary Young functions E, F, I and hat-A.

The four gate integrals are

    TailSub     int^inf (t/A(t))^(s/(n-s)) dt
    OriginSub   int_0   (t/A(t))^(s/(n-s)) dt
    OriginGrad  int_0   (t/A(t))^((s-1)/(n-s+1)) dt
    TailGrad    int^inf (t/A(t))^((s-1)/(n-s+1)) dt

and each one converges exactly when the dual integral of conj(A)(t)/t^(1+q)
does, with q = n/(n-s) or n/(n-s+1).
"""
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate

from .errors import DomainError, PreconditionError
from .young import LInftyGauge, Power, TabulatedMonotone, legendre

__all__ = [
    "SmoothnessParams",
    "ConvergenceReport",
    "GATES",
    "classify_gate",
    "classify_integral",
    "build_E",
    "build_F",
    "build_I",
    "build_hatA",
]

GATES = ("TailSub", "OriginSub", "OriginGrad", "TailGrad")
_TOL = 1e-9
_LN10 = math.log(10.0)
# 32 nodes per decade on [1e-100, 1e100], in natural-log units
_U = _LN10 * np.linspace(-100.0, 100.0, 6401)


@dataclass(frozen=True)
class SmoothnessParams:
    """Dimension n and non-integer smoothness s > 0."""

    n: int
    s: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError("n must be a positive integer")
        s = self.s
        if s <= 0:
            raise DomainError("s must be positive")
        if isinstance(s, Fraction):
            if s.denominator == 1:
                raise DomainError("s must not be an integer")
        elif abs(s - round(s)) < 1e-9:
            raise DomainError("s must not be an integer (got %r)" % s)

    @property
    def int_part(self):
        return math.floor(self.s)

    @property
    def frac_part(self):
        return self.s - math.floor(self.s)

    @property
    def omega_n(self):
        return math.pi ** (self.n / 2) / math.gamma(self.n / 2 + 1)

    @property
    def regime(self):
        n, s = self.n, self.s
        if s < 1:
            return "Subcritical01"
        if s < n:
            return "Mid1n"
        if s < n + 1:
            return "Super_n"
        return "Inadmissible"

    def gate_q(self, gate):
        """The exponent q of the gate; the gate integrand is (t/A)^(q-1)."""
        n, s = self.n, self.s
        if gate in ("TailSub", "OriginSub"):
            if not s < n:
                raise DomainError("%s needs s < n" % gate)
            return n / (n - s) if not isinstance(s, Fraction) else Fraction(n) / (n - s)
        if gate in ("OriginGrad", "TailGrad"):
            if not s > 1:
                raise DomainError("%s needs s > 1" % gate)
            return n / (n - s + 1) if not isinstance(s, Fraction) else Fraction(n) / (n - s + 1)
        raise DomainError("unknown gate %r" % gate)


def _gate_end(gate):
    return "infinity" if gate.startswith("Tail") else "zero"


@dataclass
class ConvergenceReport:
    gate: str
    end: str
    verdict: str
    method: str
    exponent_trace: list = field(default_factory=list)
    dual_verdict: str = None
    dual_method: str = None
    details: dict = field(default_factory=dict)

    @property
    def converges(self):
        return self.verdict == "Converges"

    def to_dict(self):
        d = asdict(self)
        d["exponent_trace"] = [float(x) for x in self.exponent_trace]
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, default=float)


def _powerlog_integrable(end, beta, gam):
    """Does t^beta L^gam integrate near ``end`` (L = log t or log 1/t)?"""
    beta, gam = float(beta), float(gam)
    if end == "infinity":
        if beta < -1 - _TOL:
            return True
        if beta > -1 + _TOL:
            return False
    else:
        if beta > -1 + _TOL:
            return True
        if beta < -1 - _TOL:
            return False
    return gam < -1 - _TOL


def _closed_form_primal(asym, e, end):
    if asym.kind == "powerlog":
        beta = e * (1 - asym.power)
        gam = -e * asym.logpower
        return _powerlog_integrable(end, beta, gam), [beta, gam]
    if asym.kind in ("zero", "tiny"):
        return False, []
    return True, []


def _closed_form_dual(asym, q, end):
    if asym.kind == "powerlog":
        beta = asym.power - 1 - q
        return _powerlog_integrable(end, beta, asym.logpower), [beta, asym.logpower]
    if asym.kind in ("zero", "tiny"):
        return True, []
    return False, []


def classify_integral(h, end, decades=24, nodes=16):
    """Classify int h near ``end`` from per-decade increments.

    Converges when the last three increment ratios are all below 0.9,
    Diverges when they stay at or above 0.995 (increments bounded below) or an
    increment is infinite; otherwise Inconclusive.  Returns
    (verdict, increments, local exponents).
    """
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    k = np.arange(decades)
    start = k if end == "infinity" else -k - 1
    v = start[:, None] + 0.5 * (xg[None, :] + 1.0)
    t = 10.0 ** v
    with np.errstate(all="ignore"):
        hv = np.asarray(h(t), dtype=float)
        inc = 0.5 * _LN10 * np.sum(hv * t * wg[None, :], axis=1)
        sign = 1 if end == "infinity" else -1
        he = np.asarray(h(10.0 ** (sign * np.arange(decades + 1))), dtype=float)
        slopes = sign * np.log10(he[1:] / he[:-1])
    inc = np.where(np.isnan(inc), np.inf, inc)
    if not np.all(np.isfinite(inc)):
        return "Diverges", inc, slopes
    tail = inc[-4:]
    if np.all(tail == 0):
        return "Converges", inc, slopes
    with np.errstate(all="ignore"):
        ratios = tail[1:] / tail[:-1]
    if np.all(ratios < 0.9):
        return "Converges", inc, slopes
    if np.all(ratios >= 0.995):
        return "Diverges", inc, slopes
    return "Inconclusive", inc, slopes


def classify_gate(A, params, gate, numeric=None):
    """Decide convergence of a gate integral, with the dual cross-check.

    Symbolic families are decided by exponent arithmetic on the asymptotics
    of A (primal) and of its conjugate (dual).  Other Young functions, or
    ``numeric=True``, use per-decade increments of both integrands.
    """
    q = params.gate_q(gate)
    e = q - 1
    end = _gate_end(gate)
    asym = A.asymptotics(end)
    casym = A.conjugate_asymptotics(end) if asym is not None else None
    use_numeric = numeric if numeric is not None else (asym is None or casym is None)
    if not use_numeric:
        ok, trace = _closed_form_primal(asym, e, end)
        dok, dtrace = _closed_form_dual(casym, q, end)
        verdict = "Converges" if ok else "Diverges"
        dual = "Converges" if dok else "Diverges"
        return ConvergenceReport(gate, end, verdict, "ClosedForm", trace, dual, "ClosedForm",
                                 {"q": float(q), "dual_exponents": [float(x) for x in dtrace]})
    qf, ef = float(q), float(e)

    def primal(t):
        return (t / np.asarray(A(t), dtype=float)) ** ef

    C = A.conjugate()

    def dual(t):
        return np.asarray(C(t), dtype=float) / t ** (1 + qf)

    verdict, inc, slopes = classify_integral(primal, end)
    dverdict, dinc, _ = classify_integral(dual, end)
    return ConvergenceReport(gate, end, verdict, "NumericTailFit", list(slopes), dverdict,
                             "NumericTailFit", {"q": qf, "increments": inc.tolist(),
                                                "dual_increments": dinc.tolist()})


def _require(A, params, gate):
    rep = classify_gate(A, params, gate)
    if rep.verdict != "Converges":
        raise PreconditionError("gate %s does not converge (%s)" % (gate, rep.verdict), rep)
    return rep


# ---------------------------------------------------------------------------
# cumulative integrals of exp(phi(u)) du on a log grid
# ---------------------------------------------------------------------------

def _segment_logints(u, phi):
    """log int_{u_i}^{u_i+1} exp(phi) du with phi linear on each segment."""
    du = np.diff(u)
    a, b = phi[:-1], phi[1:]
    m = np.maximum(a, b)
    with np.errstate(all="ignore"):
        d = np.abs(a - b)
        f = np.where(d < 1e-8, 1.0 - 0.5 * d, -np.expm1(-d) / d)
        out = np.log(du) + m + np.log(f)
    return np.where(np.isfinite(m), out, -np.inf)


def _log_tail(U, kappa, gam):
    """log of int_0^inf exp(kappa v) (1 + v/U)^gam dv (a power-log tail model)."""
    U = max(float(U), 1.0)
    if kappa > 1e-12:
        return math.inf
    if abs(kappa) <= 1e-12:
        return math.log(U / (-gam - 1)) if gam < -1 - _TOL else math.inf
    k = -kappa * U
    val, _ = integrate.quad(lambda y: math.exp(-k * y + gam * math.log1p(y)), 0, math.inf, limit=400)
    return math.log(U * val)


def _fit_tail(u, phi, toward):
    """Fit phi ~ c0 + c1 u + c2 log|u| on the outermost two decades of valid nodes."""
    sel = np.isfinite(phi)
    uu, pp = u[sel], phi[sel]
    uu, pp = (uu[-64:], pp[-64:]) if toward == "infinity" else (uu[:64], pp[:64])
    X = np.column_stack([np.ones_like(uu), uu, np.log(np.abs(uu) + 1.0)])
    c, *_ = np.linalg.lstsq(X, pp, rcond=None)
    slope = c[1] if toward == "infinity" else -c[1]
    if abs(slope) < 2e-3:
        X2 = np.column_stack([np.ones_like(uu), np.log(np.abs(uu) + 1.0)])
        c2, *_ = np.linalg.lstsq(X2, pp, rcond=None)
        return 0.0, float(c2[1])
    return float(slope), float(c[2])


def _tail_exponents(asym, q, toward, u, phi):
    """(kappa, gam) of exp(phi) moving away from the grid toward ``toward``.

    ``asym`` describes conj(A) near that end; ``None`` selects a fitted model.
    Returns None for an identically negligible tail.
    """
    if asym is None:
        return _fit_tail(u, phi, toward)
    if asym.kind == "powerlog":
        kappa = (asym.power - q) if toward == "infinity" else -(asym.power - q)
        return float(kappa), float(asym.logpower)
    if asym.kind in ("zero", "tiny"):
        return None
    return (math.inf, 0.0)


def _log_conjugate_grid(A, u=_U):
    """log conj(A) on exp(u); exact for closed-form conjugates, golden-section otherwise."""
    C = A.conjugate()
    t = np.exp(u)
    if isinstance(C, Power):
        return C.log_eval(t)
    if isinstance(C, LInftyGauge):
        return np.where(t <= C.level, -np.inf, np.inf)
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(legendre(A, t), dtype=float))


def _valid_block(logc):
    """Indices [i0, i1] of the finite block of log conj(A); -inf below i0 is a zero region."""
    fin = np.isfinite(logc)
    if not fin.any():
        raise PreconditionError("conjugate is nowhere finite and positive on the grid")
    i1 = len(fin) - 1 - int(np.argmax(fin[::-1]))
    i0 = int(np.argmax(fin))
    return i0, i1


def _weighted_cumulative(A, q, direction, u=_U):
    """log of int conj(A)(tau) tau^(-1-q) dtau from t to infinity ('down') or from 0 to t ('up').

    Returns (u_nodes, log_integral, inf_at) on the nodes where conj(A) is finite
    or zero; ``inf_at`` is the first grid point past a genuine finiteness
    threshold of conj(A), or None.
    """
    q = float(q)
    logc = _log_conjugate_grid(A, u)
    i0, i1 = _valid_block(logc)
    inf_at = None
    if i1 + 1 < len(u) and logc[i1 + 1] == np.inf and math.isfinite(A.conjugate().finiteness_threshold):
        inf_at = float(np.exp(u[i1 + 1]))
    if np.any(logc[i0:i1 + 1] == np.inf):
        raise PreconditionError("conjugate is infinite inside the grid")
    uu = u[: i1 + 1]
    phi = logc[: i1 + 1] - q * uu
    seg = _segment_logints(uu, phi)
    if direction == "down":
        ex = _tail_exponents(A.conjugate_asymptotics("infinity"), q, "infinity", uu, phi)
        if inf_at is not None:
            ex = (math.inf, 0.0)
        lt = -np.inf if ex is None else phi[-1] + _log_tail(uu[-1], *ex)
        if not np.isfinite(lt) and lt > 0:
            raise PreconditionError("weighted conjugate integral diverges at infinity")
        vals = np.concatenate([seg, [lt]])
        logint = np.logaddexp.accumulate(vals[::-1])[::-1]
    else:
        ex = _tail_exponents(A.conjugate_asymptotics("zero"), q, "zero", uu[i0:], phi[i0:])
        if i0 > 0 or ex is None:
            lt = -np.inf
        else:
            lt = phi[0] + _log_tail(-uu[0], *ex)
        if lt == np.inf:
            raise PreconditionError("weighted conjugate integral diverges at zero")
        vals = np.concatenate([[lt], seg])
        logint = np.logaddexp.accumulate(vals)
    return uu, logint, inf_at


def _table_from_logs(u, logv, meta, inf_at=None):
    t = np.exp(u)
    with np.errstate(over="ignore"):
        v = np.exp(np.clip(logv, -745.0, 709.0))
    v = np.where(logv < -700, 0.0, v)
    keep = logv < 700
    t, v = t[keep], v[keep]
    if inf_at is not None and keep.all():
        t, v = np.append(t, inf_at), np.append(v, np.inf)
    return TabulatedMonotone(t, v, interpolation="loglog", meta=meta)


def build_E(A, params, check_gate=True):
    """E(t) = t^(n/(n-s)) int_t^inf conj(A)(tau) tau^(-1-n/(n-s)) dtau as a log-log table."""
    if not params.s < params.n:
        raise DomainError("E needs s < n")
    rep = _require(A, params, "TailSub") if check_gate else None
    q = float(params.gate_q("TailSub"))
    u, logint, _ = _weighted_cumulative(A, q, "down")
    return _table_from_logs(u, q * u + logint,
                            {"name": "E", "source": A.to_dict(), "n": params.n, "s": float(params.s),
                             "gate": rep.to_dict() if rep else None})


def build_F(A, params, check_gate=True):
    """F(t) = t^(n/(n-s+1)) int_0^t conj(A)(tau) tau^(-1-n/(n-s+1)) dtau as a log-log table."""
    if not 1 < params.s < params.n + 1:
        raise DomainError("F needs 1 < s < n + 1")
    rep = _require(A, params, "OriginGrad") if check_gate else None
    q = float(params.gate_q("OriginGrad"))
    u, logint, inf_at = _weighted_cumulative(A, q, "up")
    return _table_from_logs(u, q * u + logint,
                            {"name": "F", "source": A.to_dict(), "n": params.n, "s": float(params.s),
                             "gate": rep.to_dict() if rep else None}, inf_at)


def build_I(A, params):
    """I(t) = t^(n/(n-s)) int_0^t conj(A)(tau) tau^(n/(s-n)-1) dtau for n < s < n + 1."""
    n, s = params.n, float(params.s)
    if not n < s < n + 1:
        raise DomainError("I needs n < s < n + 1")
    q = n / (n - s)
    u, logint, inf_at = _weighted_cumulative(A, q, "up")
    if np.any(logint == np.inf):
        raise PreconditionError("origin integral defining I diverges")
    return _table_from_logs(u, q * u + logint,
                            {"name": "I", "source": A.to_dict(), "n": n, "s": s}, inf_at)


def build_hatA(A, params, per_decade=32):
    """Young function hat-A whose density has the nested-integral inverse

        hat_a^-1(r) = ( int_{a^-1(r)}^inf Phi(t)^(-n/s) a(t)^(-n/(n-s)) dt )^(s/(s-n)),
        Phi(t) = int_0^t a(rho)^(-s/(n-s)) drho,

    evaluated for r on a geometric grid over [1e-6, 1e6].
    """
    n, s = params.n, float(params.s)
    if not s < n:
        raise DomainError("hat-A needs s < n")
    rep = _require(A, params, "OriginSub")
    e = s / (n - s)
    x = np.exp(_U)
    with np.errstate(all="ignore"):
        loga = np.log(np.asarray(A.density(x), dtype=float))
    fin = np.isfinite(loga)
    if not fin.any():
        raise PreconditionError("density of A is nowhere positive and finite", rep)
    i0 = int(np.argmax(fin))
    i1 = len(fin) - 1 - int(np.argmax(fin[::-1]))
    u = _U[i0:i1 + 1]
    la = loga[i0:i1 + 1]
    if not np.all(np.isfinite(la)):
        raise PreconditionError("density of A has gaps on the grid", rep)
    # Phi by cumulative integration from 0
    phi_in = u - e * la
    seg = _segment_logints(u, phi_in)
    k0, g0 = _fit_tail(u, phi_in, "zero")
    lt = phi_in[0] + _log_tail(-u[0], k0, g0) if i0 == 0 else -np.inf
    if lt == np.inf:
        raise PreconditionError("inner integral of hat-A diverges at zero", rep)
    logPhi = np.logaddexp.accumulate(np.concatenate([[lt], seg]))
    # Psi by cumulative integration toward infinity
    phi_out = u - (n / s) * logPhi - (n / (n - s)) * la
    seg2 = _segment_logints(u, phi_out)
    k1, g1 = _fit_tail(u, phi_out, "infinity")
    lt2 = phi_out[-1] + _log_tail(u[-1], k1, g1)
    if lt2 == np.inf:
        raise PreconditionError("outer integral of hat-A diverges", rep)
    logPsi = np.logaddexp.accumulate(np.concatenate([seg2, [lt2]])[::-1])[::-1]
    # hat_a^-1(a(x)) = Psi(x)^(s/(s-n)); sample r on the requested grid
    r = np.geomspace(1e-6, 1e6, int(12 * per_decade) + 1)
    xr = np.asarray(legendre(A, r, return_argmax=True)[1], dtype=float)  # a^-1(r)
    logxr = np.log(xr)
    log_tau = (s / (s - n)) * np.interp(logxr, u, logPsi)
    log_ahat = np.log(r)
    order = np.argsort(log_tau)
    log_tau, log_ahat = log_tau[order], log_ahat[order]
    keep = np.concatenate([[True], np.diff(log_tau) > 1e-12])
    log_tau, log_ahat = log_tau[keep], log_ahat[keep]
    # hat-A = int_0 hat_a, piecewise-power density between samples
    phi_h = log_ahat + log_tau  # integrand in log variable
    seg3 = _segment_logints(log_tau, phi_h)
    slope0 = (phi_h[8] - phi_h[0]) / (log_tau[8] - log_tau[0])
    lt3 = phi_h[0] - math.log(slope0) if slope0 > 0 else -np.inf
    logH = np.logaddexp.accumulate(np.concatenate([[lt3], seg3]))
    return TabulatedMonotone(np.exp(log_tau), np.exp(logH), interpolation="loglog",
                             meta={"name": "hatA", "source": A.to_dict(), "n": n, "s": s,
                                   "density_inverse": {"r": r.tolist(),
                                                       "value": np.exp((s / (s - n)) * np.interp(logxr, u, logPsi)).tolist()},
                                   "gate": rep.to_dict()})
