"""Luxemburg and Orlicz-Lorentz norms, decreasing rearrangements, the kernel
norms behind theta_s and rho_s, and Hoelder-type checks."""
import csv
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import logsumexp

from .conditions import SmoothnessParams, _log_tail, classify_integral
from .errors import DomainError
from .young import NumericConjugate

__all__ = [
    "SampledFunction",
    "MeasureSpec",
    "NormResult",
    "luxemburg_norm",
    "decreasing_rearrangement",
    "distribution_function",
    "orlicz_lorentz_norm",
    "kernel_norms",
    "holder_check",
]

_GL8 = np.polynomial.legendre.leggauss(8)
_GL16 = np.polynomial.legendre.leggauss(16)


class SampledFunction:
    """Profile on [grid[0], grid[-1]] given by samples.

    ``kind="step"``: ``values[i]`` holds on [grid[i], grid[i+1]), so
    len(values) == len(grid) - 1.  ``kind="linear"``: values at the nodes,
    joined by segments.  ``tail=(c, e)`` continues the profile as c*x^e
    beyond the last node (infinite domain); otherwise it vanishes there.
    """

    def __init__(self, grid, values, kind="step", tail=None):
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if kind not in ("step", "linear"):
            raise ValueError("kind must be 'step' or 'linear'")
        need = len(grid) - 1 if kind == "step" else len(grid)
        if grid.ndim != 1 or len(grid) < 2 or values.shape != (need,):
            raise ValueError("%s profile needs %d values for %d nodes" % (kind, need, len(grid)))
        if np.any(np.diff(grid) <= 0) or grid[0] < 0:
            raise ValueError("grid must be strictly increasing and nonnegative")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        self.grid, self.values, self.kind = grid, values, kind
        self.tail = None if tail is None else (float(tail[0]), float(tail[1]))

    @classmethod
    def step(cls, grid, values, tail=None):
        return cls(grid, values, "step", tail)

    @classmethod
    def linear(cls, grid, values, tail=None):
        return cls(grid, values, "linear", tail)

    @classmethod
    def constant(cls, c, length):
        return cls([0.0, float(length)], [float(c)], "step")

    @classmethod
    def indicator(cls, a, b):
        if a == 0:
            return cls([0.0, float(b)], [1.0], "step")
        return cls([0.0, float(a), float(b)], [0.0, 1.0], "step")

    @property
    def domain_length(self):
        return math.inf if self.tail is not None else float(self.grid[-1] - self.grid[0])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        g = self.grid
        if self.kind == "step":
            i = np.clip(np.searchsorted(g, x, side="right") - 1, 0, len(self.values) - 1)
            out = self.values[i]
        else:
            out = np.interp(x, g, self.values)
        inside = (x >= g[0]) & (x <= g[-1]) if self.kind == "linear" else (x >= g[0]) & (x < g[-1])
        out = np.where(inside, out, 0.0)
        if self.tail is not None:
            c, e = self.tail
            with np.errstate(all="ignore"):
                out = np.where(x >= g[-1], c * np.maximum(x, g[-1]) ** e, out)
        return out

    def scaled(self, k):
        return SampledFunction(self.grid, k * self.values, self.kind,
                               None if self.tail is None else (k * self.tail[0], self.tail[1]))

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["abscissa", "value"])
            vals = self.values if self.kind == "linear" else np.append(self.values, 0.0)
            for a, b in zip(self.grid, vals):
                w.writerow([repr(float(a)), repr(float(b))])

    @classmethod
    def from_csv(cls, path, kind="step"):
        xs, vs = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                try:
                    xs.append(float(row[0]))
                    vs.append(float(row[1]))
                except (ValueError, IndexError):
                    continue
        return cls(xs, vs[:-1] if kind == "step" else vs, kind)

    def __repr__(self):
        return "SampledFunction(kind=%r, nodes=%d)" % (self.kind, len(self.grid))


@dataclass(frozen=True)
class MeasureSpec:
    """Interval (a, b) of (0, inf) with an optional positive weight."""

    a: float = 0.0
    b: float = math.inf
    weight: object = None

    def __post_init__(self):
        if not (0 <= self.a < self.b):
            raise ValueError("need 0 <= a < b")


@dataclass
class NormResult:
    value: float
    modular_at_value: float
    iterations: int
    infinite: bool = False
    flags: list = field(default_factory=list)

    def __float__(self):
        return float(self.value)

    def to_json(self):
        return json.dumps(asdict(self), default=float)


# ---------------------------------------------------------------------------
# modulars
# ---------------------------------------------------------------------------

def _gl_nodes(edges, rule=_GL8):
    """Gauss-Legendre nodes and weights on consecutive panels of ``edges``."""
    x, w = rule
    a, b = edges[:-1, None], edges[1:, None]
    h = 0.5 * (b - a)
    return (a + h * (x + 1)).ravel(), (h * w).ravel(), len(x)


def _log_panels(x0, x1, per_decade=4):
    k = max(1, int(math.ceil(per_decade * math.log10(x1 / x0))))
    return np.geomspace(x0, x1, k + 1)


class _CallableModular:
    """Quadrature plan for int A(|f|/lam) w over (a, b).

    Panels are geometric toward 0 and infinity; the unresolved end pieces are
    added as geometric series of the outermost per-decade increments.
    """

    _DEPTH = 40  # decades resolved toward a singular end

    def __init__(self, f, m, breakpoints=()):
        a, b = m.a, m.b
        pts = sorted({float(p) for p in breakpoints if a < p < b})
        edges_all = [a] + pts + [b]
        xs, ws, groups = [], [], []
        self.lo_block = self.hi_block = None
        for x0, x1 in zip(edges_all[:-1], edges_all[1:]):
            if x0 == 0:
                e = _log_panels(x1 * 10.0 ** -self._DEPTH, x1)
                x, w, k = _gl_nodes(e)
                self.lo_block = (len(np.concatenate(xs)) if xs else 0, k, len(e) - 1)
            elif math.isinf(x1):
                e = _log_panels(x0, x0 * 10.0 ** self._DEPTH)
                x, w, k = _gl_nodes(e)
                self.hi_block = (len(np.concatenate(xs)) if xs else 0, k, len(e) - 1)
            elif x1 / x0 > 10:
                x, w, _ = _gl_nodes(_log_panels(x0, x1))
            else:
                x, w, _ = _gl_nodes(np.linspace(x0, x1, 5), _GL16)
            xs.append(x)
            ws.append(w)
        self.x = np.concatenate(xs)
        self.w = np.concatenate(ws)
        if m.weight is not None:
            self.w = self.w * np.asarray(m.weight(self.x), dtype=float)
        self.absf = np.abs(np.asarray(f(self.x), dtype=float))

    def __call__(self, A, lam):
        vals = np.asarray(A(self.absf / lam), dtype=float)
        with np.errstate(invalid="ignore"):
            terms = np.where(self.w > 0, vals * self.w, 0.0)
        if np.any(np.isinf(terms)) or np.any(np.isnan(terms)):
            return math.inf
        total = float(np.sum(terms))
        for block, outward in ((self.lo_block, -1), (self.hi_block, 1)):
            if block is None:
                continue
            start, k, npan = block
            per = terms[start:start + k * npan].reshape(npan, k).sum(axis=1)
            # 4 panels per decade; outermost decade sits at the start (lo) or end (hi)
            dec = per.reshape(-1, 4).sum(axis=1)
            last, prev = (dec[0], dec[1]) if outward < 0 else (dec[-1], dec[-2])
            if last == 0:
                continue
            ratio = last / prev if prev > 0 else math.inf
            if ratio >= 1:
                return math.inf
            total += last * ratio / (1 - ratio)
        return total


class _StepModular:
    """Exact modular of a step function (plus an optional power tail)."""

    def __init__(self, f, m):
        g = f.grid
        lo, hi = np.maximum(g[:-1], m.a), np.minimum(g[1:], m.b)
        keep = hi > lo
        self.v = np.abs(f.values[keep])
        if m.weight is None:
            self.len = (hi - lo)[keep]
        else:
            self.len = np.array([integrate.quad(m.weight, x0, x1, limit=200)[0]
                                 for x0, x1 in zip(lo[keep], hi[keep])])
        self.tail = None
        if f.tail is not None and m.b > g[-1]:
            c, e = f.tail
            self.tail = _CallableModular(lambda x: c * x ** e, MeasureSpec(max(g[-1], m.a), m.b, m.weight))

    def __call__(self, A, lam):
        vals = np.asarray(A(self.v / lam), dtype=float)
        with np.errstate(invalid="ignore"):
            terms = np.where(self.len > 0, vals * self.len, 0.0)
        if np.any(np.isinf(terms)):
            return math.inf
        total = float(np.sum(terms))
        return total + (self.tail(A, lam) if self.tail is not None else 0.0)


def _make_modular(f, m, breakpoints=()):
    if isinstance(f, SampledFunction):
        if f.kind == "step":
            return _StepModular(f, m)
        bp = list(f.grid) + list(breakpoints)
        inner = MeasureSpec(max(m.a, f.grid[0]), min(m.b, f.grid[-1]) if f.tail is None else m.b, m.weight)
        return _CallableModular(f, inner, bp)
    return _CallableModular(f, m, breakpoints)


def _bisect_luxemburg(modular, guess=1.0, rtol=1e-10, max_doublings=400):
    """Smallest lam with modular(lam) <= 1, by bisection on log lam."""
    it = 0
    hi = guess
    while modular(hi) > 1:
        hi *= 4.0
        it += 1
        if it > max_doublings:
            return NormResult(math.inf, math.inf, it, True, ["modular above 1 for every tested scale"])
    lo = hi
    while True:
        hi, lo = lo, lo / 4.0
        it += 1
        if modular(lo) > 1:
            break
        if lo < 1e-300:
            return NormResult(0.0, 0.0, it)
    while hi / lo - 1 > rtol:
        # product form would underflow for tiny scales
        mid = math.sqrt(lo) * math.sqrt(hi)
        it += 1
        if modular(mid) > 1:
            lo = mid
        else:
            hi = mid
    return NormResult(hi, float(modular(hi)), it)


def luxemburg_norm(A, f, m=None, breakpoints=()):
    """inf{lam > 0 : int A(|f|/lam) dm <= 1} to relative tolerance 1e-10.

    ``f`` is a SampledFunction or a callable; ``m`` defaults to Lebesgue
    measure on the profile's own support (SampledFunction) or (0, inf).
    """
    if m is None:
        if isinstance(f, SampledFunction):
            m = MeasureSpec(f.grid[0], f.grid[-1] if f.tail is None else math.inf)
        else:
            m = MeasureSpec()
    mod = _make_modular(f, m, breakpoints)
    if isinstance(mod, _StepModular) and mod.tail is None and not np.any((mod.v > 0) & (mod.len > 0)):
        return NormResult(0.0, 0.0, 0)
    if isinstance(mod, _CallableModular) and not np.any((mod.absf > 0) & (mod.w > 0)):
        return NormResult(0.0, 0.0, 0)

    def M(lam):
        return mod(A, lam)

    return _bisect_luxemburg(M)


# ---------------------------------------------------------------------------
# rearrangements
# ---------------------------------------------------------------------------

def distribution_function(u, t):
    """mu(t) = |{x : |u(x)| > t}| for a SampledFunction without tail."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    g = u.grid
    if u.kind == "step":
        lens = np.diff(g)
        v = np.abs(u.values)
        return (lens[None, :] * (v[None, :] > t[:, None])).sum(axis=1)
    out = np.zeros_like(t)
    for x0, x1, y0, y1 in zip(g[:-1], g[1:], u.values[:-1], u.values[1:]):
        out += _segment_measure(x0, x1, y0, y1, t)
    return out


def _segment_measure(x0, x1, y0, y1, t, strict=True):
    """Measure of {x in [x0, x1] : |y(x)| > t} (or >= t) for linear y."""
    if y0 * y1 < 0:
        xc = x0 + (x1 - x0) * y0 / (y0 - y1)
        return (_segment_measure(x0, xc, y0, 0.0, t, strict) + _segment_measure(xc, x1, 0.0, y1, t, strict))
    a, b = abs(y0), abs(y1)
    L = x1 - x0
    if a == b:
        return L * ((a > t) if strict else (a >= t))
    lo, hi = min(a, b), max(a, b)
    return L * np.clip((hi - t) / (hi - lo), 0.0, 1.0)


def decreasing_rearrangement(u):
    """u*(r) = inf{t >= 0 : mu(t) <= r}, on (0, |supp|) as a SampledFunction."""
    if u.tail is not None:
        raise DomainError("rearrangement needs a profile of bounded support")
    if u.kind == "step":
        v = np.abs(u.values)
        lens = np.diff(u.grid)
        order = np.argsort(-v, kind="stable")
        v, lens = v[order], lens[order]
        return SampledFunction(np.concatenate([[0.0], np.cumsum(lens)]), v, "step")
    g, y = u.grid, u.values
    levels = set(np.abs(y).tolist())
    for x0, x1, y0, y1 in zip(g[:-1], g[1:], y[:-1], y[1:]):
        if y0 * y1 < 0:
            levels.add(0.0)
    levels = np.array(sorted(levels, reverse=True))
    pts = []
    for t in levels:
        mu_gt = float(distribution_function(u, t)[0])
        mu_ge = float(sum(_segment_measure(x0, x1, y0, y1, t, strict=False)
                          for x0, x1, y0, y1 in zip(g[:-1], g[1:], y[:-1], y[1:])))
        pts.append((mu_gt, t))
        pts.append((mu_ge, t))
    r = np.array([p[0] for p in pts])
    v = np.array([p[1] for p in pts])
    keep = np.concatenate([[True], np.diff(r) > 1e-15 * max(1.0, r[-1])])
    r, v = r[keep], v[keep]
    if r[0] > 0:
        r, v = np.concatenate([[0.0], r]), np.concatenate([[v[0]], v])
    return SampledFunction(r, v, "linear")


# ---------------------------------------------------------------------------
# Orlicz-Lorentz norm
# ---------------------------------------------------------------------------

def _norm_condition(A, q):
    """Does int^inf A(t)/t^(1+q) dt converge?"""
    asym = A.asymptotics("infinity")
    if asym is not None:
        if asym.kind == "powerlog":
            return asym.power < q or (abs(asym.power - q) < 1e-12 and asym.logpower < -1)
        return False
    verdict, _, _ = classify_integral(lambda t: np.asarray(A(t), dtype=float) / t ** (1 + q), "infinity")
    return verdict == "Converges"


def orlicz_lorentz_norm(A, q, u):
    """|| r^(-1/q) u*(r) ||_{L^A(0, |supp u|)}."""
    if not q > 1:
        raise DomainError("Orlicz-Lorentz norms need q > 1")
    us = decreasing_rearrangement(u)
    L = float(us.grid[-1])
    if not np.any(us.values != 0):
        return NormResult(0.0, 0.0, 0)

    def f(r):
        return r ** (-1.0 / q) * us(r)

    res = luxemburg_norm(A, f, MeasureSpec(0.0, L), breakpoints=us.grid)
    if not _norm_condition(A, q):
        res.flags.append("norm condition int^inf A(t)/t^(1+q) dt < inf fails")
    return res


# ---------------------------------------------------------------------------
# kernel norms
# ---------------------------------------------------------------------------

def _fast_conjugate(A):
    C = A.conjugate()
    return C.table if isinstance(C, NumericConjugate) else C


def _conj_tail_exponents(A, C, end, X):
    """(power, logpower) of conj(A) near ``end``; None when it vanishes identically there."""
    asym = A.conjugate_asymptotics(end)
    if asym is not None:
        if asym.kind == "powerlog":
            return float(asym.power), float(asym.logpower)
        if asym.kind in ("zero", "tiny"):
            return None
        return math.inf, 0.0
    d = 0.5
    lv = C.log_eval(np.exp(np.array([X - d, X + d])))
    if not np.all(np.isfinite(lv)):
        return None if end == "zero" else (math.inf, 0.0)
    return float((lv[1] - lv[0]) / (2 * d)), 0.0


class _KernelModular:
    """int_range conj(A)(rho^(-beta)/lam) drho with range (0, R) or (R, inf).

    Resolved by Gauss-Legendre in log rho while the argument of conj(A) lies
    in [1e-100, 1e100]; beyond, conj(A) follows its power-log tail model and
    the remainder is integrated in closed form in log t.
    """

    T_HI, T_LO = 100 * math.log(10), -100 * math.log(10)

    def __init__(self, A, beta, R, side):
        self.A, self.C = A, _fast_conjugate(A)
        self.beta, self.q = beta, 1.0 / beta
        self.logR, self.side = math.log(R), side
        self.tail_hi = _conj_tail_exponents(A, self.C, "infinity", self.T_HI)
        self.tail_lo = _conj_tail_exponents(A, self.C, "zero", self.T_LO)

    def _logC(self, x):
        t = np.exp(x)
        return np.asarray(self.C.log_eval(t), dtype=float)

    def __call__(self, lam):
        b, q, ll = self.beta, self.q, math.log(lam)
        # log t = -b log rho - log lam
        if self.side == "inner":
            v_cut = -(self.T_HI + ll) / b
            v0, v1 = max(v_cut, -1e9), self.logR
            tail_X, tail = self.T_HI, self.tail_hi
        else:
            v_cut = -(self.T_LO + ll) / b
            v0, v1 = self.logR, v_cut
            tail_X, tail = self.T_LO, self.tail_lo
        total = -np.inf
        if v1 > v0:
            edges = np.linspace(v0, v1, max(2, int(math.ceil(v1 - v0)) + 1))
            x, w, _ = _gl_nodes(edges)
            lc = self._logC(-b * x - ll)
            if np.any(lc == np.inf):
                return math.inf
            with np.errstate(divide="ignore"):
                total = logsumexp(lc + x + np.log(w))
            X = -b * (v0 if self.side == "inner" else v1) - ll
            if (self.side == "inner" and v_cut < v0) or (self.side == "outer" and v_cut > v1):
                X = None
        else:
            X = -b * self.logR - ll
        # remainder beyond the resolved argument range: q lam^-q int C(t) t^-q dlog t
        if X is None:
            X = tail_X
        lcX = float(self._logC(np.array([X]))[0])
        if tail is not None and lcX > -np.inf:
            P, G = tail
            if self.side == "inner":
                lt = _log_tail(abs(X), P - q, G) if abs(X) >= 1 else _log_tail(1.0, P - q, 0.0)
            else:
                lt = _log_tail(abs(X), -(P - q), G) if abs(X) >= 1 else _log_tail(1.0, -(P - q), 0.0)
            if lt == math.inf:
                return math.inf
            rem = math.log(q) - q * ll + lcX - q * X + lt
            total = np.logaddexp(total, rem)
        return float(np.exp(total))


def kernel_norms(A, params, r):
    """(K0(r), Kinf(r)) with

    K0(r)   = || rho^(-1+s/n) chi_(0, r^n) ||_{L^conj(A)(0, inf)}        (s < n)
    Kinf(r) = r || rho^(-1+(s-1)/n) chi_(r^n, inf) ||_{L^conj(A)(0, inf)} (s > 1)

    Components outside their range of s are NaN; divergent ones are inf.
    """
    if not isinstance(params, SmoothnessParams):
        params = SmoothnessParams(*params)
    n, s = params.n, float(params.s)
    R = float(r) ** n
    k0 = kinf = math.nan
    if s < n:
        mod = _KernelModular(A, 1.0 - s / n, R, "inner")
        k0 = _bisect_luxemburg(mod, guess=float(r) ** (s - n)).value
    if 1 < s < n + 1:
        mod = _KernelModular(A, 1.0 - (s - 1) / n, R, "outer")
        kinf = float(r) * _bisect_luxemburg(mod, guess=float(r) ** (s - 1 - n)).value
    return k0, kinf


# ---------------------------------------------------------------------------
# Hoelder and Hardy-Littlewood
# ---------------------------------------------------------------------------

def _three_point(f, x0, x1):
    xm = 0.5 * (x0 + x1)
    if f.kind == "step":
        v = f(np.array([xm]))[0]
        return v, v, v
    y = f(np.array([x0, xm, x1]))
    return y[0], y[1], y[2]


def _integral_abs_product(u, v, a=None, b=None):
    """int |u v| over the common support, exact for step and linear profiles."""
    g = np.union1d(u.grid, v.grid)
    if a is not None:
        g = g[(g >= a) & (g <= b)]
    total = 0.0
    for x0, x1 in zip(g[:-1], g[1:]):
        ua, um, ub = _three_point(u, x0, x1)
        va, vm, vb = _three_point(v, x0, x1)
        pa, pm, pb = ua * va, um * vm, ub * vb
        if pa >= 0 and pm >= 0 and pb >= 0 or pa <= 0 and pm <= 0 and pb <= 0:
            total += (x1 - x0) * abs(pa + 4 * pm + pb) / 6.0
        else:
            xs = np.linspace(x0, x1, 257)
            total += np.trapezoid(np.abs(u(xs) * v(xs)), xs)
    return float(total)


def holder_check(u, v, A, m=None, rtol=1e-9):
    """Check int|uv| <= 2 ||u||_A ||v||_conj(A) and int|uv| <= int u* v*."""
    lhs = _integral_abs_product(u, v)
    nu = luxemburg_norm(A, u, m).value
    nv = luxemburg_norm(A.conjugate(), v, m).value
    holder_rhs = 2.0 * nu * nv
    us, vs = decreasing_rearrangement(u), decreasing_rearrangement(v)
    hl_rhs = _integral_abs_product(us, vs)
    tol = rtol * max(1.0, abs(lhs))
    return {
        "lhs": lhs,
        "norm_u": nu,
        "norm_v_conjugate": nv,
        "holder_rhs": holder_rhs,
        "holder_pass": bool(lhs <= holder_rhs + tol),
        "hardy_littlewood_rhs": hl_rhs,
        "hardy_littlewood_pass": bool(lhs <= hl_rhs + tol),
        "passed": bool(lhs <= holder_rhs + tol and lhs <= hl_rhs + tol),
    }
