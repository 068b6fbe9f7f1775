"""Numerical circle-method apparatus for cubic exponential sums.

Conventions: ``e(x) = exp(2 pi i x)``.  Weyl sums run over ``sigma*P < x <= P``,
optionally restricted to the smooth set ``A(P, P^eta)``.  On a uniform grid
``alpha = k/M`` a Weyl sum is the discrete Fourier transform of the histogram of
``c*x^3 mod M``, so grid scans and full-circle moments are FFTs with exact
angles.  The oscillatory integral ``v`` is evaluated by Gauss-Legendre panels
for slow phases and by rotating the contour into the complex plane otherwise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial.laguerre import laggauss
from numpy.polynomial.legendre import leggauss
from scipy.special import gamma as gamma_fn

from .cubes import as_fraction, smooth_mask
from .errors import BudgetExceeded, ValidationError
from .matrices import IntMatrix, determinant, inverse

TWO_PI = 2.0 * math.pi


def e(x):
    return np.exp(1j * TWO_PI * np.asarray(x, dtype=float))


@dataclass
class CircleEstimate:
    value: complex | float
    err_est: float
    method: str
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        v = self.value
        if isinstance(v, complex) or np.iscomplexobj(v):
            v = {"re": float(np.real(v)), "im": float(np.imag(v))}
        else:
            v = float(v)
        return {"value": v, "err_est": float(self.err_est), "method": self.method, "params": _jsonable(self.params)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def _as_matrix(C) -> IntMatrix:
    return C if isinstance(C, IntMatrix) else IntMatrix.from_rows(C)


# --------------------------------------------------------------------------
# Weyl sums


@dataclass(frozen=True)
class WeylSumSpec:
    P: int
    sigma: float = 0.0
    eta: float | None = None
    c: int = 1

    def __post_init__(self):
        if self.P < 1:
            raise ValueError("P must be >= 1")
        if not 0 <= self.sigma < 1:
            raise ValueError("sigma must lie in [0, 1)")

    def support(self) -> np.ndarray:
        lo = math.floor(self.sigma * self.P) + 1
        xs = np.arange(lo, self.P + 1, dtype=np.int64)
        if self.eta is not None:
            xs = xs[smooth_mask(self.P, as_fraction(self.eta))[xs]]
        return xs

    @property
    def bandwidth(self) -> int:
        """Largest |frequency| present."""
        return abs(self.c) * self.P**3


def weyl_sum(spec: WeylSumSpec, alpha):
    """sum_x e(c alpha x^3).  Fractions are reduced exactly before the angle is taken."""
    xs = spec.support()
    if isinstance(alpha, Fraction):
        num, den = alpha.numerator, alpha.denominator
        m = np.array([(spec.c * num * int(x) ** 3) % den for x in xs], dtype=float)
        return complex(np.exp(1j * TWO_PI * m / den).sum())
    a = np.asarray(alpha, dtype=float)
    cubes = (spec.c * xs**3).astype(float)
    flat = a.reshape(-1)
    out = np.empty(flat.shape, dtype=complex)
    step = max(1, (1 << 22) // max(len(xs), 1))
    for i in range(0, len(flat), step):
        ph = np.mod(np.outer(flat[i:i + step], cubes), 1.0)
        out[i:i + step] = np.exp(1j * TWO_PI * ph).sum(axis=1)
    return complex(out[0]) if a.ndim == 0 else out.reshape(a.shape)


def _histogram(spec: WeylSumSpec, M: int) -> np.ndarray:
    xs = spec.support()
    res = np.array([(spec.c * int(x) ** 3) % M for x in xs], dtype=np.int64)
    return np.bincount(res, minlength=M).astype(float)


def weyl_grid(spec: WeylSumSpec, M: int) -> np.ndarray:
    """f(k/M) for k = 0..M-1."""
    return M * np.fft.ifft(_histogram(spec, M))


def weyl_grid_half(spec: WeylSumSpec, M: int) -> np.ndarray:
    """f(k/M) for k = 0..M//2; the rest follows from f(-a) = conj f(a)."""
    return np.conj(np.fft.rfft(_histogram(spec, M)))


# --------------------------------------------------------------------------
# Gauss sums and the singular series


def gauss_sum(q: int, a: int) -> complex:
    """S(q, a) = sum_{x=1}^q e(a x^3 / q) with exactly reduced angles."""
    if q < 1:
        raise ValueError("q must be >= 1")
    m = np.array([(a * x**3) % q for x in range(1, q + 1)], dtype=float)
    return complex(np.exp(1j * TWO_PI * m / q).sum())


@lru_cache(maxsize=4096)
def gauss_table(q: int) -> np.ndarray:
    """S(q, b) for b = 0..q-1."""
    hist = np.bincount(np.array([x**3 % q for x in range(1, q + 1)], dtype=np.int64), minlength=q)
    return q * np.fft.ifft(hist.astype(float))


def A_of_q(q: int, C, *, budget: float = 5e7) -> complex:
    """q^{-3s} sum over a mod q with (q, a_1..a_r) = 1 of prod_j S(q, gamma_j(a))^3."""
    C = _as_matrix(C)
    r, s = C.rows, C.cols
    if float(q) ** r > budget:
        raise BudgetExceeded(float(q) ** r, budget, "A(q) residue sum")
    if q == 1:
        return 1.0 + 0j
    S3 = gauss_table(q) ** 3
    grids = np.meshgrid(*[np.arange(q, dtype=np.int64)] * r, indexing="ij")
    a = np.stack([g.ravel() for g in grids])  # r x q^r
    g = np.gcd.reduce(np.vstack([a, np.full((1, a.shape[1]), q)]), axis=0)
    a = a[:, g == 1]
    cm = np.array(C.tolist(), dtype=np.int64)
    total = np.ones(a.shape[1], dtype=complex)
    for j in range(s):
        total *= S3[(cm[:, j] @ a) % q]
    return complex(total.sum() / float(q) ** (3 * s))


def singular_series(Q: int, C, *, budget: float = 5e7) -> CircleEstimate:
    """S(Q) = sum_{q <= Q} A(q); the tail is O(Q^{-1/(2r)})."""
    C = _as_matrix(C)
    terms = [A_of_q(q, C, budget=budget) for q in range(1, int(Q) + 1)]
    value = sum(terms)
    max_imag = max(abs(t.imag) for t in terms)
    tail_exp = -1.0 / (2 * C.rows)
    return CircleEstimate(float(value.real), float(Q) ** tail_exp, "closed-form",
                          {"Q": int(Q), "tail_exponent": tail_exp, "max_imag": max_imag})


# --------------------------------------------------------------------------
# the oscillatory integral v


_GL16 = leggauss(16)
_LAG = laggauss(48)
_GAMMA43 = float(gamma_fn(4.0 / 3.0))
_SMALL_K = 8.0


def _w_unit_direct(kappa: np.ndarray) -> np.ndarray:
    """int_0^1 e(kappa u^3) du for |kappa| <= _SMALL_K, 8 panels of 16 nodes."""
    x, w = _GL16
    panels = 8
    nodes = ((x[None, :] + 1) / 2 + np.arange(panels)[:, None]).ravel() / panels
    wts = np.tile(w / 2, panels) / panels
    ph = np.outer(kappa, nodes**3)
    return np.exp(1j * TWO_PI * ph) @ wts


def _w_unit_contour(kappa: np.ndarray) -> np.ndarray:
    """int_0^1 e(kappa u^3) du for large |kappa|: the full ray minus the tail from 1.

    On the tail substitute u^3 = 1 + i s / t (t = 2 pi kappa) so that the
    integrand decays like e^{-s}; Gauss-Laguerre then handles it.
    """
    t = TWO_PI * kappa
    sgn = np.sign(kappa)
    full = _GAMMA43 * np.abs(t) ** (-1.0 / 3.0) * np.exp(1j * sgn * math.pi / 6)
    s, w = _LAG
    g = (1 + 1j * s[None, :] / t[:, None]) ** (-2.0 / 3.0)
    tail = np.exp(1j * t) * (1j / (3 * t)) * (g @ w)
    return full - tail


def w_unit(kappa) -> np.ndarray:
    """int_0^1 e(kappa u^3) du, vectorized."""
    k = np.atleast_1d(np.asarray(kappa, dtype=float))
    out = np.empty(k.shape, dtype=complex)
    small = np.abs(k) <= _SMALL_K
    if small.any():
        out[small] = _w_unit_direct(k[small])
    if (~small).any():
        out[~small] = _w_unit_contour(k[~small])
    return out if np.ndim(kappa) else out[0]


def v_fast(beta, P: float, sigma: float = 0.0):
    """v(beta) = int_{sigma P}^P e(beta g^3) dg via scaling to the unit interval."""
    b = np.asarray(beta, dtype=float)
    k = b * float(P) ** 3
    out = w_unit(k)
    if sigma:
        out = out - sigma * w_unit(k * sigma**3)
    return P * out


def v_integral(beta: float, P: float, sigma: float = 0.0, *, rtol: float = 1e-8,
               max_panels: int = 1 << 16) -> CircleEstimate:
    """Adaptive composite Gauss-Legendre with panel doubling.

    The starting panel count tracks the number of oscillations
    ``|beta| (P^3 - (sigma P)^3)``.
    """
    a, b = sigma * P, float(P)
    if b <= a:
        return CircleEstimate(0j, 0.0, "closed-form", {"beta": beta, "P": P, "sigma": sigma})
    if beta == 0:
        return CircleEstimate(complex(b - a), 0.0, "closed-form", {"beta": 0.0, "P": P, "sigma": sigma})
    x, w = _GL16
    osc = abs(beta) * (b**3 - a**3)

    def rule(panels):
        edges = np.linspace(a, b, panels + 1)
        h = np.diff(edges)[:, None]
        nodes = edges[:-1, None] + (x[None, :] + 1) * h / 2
        return complex((np.exp(1j * TWO_PI * beta * nodes**3) * (w[None, :] * h / 2)).sum())

    panels = int(min(max_panels, 2 + math.ceil(osc)))
    prev = rule(panels)
    err = math.inf
    while panels < max_panels:
        panels *= 2
        cur = rule(panels)
        err = abs(cur - prev)
        prev = cur
        if err <= rtol * max(abs(cur), 1e-300):
            break
    converged = err <= rtol * max(abs(prev), 1e-300)
    return CircleEstimate(prev, err, "quadrature",
                          {"beta": beta, "P": P, "sigma": sigma, "nodes": panels * 16, "converged": converged})


# --------------------------------------------------------------------------
# singular integral


def _tensor_gl(X: float, per_unit: int, r: int, budget: float):
    x, w = leggauss(8)
    panels = max(2, math.ceil(2 * X * per_unit))
    edges = np.linspace(-X, X, panels + 1)
    h = np.diff(edges)[:, None]
    nodes = (edges[:-1, None] + (x[None, :] + 1) * h / 2).ravel()
    wts = (w[None, :] * h / 2).ravel()
    if float(len(nodes)) ** r > budget:
        raise BudgetExceeded(float(len(nodes)) ** r, budget, "singular integral nodes")
    return nodes, wts


def _scaled_integral(C: IntMatrix, X: float, sigma: float, per_unit: int, budget: float) -> complex:
    """int over [-X, X]^r of prod_j W(gamma_j(k))^3, W(kappa) = v(kappa) / P at P = 1."""
    r, s = C.rows, C.cols
    nodes, wts = _tensor_gl(X, per_unit, r, budget)
    cm = np.array(C.tolist(), dtype=float)
    if r == 1:
        integrand = np.ones(len(nodes), dtype=complex)
        for j in range(s):
            integrand *= v_fast(cm[0, j] * nodes, 1.0, sigma) ** 3
        return complex(integrand @ wts)
    total = 0j
    grids = np.meshgrid(*[np.arange(len(nodes))] * (r - 1), indexing="ij")
    rest = np.stack([g.ravel() for g in grids])  # (r-1) x n^(r-1)
    rest_w = np.prod(wts[rest], axis=0)
    for i0, (k0, w0) in enumerate(zip(nodes, wts)):
        pts = np.vstack([np.full(rest.shape[1], k0), nodes[rest]])  # r x n^(r-1)
        integrand = np.full(rest.shape[1], w0, dtype=complex) * rest_w
        for j in range(s):
            integrand *= v_fast(cm[:, j] @ pts, 1.0, sigma) ** 3
        total += integrand.sum()
    return complex(total)


def singular_integral(X: float, C, P: float, sigma: float = 0.0, *, budget: float = 4e6) -> CircleEstimate:
    """J(X) = int over [-X P^-3, X P^-3]^r of prod_j v(gamma_j(beta))^3.

    With beta = k / P^3 the integral equals P^{3s-3r} times a P-free integral
    over [-X, X]^r, which is evaluated by tensor Gauss-Legendre; the error
    estimate compares two panel densities.
    """
    C = _as_matrix(C)
    r, s = C.rows, C.cols
    if r > 3:
        raise ValueError("tensor quadrature supports r <= 3")
    cmax = max(sum(abs(C[i, j]) for j in range(s)) for i in range(r))
    per_unit = max(4, math.ceil(1.5 * cmax))
    coarse = _scaled_integral(C, X, sigma, per_unit, budget)
    fine = _scaled_integral(C, X, sigma, 2 * per_unit, budget)
    scale = float(P) ** (3 * s - 3 * r)
    return CircleEstimate(fine.real * scale, abs(fine - coarse) * scale, "quadrature",
                          {"X": X, "P": P, "sigma": sigma, "per_unit": 2 * per_unit,
                           "imag": fine.imag * scale, "scaled": fine.real})


# --------------------------------------------------------------------------
# arcs


def loglog_floor(P: float) -> float:
    """L = log log P, floored at 2 so that desk-scale arcs are not degenerate."""
    return max(2.0, math.log(math.log(P))) if P > math.e else 2.0


def box_Q(P: float, r: int) -> float:
    return max(2.0, loglog_floor(P) ** (10 * r))


def _iroot4_floor(n: int) -> int:
    x = int(round(n ** 0.25)) if n > 0 else 0
    while x**4 > n:
        x -= 1
    while (x + 1) ** 4 <= n:
        x += 1
    return x


@dataclass(frozen=True)
class ArcDissection:
    """family: 'wide' (q <= P^{3/4}, |q a - a| <= P^{-9/4}), 'narrow' or 'box'."""

    family: str
    P: int
    r: int = 1

    def __post_init__(self):
        if self.family not in ("wide", "narrow", "box"):
            raise ValueError(f"unknown family {self.family!r}")

    @property
    def L(self) -> float:
        return loglog_floor(self.P)

    @property
    def Q(self) -> float:
        return box_Q(self.P, self.r)

    @property
    def qmax(self) -> int:
        if self.family == "wide":
            return _iroot4_floor(self.P**3)  # q^4 <= P^3
        if self.family == "narrow":
            return int(math.floor(self.L))
        return int(math.floor(self.Q))

    def accepts(self, q: int, dist) -> bool:
        """Whether |q alpha - a| = dist (exact when a Fraction) is small enough."""
        if self.family == "wide":
            d = Fraction(dist)
            return d**4 * self.P**9 <= 1
        return float(dist) <= self.L * float(self.P) ** -3

    def width(self) -> float:
        """Bound on |q alpha - a| (narrow, wide) or on |alpha_i - a_i/q| (box)."""
        if self.family == "wide":
            return float(self.P) ** -2.25
        if self.family == "narrow":
            return self.L * float(self.P) ** -3
        return self.Q * float(self.P) ** -3


def convergents(alpha: Fraction, qmax: int):
    """Continued-fraction convergents p/q of alpha with q <= qmax."""
    h0, h1, k0, k1 = 0, 1, 1, 0
    x = Fraction(alpha)
    while True:
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > qmax:
            return
        yield h1, k1
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def arc_membership(alpha, dis: ArcDissection):
    """Smallest-q arc containing alpha, as (q, a) (or (q, a-tuple) for boxes), else None."""
    if dis.family == "box":
        return _box_membership(np.atleast_1d(np.asarray(alpha, dtype=float)), dis)
    al = Fraction(alpha)
    if not 0 <= al < 1:
        raise ValueError("alpha must lie in [0, 1)")
    qmax = dis.qmax
    # Legendre: |alpha - a/q| < 1/(2 q^2) forces a/q to be a convergent
    if 2 * dis.width() * max(qmax, 1) >= 1:
        return arc_membership_bruteforce(al, dis)
    hits = []
    for p, q in convergents(al, qmax):
        if 0 <= p <= q and math.gcd(p, q) == 1 and dis.accepts(q, abs(q * al - p)):
            hits.append((q, p))
    # alpha just below 1 may sit in the arc around 1/1 without 1/1 being a convergent
    if qmax >= 1 and dis.accepts(1, abs(al - 1)):
        hits.append((1, 1))
    return min(hits) if hits else None


def arc_membership_bruteforce(alpha, dis: ArcDissection):
    al = Fraction(alpha)
    for q in range(1, dis.qmax + 1):
        for a in range(0, q + 1):
            if math.gcd(a, q) == 1 and dis.accepts(q, abs(q * al - a)):
                return (q, a)
    return None


def _box_membership(alpha: np.ndarray, dis: ArcDissection):
    qs = np.arange(1, dis.qmax + 1, dtype=np.int64)
    a = np.rint(qs[:, None] * alpha[None, :]).astype(np.int64)
    ok = np.all(np.abs(alpha[None, :] - a / qs[:, None]) <= dis.width(), axis=1)
    g = np.gcd.reduce(np.concatenate([a, qs[:, None]], axis=1), axis=1)
    ok &= g == 1
    idx = np.flatnonzero(ok)
    if len(idx) == 0:
        return None
    i = idx[0]
    return int(qs[i]), tuple(int(v) for v in a[i])


def arc_intervals(dis: ArcDissection) -> list[tuple[float, float]]:
    """The family's arcs in [0, 1] as a sorted, merged list of intervals."""
    if dis.family == "box":
        raise ValueError("box arcs are not one-dimensional")
    wid = dis.width()
    ivs = []
    for q in range(1, dis.qmax + 1):
        for a in range(0, q + 1):
            if math.gcd(a, q) == 1:
                ivs.append((max(0.0, (a - wid) / q), min(1.0, (a + wid) / q)))
    return _merge(ivs)


def _merge(ivs):
    ivs = sorted(ivs)
    out = []
    for lo, hi in ivs:
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def _subtract(ivs, holes):
    out = []
    for lo, hi in ivs:
        pieces = [(lo, hi)]
        for hlo, hhi in holes:
            nxt = []
            for plo, phi in pieces:
                if hhi <= plo or hlo >= phi:
                    nxt.append((plo, phi))
                    continue
                if hlo > plo:
                    nxt.append((plo, hlo))
                if hhi < phi:
                    nxt.append((hhi, phi))
            pieces = nxt
        out.extend(pieces)
    return out


def wide_arc_mask(M: int, P: int) -> np.ndarray:
    """mask[k] is True when k/M lies in a wide major arc (exact integer test)."""
    mask = np.zeros(M, dtype=bool)
    d = _iroot4_floor(M**4 // P**9)  # |q k - a M| <= d  <=>  |q k/M - a| <= P^{-9/4}
    qmax = _iroot4_floor(P**3)
    for q in range(1, qmax + 1):
        for a in range(0, q + 1):
            if math.gcd(a, q) != 1:
                continue
            lo = -((d - a * M) // q)  # ceil((aM - d)/q)
            hi = (a * M + d) // q
            lo, hi = max(lo, 0), min(hi, M - 1)
            if lo <= hi:
                mask[lo:hi + 1] = True
    return mask


# --------------------------------------------------------------------------
# scans and moments


def minor_arc_sup(c: int, P: int, M: int | None = None, *, refine: bool = True) -> CircleEstimate:
    """max |f(c theta)| over grid points theta = k/M outside the wide arcs."""
    M = 4 * P**3 if M is None else int(M)
    if M < 4 * P**3:
        raise ValueError("grid must have at least 4 P^3 points")
    spec = WeylSumSpec(P, c=c)
    half = np.abs(weyl_grid_half(spec, M))
    mask = wide_arc_mask(M, P)[: len(half)]
    # theta -> 1 - theta maps arcs to arcs and |f| to itself, so half the grid suffices
    vals = np.where(mask, -1.0, half)
    k = int(np.argmax(vals))
    best = float(vals[k])
    params = {"c": c, "P": P, "M": M, "argmax": k / M}
    if refine and best > 0:
        dis = ArcDissection("wide", P)
        fine = np.linspace((k - 1) / M, (k + 1) / M, 65)
        fine = fine[(fine >= 0) & (fine < 1)]
        ok = [arc_membership(Fraction(t).limit_denominator(10 * M * M), dis) is None for t in fine]
        if any(ok):
            fv = np.abs(weyl_sum(spec, fine[np.array(ok)]))
            j = int(np.argmax(fv))
            if fv[j] > best:
                best = float(fv[j])
                params["argmax"] = float(fine[np.array(ok)][j])
    return CircleEstimate(best, 0.0, "grid-scan", params)


def _F_spec(kind: str, P: int, c: int, sigma: float, eta):
    f = WeylSumSpec(P, sigma, None, c)
    if kind == "f":
        return [(f, 1)]
    if kind == "fg2":
        return [(f, 1), (WeylSumSpec(P, sigma, eta, c), 2)]
    raise ValueError(f"unknown kind {kind!r}")


def _F_grid(kind, P, c, sigma, eta, M):
    out = np.ones(M // 2 + 1, dtype=complex)
    for spec, power in _F_spec(kind, P, c, sigma, eta):
        out *= weyl_grid_half(spec, M) ** power
    return out


def _F_at(kind, P, c, sigma, eta, alpha):
    out = np.ones(np.shape(alpha), dtype=complex)
    for spec, power in _F_spec(kind, P, c, sigma, eta):
        out *= weyl_sum(spec, alpha) ** power
    return out


def _half_grid_mean(vals: np.ndarray, M: int) -> float:
    """Mean over the full grid of a function with |F(-a)| = |F(a)|, given k = 0..M//2."""
    w = np.full(len(vals), 2.0)
    w[0] = 1.0
    if M % 2 == 0:
        w[-1] = 1.0
    return float((vals * w).sum() / M)


def arc_moment(c: int, P: int, power: float, region: str = "full", *, kind: str = "f",
               sigma: float = 0.0, eta: float | None = 0.5, M: int | None = None) -> CircleEstimate:
    """int over region of |F(c theta)|^power, F = f or f g^2.

    region: 'full' (uniform grid; exact for even integer powers), 'major' (wide
    arcs) or 'major_minus_narrow'.
    """
    bw = 3 if kind == "fg2" else 1
    bw *= abs(c) * P**3
    params = {"c": c, "P": P, "power": power, "region": region, "kind": kind, "sigma": sigma, "eta": eta}
    if region == "full":
        even = float(power).is_integer() and int(power) % 2 == 0
        need = int(math.ceil(power / 2 * bw)) + 1
        M = M or (need if even else 8 * need)
        M += M % 2
        vals = np.abs(_F_grid(kind, P, c, sigma, eta, M)) ** power
        val = _half_grid_mean(vals, M)
        coarse = _half_grid_mean(vals[::2], M // 2) if (M // 2) % 2 == 0 else val
        err = 1e-12 * max(val, 1.0) if even and M >= need else abs(val - coarse)
        params.update(M=M, exact_grid=even and M >= need)
        return CircleEstimate(val, err, "grid-scan", params)
    wide = arc_intervals(ArcDissection("wide", P))
    if region == "major":
        ivs = wide
    elif region == "major_minus_narrow":
        ivs = _subtract(wide, arc_intervals(ArcDissection("narrow", P)))
    else:
        raise ValueError(f"unknown region {region!r}")
    x, w = _GL16
    total, total_coarse, nodes_used = 0.0, 0.0, 0
    for lo, hi in ivs:
        if hi <= lo:
            continue
        panels = 1 + math.ceil(2 * power * bw * (hi - lo))
        vals = []
        for p in (panels, 2 * panels):
            edges = np.linspace(lo, hi, p + 1)
            h = np.diff(edges)[:, None]
            nodes = edges[:-1, None] + (x[None, :] + 1) * h / 2
            F = np.abs(_F_at(kind, P, c, sigma, eta, np.mod(nodes.ravel(), 1.0))) ** power
            vals.append(float((F.reshape(nodes.shape) * (w[None, :] * h / 2)).sum()))
            nodes_used += nodes.size
        total_coarse += vals[0]
        total += vals[1]
    params.update(arcs=len(ivs), nodes=nodes_used)
    return CircleEstimate(total, abs(total - total_coarse), "quadrature", params)


def _forms_grid_product(C: IntMatrix, grids: list[np.ndarray], M: int, budget: float) -> float:
    """Mean over (Z/M)^r of prod_j grids[j][gamma_j(k) mod M]."""
    r, s = C.rows, C.cols
    if r > 2:
        raise ValueError("grid estimators support r <= 2")
    if float(M) ** r > budget:
        raise BudgetExceeded(float(M) ** r, budget, "tensor grid")
    cm = np.array(C.tolist(), dtype=np.int64)
    if r == 1:
        k = np.arange(M, dtype=np.int64)
        prod = np.ones(M)
        for j in range(s):
            prod *= grids[j][(cm[0, j] * k) % M]
        return float(prod.sum() / M)
    k2 = np.arange(M, dtype=np.int64)
    total = 0.0
    rows = max(1, (1 << 21) // M)
    for start in range(0, M, rows):
        k1 = np.arange(start, min(M, start + rows), dtype=np.int64)[:, None]
        prod = np.ones((len(k1), M))
        for j in range(s):
            prod *= grids[j][(cm[0, j] * k1 + cm[1, j] * k2[None, :]) % M]
        total += prod.sum()
    return float(total / M**2)


def _abs_grid(factors, M):
    """|prod of Weyl sums| on the full M-grid, factors = [(spec, power)]."""
    out = np.ones(M)
    for spec, power in factors:
        out *= np.abs(weyl_grid(spec, M)) ** power
    return out


def _F_factors(l: int, P: int, sigma: float, eta):
    f0 = WeylSumSpec(P, sigma)
    if l == 1:
        return [(f0, 3)]
    if l == 2:
        return [(f0, 1), (WeylSumSpec(P, sigma, eta), 2)]
    raise ValueError("l must be 1 or 2")


def mixed_moment_estimate(C, P: int, l: int = 1, M: int | None = None, *, sigma: float = 0.0,
                          eta: float = 0.5, budget: float = 4e8) -> CircleEstimate:
    """Riemann estimate of K_l = int over [0,1)^r of prod_j |F_l(gamma_j(alpha))|.

    Order-of-magnitude estimator: the integrand is not a trigonometric
    polynomial, so the grid value is not exact.
    """
    C = _as_matrix(C)
    cmax = max(abs(v) for v in C.entries)
    M = M or 8 * cmax * P**3
    g = _abs_grid(_F_factors(l, P, sigma, eta), M)
    val = _forms_grid_product(C, [g] * C.cols, M, budget)
    return CircleEstimate(val, math.nan, "grid-scan",
                          {"P": P, "l": l, "M": M, "spacing": 1 / M, "estimator": "order-of-magnitude"})


def omega_moment(C, P: int, h: str = "f0", triple=(0, 1, 2), M: int | None = None, *, sigma: float = 0.0,
                 eta: float = 0.5, budget: float = 4e8) -> CircleEstimate:
    """Omega_h = int |h(gamma_a) h(gamma_b) h(gamma_c)|^4, exact on a fine enough grid."""
    C = _as_matrix(C)
    sub = IntMatrix.from_columns([C.col(j) for j in triple])
    spec = WeylSumSpec(P, sigma, eta if h == "g" else None)
    need = 2 * P**3 * max(sum(abs(v) for v in sub.row(i)) for i in range(sub.rows)) + 1
    M = M or need
    g = _abs_grid([(spec, 4)], M)
    val = _forms_grid_product(sub, [g] * sub.cols, M, budget)
    return CircleEstimate(val, 1e-9 * val, "grid-scan", {"P": P, "h": h, "triple": list(triple), "M": M,
                                                        "exact_grid": M >= need})


def j_moment(Lam, P: int, l: int = 1, M: int | None = None, *, sigma: float = 0.0, eta: float = 0.5,
             budget: float = 4e8) -> CircleEstimate:
    """Grid estimate of J_l for an adjuvant matrix with at most two rows."""
    Lam = _as_matrix(Lam)
    R = Lam.rows - 1
    cmax = max(abs(v) for v in Lam.entries)
    M = M or 8 * cmax * P**3
    f0 = WeylSumSpec(P, sigma)
    phi = [(f0, 2)] if l == 1 else [(WeylSumSpec(P, sigma, eta), 2)]
    F = _abs_grid(_F_factors(l, P, sigma, eta), M)
    ph = _abs_grid(phi, M)
    Ph = _abs_grid(phi + [(f0, 2)], M)
    grids = [F] + [ph] * R + [F] + [Ph] * R
    val = _forms_grid_product(Lam, grids, M, budget)
    return CircleEstimate(val, math.nan, "grid-scan", {"P": P, "l": l, "M": M, "estimator": "order-of-magnitude"})


def f_moment(P: int, l: int = 1, *, sigma: float = 0.0, eta: float = 0.5) -> CircleEstimate:
    """int_0^1 |F_l|^2 exactly via a grid finer than the bandwidth."""
    M = 3 * P**3 + 2
    M += M % 2
    g = np.ones(M // 2 + 1, dtype=complex)
    for spec, power in _F_factors(l, P, sigma, eta):
        g *= weyl_grid_half(spec, M) ** power
    val = _half_grid_mean(np.abs(g) ** 2, M)
    return CircleEstimate(val, 1e-12 * val, "grid-scan", {"P": P, "l": l, "M": M, "exact_grid": True})


def elimination_constant(C) -> int:
    """Least kappa with kappa * C_J^{-1} integral for every r-column submatrix C_J.

    Isolating alpha from any r of the forms gamma_j(alpha) then costs at most a
    factor kappa in the denominator.
    """
    C = _as_matrix(C)
    r, s = C.shape
    kappa = 1
    for cols in itertools.combinations(range(s), r):
        sub = C.select_columns(cols)
        if determinant(sub) == 0:
            raise ValidationError(f"columns {cols} are dependent")
        kappa = math.lcm(kappa, inverse(sub).common_denominator())
    return kappa


# --------------------------------------------------------------------------
# the major-arc prediction


def major_arc_prediction(C, P: int, sigma: float = 0.0, variant: str = "plain", *, eta: float = 0.5,
                         q_cap: int = 1024, x_cap: float | None = None,
                         budget: float = 4e6) -> CircleEstimate:
    """C * S(Q) * J(Q) with Q = L^{10 r}, L = log log P (floored), Q capped at q_cap.

    variant 'plain': all cube variables unrestricted and the constant is 1;
    'smooth': the constant is c^{2s} with c = g(0) / v(0).
    """
    C = _as_matrix(C)
    r, s = C.rows, C.cols
    Q_literal = box_Q(P, r)
    Q = int(min(Q_literal, q_cap))
    X = float(Q if x_cap is None else min(Q, x_cap))
    series = singular_series(Q, C)
    integral = singular_integral(X, C, P, sigma, budget=budget)
    if variant == "plain":
        const = 1.0
    elif variant == "smooth":
        g0 = len(WeylSumSpec(P, sigma, eta).support())
        const = (g0 / ((1 - sigma) * P)) ** (2 * s)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    value = const * series.value * integral.value
    err = abs(const) * (abs(series.value) * integral.err_est + abs(integral.value) * series.err_est)
    return CircleEstimate(value, err, "closed-form*quadrature",
                          {"Q": Q, "Q_literal": Q_literal, "X": X, "L": loglog_floor(P), "constant": const,
                           "kappa": elimination_constant(C),
                           "series": series.value, "integral": integral.value, "P": P, "sigma": sigma,
                           "variant": variant})
