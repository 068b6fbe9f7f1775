"""Representation counts for sums of three positive cubes, smooth sets and friends.

``rho(n)`` counts ORDERED triples ``(x, y, z)`` of positive integers with
``x^3 + y^3 + z^3 = n``.  Three variants are tabulated:

* ``Plain()``: no further restriction,
* ``Smooth(eta)``: every prime divisor of ``y*z`` is at most ``n^(eta/3)``,
* ``Window(sigma, P, eta)``: ``sigma*P < x, y, z <= P`` and ``y, z`` lie in the
  smooth set ``A(P, P^eta)``.

Smoothness thresholds are compared exactly: ``eta`` is turned into a fraction
``a/b`` and ``p <= n^(eta/3)`` is tested as ``p^(3b) <= n^a``.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import BudgetExceeded

DEFAULT_N_CAP = 10**8
CACHE_MAGIC = b"CUBL"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sHBQddQ")


def icbrt(n: int) -> int:
    """Largest x >= 0 with x^3 <= n."""
    if n < 0:
        raise ValueError("negative argument")
    x = int(round(n ** (1 / 3)))
    while x**3 > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


def as_fraction(eta) -> Fraction:
    f = Fraction(eta)
    return f if f.denominator <= 10**6 else f.limit_denominator(10**6)


# --------------------------------------------------------------------------
# constants


@dataclass(frozen=True)
class Surd:
    """The number (p + q*sqrt(d)) / c with rational p, q and positive integer d, c."""

    p: Fraction
    q: Fraction
    d: int
    c: Fraction = Fraction(1)

    def __float__(self):
        return float((self.p + self.q * math.sqrt(self.d)) / self.c)

    def __mul__(self, k):
        return Surd(self.p, self.q, self.d, self.c / Fraction(k))

    __rmul__ = __mul__

    def normalized(self):
        return (self.p / self.c, self.q / self.c, self.d)

    def __eq__(self, other):
        return isinstance(other, Surd) and self.normalized() == other.normalized()

    def __hash__(self):
        return hash(self.normalized())

    def __lt__(self, x) -> bool:
        """Exact comparison with a rational number."""
        p, q, d = self.normalized()
        x = Fraction(x)
        # p + q sqrt(d) < x  <=>  q sqrt(d) < x - p
        lhs_sign = (q > 0) - (q < 0)
        rhs = x - p
        if lhs_sign <= 0:
            return rhs > 0 or (lhs_sign < 0 and q * q * d > rhs * rhs)
        return rhs > 0 and q * q * d < rhs * rhs


# xi = (sqrt(2833) - 43) / 123, nu_2 = 3 xi = (sqrt(2833) - 43) / 41
XI = Surd(Fraction(-43), Fraction(1), 2833, Fraction(123))
NU1 = Fraction(1, 2)
NU2 = Surd(Fraction(-43), Fraction(1), 2833, Fraction(41))


@dataclass(frozen=True)
class Constants:
    xi: float = float(XI)
    nu1: float = float(NU1)
    nu2: float = float(NU2)


CONSTANTS = Constants()


# --------------------------------------------------------------------------
# primes and smooth numbers


def largest_prime_factor_table(n: int) -> np.ndarray:
    """lpf[k] = largest prime factor of k (lpf[1] = 1, lpf[0] = 0)."""
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p::p] = False
    lpf = (np.arange(n + 1) >= 1).astype(np.int64)
    for p in np.nonzero(is_p)[0]:
        lpf[p::p] = p
    return lpf


@dataclass(frozen=True)
class SmoothSet:
    P: int
    Z: float
    mask: np.ndarray  # mask[k] for k in 0..P; mask[0] is False

    def __contains__(self, n: int) -> bool:
        return 1 <= n <= self.P and bool(self.mask[n])

    def members(self) -> list[int]:
        return [int(k) for k in np.nonzero(self.mask)[0]]

    def __len__(self):
        return int(self.mask.sum())


def smooth_set(P: int, Z: int) -> SmoothSet:
    """A(P, Z): integers in [1, P] all of whose prime divisors are at most Z."""
    if not 2 <= Z <= P:
        raise ValueError(f"need 2 <= Z <= P, got Z={Z}, P={P}")
    lpf = largest_prime_factor_table(P)
    mask = (lpf <= Z) & (np.arange(P + 1) >= 1)
    return SmoothSet(P, Z, mask)


def smooth_mask(P: int, eta) -> np.ndarray:
    """Membership of [0, P] in A(P, P^eta), compared exactly."""
    a, b = as_fraction(eta).numerator, as_fraction(eta).denominator
    lpf = largest_prime_factor_table(P)
    bound = P**a
    ok = np.zeros(P + 1, dtype=bool)
    for p in np.unique(lpf[1:]):
        ok[lpf == p] = int(p) ** b <= bound
    ok[0] = False
    return ok


# --------------------------------------------------------------------------
# rho tables


@dataclass(frozen=True)
class Plain:
    tag = 0


@dataclass(frozen=True)
class Smooth:
    eta: float
    tag = 1


@dataclass(frozen=True)
class Window:
    sigma: float
    P: int
    eta: float = 1.0
    tag = 2


@dataclass
class RhoTable:
    limit: int
    variant: object
    counts: np.ndarray

    def __getitem__(self, n):
        return self.counts[n]

    def __len__(self):
        return len(self.counts)


def _triple_histogram(N: int, xs: np.ndarray, ys: np.ndarray, zs: np.ndarray, threshold=None) -> np.ndarray:
    """counts[n] = #{(x, y, z) in xs*ys*zs : x^3+y^3+z^3 = n <= N}.

    ``threshold`` maps (y, z) pairs to the least admissible n (smooth variant).
    """
    counts = np.zeros(N + 1, dtype=np.int64)
    y3 = ys.astype(np.int64) ** 3
    z3 = zs.astype(np.int64) ** 3
    yz = (y3[:, None] + z3[None, :]).ravel()
    thr = None if threshold is None else np.maximum(threshold[ys][:, None], threshold[zs][None, :]).ravel()
    keep = yz <= N
    yz = yz[keep]
    if thr is not None:
        thr = thr[keep]
    order = np.argsort(yz, kind="stable")
    yz = yz[order]
    if thr is not None:
        thr = thr[order]
    for x in xs.astype(np.int64):
        x3 = x**3
        hi = np.searchsorted(yz, N - x3, side="right")
        if hi == 0:
            break
        vals = yz[:hi] + x3
        if thr is not None:
            vals = vals[vals >= thr[:hi]]
        counts += np.bincount(vals, minlength=N + 1)
    return counts


def _sliced_histogram(N, xs, ys, zs, threshold, partitions: int) -> np.ndarray:
    counts = np.zeros(N + 1, dtype=np.int64)
    for chunk in np.array_split(xs, min(partitions, max(len(xs), 1))):
        if len(chunk):
            counts += _triple_histogram(N, chunk, ys, zs, threshold=threshold)
    return counts


def _smooth_threshold(M: int, eta, cap: int) -> np.ndarray:
    """thr[y] = least n with (largest prime of y)^(3b) <= n^a, capped at cap."""
    fr = as_fraction(eta)
    a, b = fr.numerator, fr.denominator
    lpf = largest_prime_factor_table(M)
    thr = np.zeros(M + 1, dtype=np.int64)
    for p in np.unique(lpf[1:]):
        p = int(p)
        if p <= 1:
            continue
        target = p ** (3 * b)
        try:
            n0 = int(math.exp(3 * b * math.log(p) / a))
        except OverflowError:
            n0 = cap
        n0 = min(max(n0, 1), cap)
        if n0 ** a >= target:
            while n0 > 1 and (n0 - 1) ** a >= target:
                n0 -= 1
        else:
            while n0 < cap and n0**a < target:
                n0 += 1
        thr[lpf == p] = n0
    return thr


def rho_table(N: int, variant=Plain(), *, n_cap: int = DEFAULT_N_CAP, cache_dir=None,
              partitions: int = 1) -> RhoTable:
    """Tabulate counts[n] for 0 <= n <= N (ordered triples).

    ``partitions`` splits the range of x into slices whose histograms are
    added in order; integer addition makes the result independent of it.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if partitions < 1:
        raise ValueError("partitions must be >= 1")
    if N > n_cap:
        raise BudgetExceeded(N, n_cap, "rho table")
    if cache_dir is not None:
        cached = load_cached(cache_dir, N, variant)
        if cached is not None:
            return cached
    if isinstance(variant, Plain):
        xs = np.arange(1, icbrt(N) + 1)
        counts = _sliced_histogram(N, xs, xs, xs, None, partitions)
    elif isinstance(variant, Smooth):
        xs = np.arange(1, icbrt(N) + 1)
        M = int(xs[-1]) if len(xs) else 1
        thr = _smooth_threshold(M, variant.eta, N + 1)
        counts = _sliced_histogram(N, xs, xs, xs, thr, partitions)
    elif isinstance(variant, Window):
        P = variant.P
        lo = math.floor(variant.sigma * P)
        xs = np.arange(lo + 1, P + 1)
        sm = smooth_mask(P, variant.eta)
        ys = xs[sm[xs]]
        counts = _sliced_histogram(N, xs, ys, ys, None, partitions)
    else:
        raise TypeError(f"unknown variant {variant!r}")
    table = RhoTable(N, variant, counts)
    if cache_dir is not None:
        save_cached(cache_dir, table)
    return table


def rho_window_table(P: int, sigma: float = 0.0, eta=1) -> RhoTable:
    """Counts with sigma*P < x, y, z <= P and y, z in A(P, P^eta), up to 3P^3."""
    return rho_table(3 * P**3, Window(sigma, P, eta))


def rho_brute(n: int) -> int:
    """Direct triple loop; test oracle."""
    m = icbrt(n)
    return sum(1 for x in range(1, m + 1) for y in range(1, m + 1) for z in range(1, m + 1) if x**3 + y**3 + z**3 == n)


# --------------------------------------------------------------------------
# small counts


def c_h(d: int, h: int, P: int) -> int:
    """Number of 1 <= x, y <= P with d (x^3 - y^3) = h."""
    if d == 0:
        raise ValueError("d must be non-zero")
    if h % d:
        return 0
    m = h // d
    cubes = {x**3: x for x in range(1, P + 1)}
    return sum(1 for y in range(1, P + 1) if y**3 + m in cubes)


def moment_sum(table: RhoTable, power: int, N: int | None = None) -> int:
    """sum_{n <= N} counts[n]^power, exactly."""
    if power < 1:
        raise ValueError("power must be >= 1")
    N = table.limit if N is None else N
    if N > table.limit:
        raise ValueError(f"N={N} exceeds table limit {table.limit}")
    c = table.counts[: N + 1]
    if power <= 2 and len(c) and int(c.max()) ** power * len(c) < 2**62:
        return int(np.sum(c.astype(np.int64) ** power))
    return sum(int(v) ** power for v in c if v)


def correlation_sum(table: RhoTable, N: int, h: int = 1) -> int:
    """sum_{1 <= n <= N} counts[n] counts[n+h]."""
    if N + h > table.limit:
        raise ValueError("table too short")
    c = table.counts.astype(np.int64)
    return int(np.dot(c[1:N + 1], c[1 + h:N + 1 + h]))


def representable_set(N: int, table: RhoTable | None = None) -> np.ndarray:
    """Boolean mask over [0, N]: n is a sum of three positive cubes."""
    table = table if table is not None and table.limit >= N else rho_table(N)
    return table.counts[: N + 1] > 0


def exceptional_set(table: RhoTable, N: int, theta: float):
    """S_theta(N) = {n <= N : counts[n] > N^theta} and its mass sum counts[n]."""
    c = table.counts[: N + 1]
    members = np.nonzero(c > N**theta)[0]
    members = members[members >= 1]
    return [int(n) for n in members], int(c[members].sum())


# --------------------------------------------------------------------------
# cache files


def _variant_params(variant):
    if isinstance(variant, Plain):
        return 0, 0.0, 0.0, 0
    if isinstance(variant, Smooth):
        return 1, float(variant.eta), 0.0, 0
    if isinstance(variant, Window):
        return 2, float(variant.eta), float(variant.sigma), int(variant.P)
    raise TypeError(variant)


def cache_path(cache_dir, N: int, variant) -> Path:
    tag, eta, sigma, P = _variant_params(variant)
    return Path(cache_dir) / f"rho_v{tag}_N{N}_e{eta!r}_s{sigma!r}_P{P}.cubl"


def save_table(path, table: RhoTable) -> None:
    tag, eta, sigma, P = _variant_params(table.variant)
    if len(table.counts) and int(table.counts.max()) >= 2**32:
        raise OverflowError("counts exceed the u32 cache format")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, tag, table.limit, eta, sigma, P))
        fh.write(table.counts.astype("<u4").tobytes())
    os.replace(tmp, path)


def load_table(path) -> RhoTable:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        magic, version, tag, N, eta, sigma, P = _HEADER.unpack(head)
        if magic != CACHE_MAGIC or version != CACHE_VERSION:
            raise ValueError(f"{path}: not a rho cache file")
        counts = np.frombuffer(fh.read(), dtype="<u4").astype(np.int64)
    if len(counts) != N + 1:
        raise ValueError(f"{path}: truncated")
    variant = [Plain(), Smooth(eta), Window(sigma, P, eta)][tag]
    return RhoTable(N, variant, counts)


def save_cached(cache_dir, table: RhoTable) -> None:
    save_table(cache_path(cache_dir, table.limit, table.variant), table)


def load_cached(cache_dir, N: int, variant) -> RhoTable | None:
    path = cache_path(cache_dir, N, variant)
    if not path.exists():
        return None
    try:
        table = load_table(path)
    except (ValueError, struct.error):
        return None
    if _variant_params(table.variant) != _variant_params(variant) or table.limit != N:
        return None
    table.variant = variant
    return table
