"""Exact counts of linear systems in cubes.

A system is a list of columns.  Column ``j`` carries an integer coefficient
vector ``c_j`` (length r) and a signed block of cubes
``t_j = sum_m sign_m * x_m^3``, each ``x_m`` ranging over its own domain.
We count assignments with ``sum_j c_j t_j = H``.

Two engines are provided.  ``direct_count`` walks every raw variable assignment
and serves as the oracle.  ``mitm_count`` collapses each column to a weighted
distribution of ``t_j``, convolves the two halves of a column split and joins
them.  The r-vectors of partial sums are packed into one int64 by a mixed-radix
linear map, so every convolution and the final join are scalar numpy operations.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cubes import (
    DEFAULT_N_CAP,
    Plain,
    RhoTable,
    Smooth,
    Window,
    as_fraction,
    icbrt,
    representable_set,
    rho_table,
    smooth_mask,
)
from .errors import BudgetExceeded
from .matrices import IntMatrix

DEFAULT_BUDGET = 1e10
DIRECT_CAP = 5e7
_CHUNK = 1 << 23  # elements per expansion step
_INT64_SAFE = 1 << 62


# --------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class Domain:
    """Values a variable may take; ``lo < x <= hi`` style windows are given as lo+1."""

    lo: int
    hi: int
    eta: Fraction | None = None  # restrict to A(hi, hi^eta)

    def values(self) -> np.ndarray:
        if self.hi < self.lo:
            return np.zeros(0, dtype=np.int64)
        xs = np.arange(self.lo, self.hi + 1, dtype=np.int64)
        if self.eta is not None:
            xs = xs[smooth_mask(self.hi, self.eta)[xs]]
        return xs


@dataclass(frozen=True)
class Column:
    coeffs: tuple[int, ...]
    signs: tuple[int, ...]
    domains: tuple[Domain, ...]

    def __post_init__(self):
        if len(self.signs) != len(self.domains):
            raise ValueError("one domain per signed cube")

    def raw_terms(self) -> list[np.ndarray]:
        """Per variable, the values sign * x^3 it contributes to t."""
        return [sign * dom.values() ** 3 for sign, dom in zip(self.signs, self.domains)]

    def distribution(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct values of t and their multiplicities."""
        vals = np.zeros(1, dtype=np.int64)
        wts = np.ones(1, dtype=np.int64)
        for sign, dom in zip(self.signs, self.domains):
            cubes = sign * dom.values() ** 3
            vals, wts = _expand(vals, wts, cubes, np.ones_like(cubes))
        return vals, wts


@dataclass(frozen=True)
class ValueColumn:
    """Column whose single variable ranges over an explicit list of values."""

    coeffs: tuple[int, ...]
    values: tuple[int, ...]

    def raw_terms(self) -> list[np.ndarray]:
        return [np.asarray(self.values, dtype=np.int64)]

    def distribution(self) -> tuple[np.ndarray, np.ndarray]:
        vals = np.unique(np.asarray(self.values, dtype=np.int64))
        return vals, np.ones_like(vals)


@dataclass
class LinearFormSystem:
    """Columns plus the right-hand side H of ``sum_j c_j t_j = H``."""

    columns: list[Column | ValueColumn]
    H: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.H)

    @property
    def matrix(self) -> IntMatrix:
        return IntMatrix.from_columns([c.coeffs for c in self.columns])

    @property
    def n_variables(self) -> int:
        return sum(len(c.raw_terms()) for c in self.columns)

    @classmethod
    def from_matrix(cls, C, H=None, signature=(1, 1, 1), domains=None) -> "LinearFormSystem":
        """Every column gets the same signature; ``domains`` is one Domain per signed cube."""
        C = IntMatrix.from_rows(C) if not isinstance(C, IntMatrix) else C
        H = tuple(int(h) for h in (H if H is not None else [0] * C.rows))
        if len(H) != C.rows:
            raise ValueError("H must have one entry per row")
        if domains is None:
            raise ValueError("domains required")
        cols = [Column(tuple(C.col(j)), tuple(signature), tuple(domains)) for j in range(C.cols)]
        return cls(cols, H)


@dataclass
class CountReport:
    count: int
    size_name: str
    size: int
    strategy: str
    partitions: int = 1
    millis: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"count": str(self.count), self.size_name: self.size, "strategy": self.strategy,
             "partitions": self.partitions, "millis": round(self.millis, 3)}
        d.update(self.extra)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# --------------------------------------------------------------------------
# numpy helpers


def _aggregate(keys: np.ndarray, wts: np.ndarray):
    if len(keys) == 0:
        return keys, wts
    order = np.argsort(keys, kind="stable")
    k = keys[order]
    w = wts[order]
    starts = np.flatnonzero(np.concatenate(([True], k[1:] != k[:-1])))
    return k[starts], np.add.reduceat(w, starts)


def _expand(keys, wts, step_keys, step_wts):
    """Convolve {keys: wts} with {step_keys: step_wts}, chunked to bound memory."""
    if len(keys) == 0 or len(step_keys) == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=wts.dtype)
    per = max(1, _CHUNK // len(keys))
    out_k, out_w = [], []
    for i in range(0, len(step_keys), per):
        sk = step_keys[i:i + per]
        sw = step_wts[i:i + per]
        k = (keys[:, None] + sk[None, :]).ravel()
        w = (wts[:, None] * sw[None, :]).ravel()
        k, w = _aggregate(k, w)
        out_k.append(k)
        out_w.append(w)
    if len(out_k) == 1:
        return out_k[0], out_w[0]
    return _aggregate(np.concatenate(out_k), np.concatenate(out_w))


def _radices(widths) -> list[int]:
    m, out = 1, []
    for w in widths:
        out.append(m)
        m *= w
    return out + [m]


# --------------------------------------------------------------------------
# engines


def _column_ranges(dists, coeffs):
    """Per-coordinate (min, max) of c_j * t over the column's support."""
    out = []
    for (vals, _), c in zip(dists, coeffs):
        lo_t, hi_t = (int(vals.min()), int(vals.max())) if len(vals) else (0, 0)
        out.append([(min(ci * lo_t, ci * hi_t), max(ci * lo_t, ci * hi_t)) for ci in c])
    return out


def _box(ranges, idx, r):
    lo = [sum(ranges[j][i][0] for j in idx) for i in range(r)]
    hi = [sum(ranges[j][i][1] for j in idx) for i in range(r)]
    return lo, hi


def choose_split(sizes: list[int]) -> tuple[int, ...]:
    """Left half minimizing the larger of the two support products."""
    s = len(sizes)
    logs = [math.log(max(z, 1)) for z in sizes]
    total = sum(logs)
    if s <= 16:
        best, best_idx = None, ()
        for mask in range(1 << s):
            left = sum(logs[j] for j in range(s) if mask >> j & 1)
            cost = max(left, total - left)
            if best is None or cost < best - 1e-12:
                best, best_idx = cost, tuple(j for j in range(s) if mask >> j & 1)
        return best_idx
    order = sorted(range(s), key=lambda j: -logs[j])
    left, lsum = [], 0.0
    for j in order:
        if lsum + logs[j] <= total / 2:
            left.append(j)
            lsum += logs[j]
    return tuple(sorted(left))


def mitm_estimate(sizes, split) -> float:
    left = math.prod(sizes[j] for j in split) if split else 1
    right = math.prod(sizes[j] for j in range(len(sizes)) if j not in split) or 1
    return float(left + right)


def _half(dists, kappas, idx, dtype):
    keys = np.zeros(1, dtype=np.int64)
    wts = np.ones(1, dtype=dtype)
    for j in idx:
        vals, w = dists[j]
        keys, wts = _expand(keys, wts, vals * kappas[j], w.astype(dtype))
    return keys, wts


def _mitm_core(dists, coeffs, H, split):
    r = len(H)
    s = len(dists)
    right = tuple(j for j in range(s) if j not in split)
    ranges = _column_ranges(dists, coeffs)
    llo, lhi = _box(ranges, split, r)
    rlo, rhi = _box(ranges, right, r)
    # both L and H - R must be packed injectively
    widths = [max(lhi[i], H[i] - rlo[i]) - min(llo[i], H[i] - rhi[i]) + 1 for i in range(r)]
    rad = _radices(widths)
    totals = [int(w.sum()) if len(w) else 0 for _, w in dists]
    total = math.prod(totals)
    if rad[-1] >= _INT64_SAFE or max(abs(x) for x in llo + lhi + rlo + rhi + list(H) + [0]) * rad[-1] >= _INT64_SAFE:
        return _dict_count(dists, coeffs, H, split)
    dtype = np.int64 if total < _INT64_SAFE else object
    kappas = [sum(c[i] * rad[i] for i in range(r)) for c in coeffs]
    hkey = sum(H[i] * rad[i] for i in range(r))
    lk, lw = _half(dists, kappas, split, dtype)
    rk, rw = _half(dists, kappas, right, dtype)
    if len(lk) == 0 or len(rk) == 0:
        return 0
    target = hkey - rk
    pos = np.searchsorted(lk, target)
    pos_c = np.minimum(pos, len(lk) - 1)
    hit = lk[pos_c] == target
    if not hit.any():
        return 0
    prod = lw[pos_c[hit]] * rw[hit]
    return int(prod.sum()) if dtype is np.int64 else sum(int(x) for x in prod)


def _dict_count(dists, coeffs, H, split):
    """Pure-Python fallback for huge coordinates."""
    def half(idx):
        acc = {(0,) * len(H): 1}
        for j in idx:
            vals, w = dists[j]
            c = coeffs[j]
            nxt: dict = {}
            for key, a in acc.items():
                for t, b in zip(vals.tolist(), w.tolist()):
                    k = tuple(key[i] + c[i] * t for i in range(len(H)))
                    nxt[k] = nxt.get(k, 0) + a * b
            acc = nxt
        return acc
    s = len(dists)
    left = half(split)
    right = half([j for j in range(s) if j not in split])
    return sum(a * left.get(tuple(H[i] - k[i] for i in range(len(H))), 0) for k, a in right.items())


def _partition_slices(n: int, parts: int) -> list[slice]:
    parts = max(1, min(parts, max(n, 1)))
    bounds = [n * p // parts for p in range(parts + 1)]
    return [slice(bounds[p], bounds[p + 1]) for p in range(parts)]


def mitm_count(system: LinearFormSystem, split=None, *, partitions: int = 1,
               budget: float = DEFAULT_BUDGET) -> tuple[int, tuple[int, ...]]:
    """Exact solution count by meet-in-the-middle; returns (count, left split)."""
    dists = [c.distribution() for c in system.columns]
    coeffs = [c.coeffs for c in system.columns]
    sizes = [len(d[0]) for d in dists]
    split = choose_split(sizes) if split is None else tuple(sorted(split))
    est = mitm_estimate(sizes, split)
    if est > budget:
        raise BudgetExceeded(est, budget, "meet-in-the-middle")
    if not dists:
        return int(all(h == 0 for h in system.H)), split
    # partition the support of one column; the pieces are disjoint
    pcol = split[0] if split else 0
    total = 0
    vals, w = dists[pcol]
    for sl in _partition_slices(len(vals), partitions):
        part = list(dists)
        part[pcol] = (vals[sl], w[sl])
        total += _mitm_core(part, coeffs, tuple(system.H), split)
    return total, split


def direct_count(system: LinearFormSystem, *, partitions: int = 1, budget: float = 5e7) -> int:
    """Enumerate every raw variable assignment; the oracle for mitm_count."""
    r = system.r
    contribs = []  # per variable: array (n_values, r) of its r-vector contributions
    for col in system.columns:
        for terms in col.raw_terms():
            ts = [int(t) for t in terms]
            contribs.append(np.array([[int(ci) * t for ci in col.coeffs] for t in ts], dtype=object).reshape(len(ts), r))
    sizes = [len(a) for a in contribs]
    est = float(math.prod(sizes)) if sizes else 1.0
    if est > budget:
        raise BudgetExceeded(est, budget, "direct enumeration")
    if not contribs:
        return int(all(h == 0 for h in system.H))
    H = np.array(system.H, dtype=object)
    big = any(abs(int(v)) >= _INT64_SAFE // (len(contribs) + 1) for a in contribs for v in a.ravel()) or \
        any(abs(h) >= _INT64_SAFE // 2 for h in system.H)
    dt = object if big else np.int64
    contribs = [a.astype(dt) for a in contribs]
    H = H.astype(dt)
    total = 0
    first, rest = contribs[0], contribs[1:]
    for sl in _partition_slices(len(first), partitions):
        acc = first[sl]
        for a in rest:
            acc = (acc[:, None, :] + a[None, :, :]).reshape(-1, r)
        total += int(np.all(acc == H[None, :], axis=1).sum())
    return total


def count(system: LinearFormSystem, strategy: str = "auto", *, split=None, partitions: int = 1,
          budget: float = DEFAULT_BUDGET, size_name: str = "P", size: int = 0) -> CountReport:
    t0 = time.perf_counter()
    if strategy == "direct":
        # the direct engine materializes every assignment, so memory caps it too
        value = direct_count(system, partitions=partitions, budget=min(budget, DIRECT_CAP))
        label = "direct"
    elif strategy in ("auto", "mitm"):
        value, split = mitm_count(system, split, partitions=partitions, budget=budget)
        s = len(system.columns)
        right = [j for j in range(s) if j not in split]
        label = f"meet-in-middle({','.join(map(str, split))}|{','.join(map(str, right))})"
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return CountReport(value, size_name, size, label, partitions, 1000 * (time.perf_counter() - t0))


# --------------------------------------------------------------------------
# variants -> domains


def variant_domains(P: int, variant=Plain()) -> tuple[Domain, Domain, Domain]:
    """Domains of (x, y, z) for the three-cube signature."""
    if isinstance(variant, Plain):
        d = Domain(1, P)
        return d, d, d
    if isinstance(variant, Smooth):
        eta = as_fraction(variant.eta)
        return Domain(1, P), Domain(1, P, eta), Domain(1, P, eta)
    if isinstance(variant, Window):
        lo = math.floor(variant.sigma * P) + 1
        eta = as_fraction(variant.eta)
        return Domain(lo, P), Domain(lo, P, eta), Domain(lo, P, eta)
    raise TypeError(f"unknown variant {variant!r}")


def count_system(C, H, P: int, variant=Plain(), *, signature=None, strategy: str = "auto",
                 partitions: int = 1, budget: float = DEFAULT_BUDGET, split=None) -> CountReport:
    """Solutions of sum_j C_ij (x_j^3 + y_j^3 + z_j^3) = H_i under the variant.

    ``signature`` replaces the three-cube block with any signed block over
    [1, P], e.g. ``(1,)`` or ``(1, 1)`` for the |f|^2 and |f|^4 counts.
    """
    C = C if isinstance(C, IntMatrix) else IntMatrix.from_rows(C)
    H = [0] * C.rows if H is None else list(H)
    if signature is None:
        signature, domains = (1, 1, 1), variant_domains(P, variant)
    else:
        domains = (Domain(1, P),) * len(signature)
    system = LinearFormSystem.from_matrix(C, H, signature, domains)
    return count(system, strategy, split=split, partitions=partitions, budget=budget, size_name="P", size=P)


def i_omega_system(D, P: int) -> LinearFormSystem:
    """First R columns carry x^3 - y^3, the rest x^3 + y^3 - z^3 - w^3."""
    from .auxiliary import AuxiliaryMatrix

    if isinstance(D, AuxiliaryMatrix):
        R, D = D.shape.R, D.D
    else:
        D = D if isinstance(D, IntMatrix) else IntMatrix.from_rows(D)
        R = D.rows
    dom = Domain(1, P)
    cols = []
    for j in range(D.cols):
        signs = (1, -1) if j < R else (1, 1, -1, -1)
        cols.append(Column(tuple(D.col(j)), signs, (dom,) * len(signs)))
    return LinearFormSystem(cols, (0,) * D.rows)


def count_I_omega(D, P: int, *, strategy: str = "auto", partitions: int = 1,
                  budget: float = DEFAULT_BUDGET, split=None) -> CountReport:
    if P < 1:
        raise ValueError("P must be >= 1")
    return count(i_omega_system(D, P), strategy, split=split, partitions=partitions, budget=budget,
                 size_name="P", size=P)


def count_upsilon(C, N: int, *, strategy: str = "auto", partitions: int = 1,
                  budget: float = DEFAULT_BUDGET, table: RhoTable | None = None) -> CountReport:
    """n in [1, N]^s with C n = 0 and every n_j a sum of three positive cubes."""
    C = C if isinstance(C, IntMatrix) else IntMatrix.from_rows(C)
    t0 = time.perf_counter()
    if N < 3:
        return CountReport(0, "N", N, "empty", partitions, 0.0)
    rep = np.flatnonzero(representable_set(N, table))
    cols = [ValueColumn(tuple(C.col(j)), tuple(int(v) for v in rep)) for j in range(C.cols)]
    system = LinearFormSystem(cols, (0,) * C.rows)
    out = count(system, strategy, partitions=partitions, budget=budget, size_name="N", size=N)
    out.millis = 1000 * (time.perf_counter() - t0)
    return out


def upsilon_direct(C, N: int) -> int:
    """Scan over the first s-1 coordinates; oracle for count_upsilon when s is small."""
    C = C if isinstance(C, IntMatrix) else IntMatrix.from_rows(C)
    rep = representable_set(N) if N >= 3 else np.zeros(N + 1, dtype=bool)
    vals = [int(v) for v in np.flatnonzero(rep)]
    total = 0
    for n in itertools.product(vals, repeat=C.cols):
        if all(sum(C[i, j] * n[j] for j in range(C.cols)) == 0 for i in range(C.rows)):
            total += 1
    return total


# --------------------------------------------------------------------------
# correlation sums over the positive cone


def cone_constant(A: IntMatrix) -> int:
    """C_A = max_j sum_i |a_ij|: every form is at most C_A * N on [1, N]^r."""
    return max(sum(abs(A[i, j]) for i in range(A.rows)) for j in range(A.cols))


def enumerate_cone(A, N: int, *, chunk: int = 1 << 16, lead=None):
    """Yield arrays of points n in [1, N]^r with every form A^T n strictly positive.

    ``lead`` restricts the first coordinate to the given range.
    """
    A = A if isinstance(A, IntMatrix) else IntMatrix.from_rows(A)
    r = A.rows
    if N < 1:
        return
    At = np.array(A.tolist(), dtype=np.int64)  # r x s
    lead = range(1, N + 1) if lead is None else lead
    tail = np.array(list(itertools.product(range(1, N + 1), repeat=r - 1)), dtype=np.int64).reshape(-1, r - 1) \
        if r > 1 else np.zeros((1, 0), dtype=np.int64)
    per = max(1, chunk // len(tail))
    lead = list(lead)
    for i in range(0, len(lead), per):
        heads = np.array(lead[i:i + per], dtype=np.int64)
        pts = np.concatenate([np.repeat(heads, len(tail))[:, None], np.tile(tail, (len(heads), 1))], axis=1)
        forms = pts @ At
        keep = np.all(forms > 0, axis=1)
        if keep.any():
            yield pts[keep]


def count_xi(A, h, N: int, variant=Plain(), *, partitions: int = 1, budget: float = DEFAULT_BUDGET,
             table: RhoTable | None = None, n_cap: int = DEFAULT_N_CAP) -> CountReport:
    """Xi(N; A; h) = sum over the cone of prod_j rho(Lambda_j(n) + h_j)."""
    t0 = time.perf_counter()
    A = A if isinstance(A, IntMatrix) else IntMatrix.from_rows(A)
    h = [0] * A.cols if h is None else [int(x) for x in h]
    if len(h) != A.cols:
        raise ValueError("h needs one entry per form")
    if any(x < 0 for x in h):
        raise ValueError("offsets must be non-negative")
    if N < 1:
        return CountReport(0, "N", N, "direct", partitions, 0.0)
    if float(N) ** A.rows > budget:
        raise BudgetExceeded(float(N) ** A.rows, budget, "cone enumeration")
    limit = cone_constant(A) * N + max(h)
    if table is None or table.limit < limit or table.variant != variant:
        table = rho_table(limit, variant, n_cap=n_cap, partitions=partitions)
    rho = table.counts
    At = np.array(A.tolist(), dtype=np.int64)
    hv = np.array(h, dtype=np.int64)
    exact_big = float(max(int(rho.max()), 1)) ** A.cols * float(N) ** A.rows >= _INT64_SAFE
    total = 0
    for sl in _partition_slices(N, partitions):
        for pts in enumerate_cone(A, N, lead=range(sl.start + 1, sl.stop + 1)):
            vals = rho[pts @ At + hv]
            if exact_big:
                total += sum(math.prod(int(v) for v in row) for row in vals)
            else:
                total += int(np.prod(vals, axis=1).sum())
    return CountReport(total, "N", N, "direct", partitions, 1000 * (time.perf_counter() - t0))


def xi_reduction_bound(A, h, N: int, variant=Plain(), **kw) -> CountReport:
    """Count of the eliminated system B(x^3+y^3+z^3) = Bh that dominates Xi."""
    from .auxiliary import eliminate_cone_variables

    A = A if isinstance(A, IntMatrix) else IntMatrix.from_rows(A)
    h = [0] * A.cols if h is None else list(h)
    B, H, _ = eliminate_cone_variables(A, h)
    P = icbrt(cone_constant(A) * N + max(h))
    rep = count_system(B, H, P, variant, **kw)
    rep.size_name, rep.size = "N", N
    rep.extra = {"P": P}
    return rep
