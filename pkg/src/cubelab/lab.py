"""Exponent experiments: sweep a size parameter, fit a log-log slope and compare
it with an asserted exponent.

Upper-bound targets pass when the fitted slope is at most ``exponent + tol``;
lower-bound targets when it is at least ``exponent - tol``.  ``bound_check``
adds the implied constant: ``K = value / x^(exponent + eps)`` (inverted for
lower bounds), and the verdict is "consistent" when no K in the upper half of
the sweep exceeds twice the first K of that half.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import circle, counting, cubes
from .auxiliary import AuxShape, default_auxiliary
from .cubes import XI, NU1, NU2
from .errors import BudgetExceeded

EXACT_TOL = 0.1
QUAD_TOL = 0.5


@dataclass
class ExponentFit:
    points: list[tuple[float, float]]
    slope: float
    intercept: float
    max_residual: float


def fit_exponent(points) -> ExponentFit:
    """Least-squares slope of log(value) against log(x)."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise ValueError("sizes and values must be positive")
    lx = np.log([x for x, _ in pts])
    ly = np.log([y for _, y in pts])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return ExponentFit(pts, float(slope), float(intercept), float(np.abs(resid).max()))


@dataclass
class BoundCheck:
    K: float
    Ks: list[float]
    verdict: str


def bound_check(points, exponent: float, eps: float = 0.0, *, lower: bool = False) -> BoundCheck:
    pts = [(float(x), float(y)) for x, y in points]
    if not pts:
        raise ValueError("no points")
    if lower:
        Ks = [x ** (exponent - eps) / y if y > 0 else math.inf for x, y in pts]
    else:
        Ks = [y / x ** (exponent + eps) for x, y in pts]
    upper = Ks[len(Ks) // 2:]
    ok = all(k <= 2 * upper[0] for k in upper) and all(math.isfinite(k) for k in Ks)
    return BoundCheck(max(Ks), Ks, "consistent" if ok else "inconsistent")


# --------------------------------------------------------------------------
# asserted exponents


def _xi() -> float:
    return float(XI)


EXPONENTS = {
    "square-moment": lambda **_: 7 / 6,
    "correlation": lambda r=1, **_: r + 1 / 6,
    "smooth-correlation": lambda r=1, **_: r + _xi(),
    "correlation-strong": lambda r=1, **_: 7 * r / 6,
    "aux-system": lambda R=2, omega=0, **_: 3 * R - 2 + 3 * omega,
    "sixth-moment": lambda l=1, **_: 3 + (float(NU1) if l == 1 else float(NU2)),
    "mixed-moment": lambda r=2, l=1, **_: 3 * r + (float(NU1) if l == 1 else float(NU2)),
    "upsilon-lower": lambda s=3, r=1, **_: s * (1 - 2 * _xi()) - r,
    "exceptional-mass": lambda theta=0.0, **_: 1 + _xi() - theta,
    "system-lower": lambda s=3, r=1, **_: 3 * s - 3 * r,
}

LOWER_TARGETS = {"upsilon-lower", "system-lower"}


@dataclass
class ExperimentSpec:
    target: str
    instance: dict
    sweep: list
    exponent: float | None = None
    tolerance: float | None = None
    eps: float = 0.05

    def __post_init__(self):
        if self.target not in EXPONENTS:
            raise ValueError(f"unknown target {self.target!r}")
        if len(self.sweep) < 3:
            raise ValueError("sweep needs at least 3 points")
        if self.exponent is None:
            self.exponent = asserted_exponent(self.target, self.instance)
        if self.tolerance is None:
            self.tolerance = QUAD_TOL if self.target in ("mixed-moment",) else EXACT_TOL

    @property
    def lower(self) -> bool:
        return self.target in LOWER_TARGETS


def _shape_params(instance) -> dict:
    inst = dict(instance)
    if "shape" in inst:
        n, r, t, w = inst["shape"]
        sh = AuxShape(n, r, t, w)
        inst.update(R=sh.R, omega=w)
    if "A" in inst:
        inst["r"] = len(inst["A"])
    if "C" in inst:
        inst["r"] = len(inst["C"])
        inst["s"] = len(inst["C"][0])
    return inst


def asserted_exponent(target: str, instance: dict) -> float:
    return float(EXPONENTS[target](**_shape_params(instance)))


SHIPPED_HNS_2x5 = [[1, 0, -3, -3, -2], [0, 1, 3, 2, -2]]
EXAMPLE_2x4 = [[1, 0, 1, 1], [0, 1, 1, 2]]

SHIPPED = {
    "square-moment": ExperimentSpec("square-moment", {}, [10**3, 10**4, 10**5, 10**6]),
    "correlation": ExperimentSpec("correlation", {"A": [[1, 1]], "h": [0, 1]}, [10**4, 10**5, 10**6]),
    "smooth-correlation": ExperimentSpec("smooth-correlation", {"A": [[1, 1]], "h": [0, 1], "eta": 0.5}, [10**4, 10**5, 10**6]),
    "correlation-strong": ExperimentSpec("correlation-strong", {"A": EXAMPLE_2x4, "h": [0, 0, 0, 0]}, [200, 400, 800]),
    "correlation-r2": ExperimentSpec("correlation", {"A": EXAMPLE_2x4, "h": [0, 0, 0, 0]}, [200, 400, 800], tolerance=QUAD_TOL),
    "aux-system": ExperimentSpec("aux-system", {"shape": [0, 3, 2, 0]}, [2, 3, 4, 5, 6], tolerance=QUAD_TOL),
    "sixth-moment": ExperimentSpec("sixth-moment", {"l": 1}, [8, 12, 16, 24, 32]),
    "mixed-moment": ExperimentSpec("mixed-moment", {"C": EXAMPLE_2x4, "l": 1}, [4, 6, 8]),
    "upsilon-lower": ExperimentSpec("upsilon-lower", {"C": [[1, 1, -2]]}, [10, 100, 1000, 10000]),
    "exceptional-mass": ExperimentSpec("exceptional-mass", {"theta": 0.05, "eta": 1.0}, [10**4, 10**5, 10**6]),
    "system-lower": ExperimentSpec("system-lower", {"C": [[1, 1, -2]]}, [8, 12, 16, 24, 32]),
}


# short tags accepted wherever a shipped spec name is expected
ALIASES = {
    "eq13": "square-moment",
    "thm11": "correlation",
    "thm11r2": "correlation-r2",
    "thm12": "smooth-correlation",
    "eq14": "correlation-strong",
    "lemma24": "aux-system",
    "lemma31": "sixth-moment",
    "thm33": "mixed-moment",
    "thm13": "upsilon-lower",
    "lemma55": "exceptional-mass",
    "lemma51": "system-lower",
}


def resolve(name: str) -> str:
    """Shipped spec name for ``name`` or one of its short tags."""
    name = ALIASES.get(name, name)
    if name not in SHIPPED:
        raise ValueError(f"unknown experiment {name!r}")
    return name


# --------------------------------------------------------------------------
# evaluators: instance, x, context -> value


def _variant(instance):
    eta = instance.get("eta")
    return cubes.Smooth(eta) if eta is not None else cubes.Plain()


def _eval_square_moment(inst, N, ctx):
    table = ctx.table(N, cubes.Plain())
    return cubes.moment_sum(table, 2, N)


def _eval_xi(inst, N, ctx):
    A = inst["A"]
    h = inst.get("h")
    return counting.count_xi(A, h, N, _variant(inst), partitions=ctx.partitions, budget=ctx.budget).count


def _eval_aux_system(inst, P, ctx):
    D = default_auxiliary(AuxShape(*inst["shape"]))
    return counting.count_I_omega(D, P, partitions=ctx.partitions, budget=ctx.budget).count


def _eval_sixth_moment(inst, P, ctx):
    return circle.f_moment(P, inst.get("l", 1), sigma=inst.get("sigma", 0.0), eta=inst.get("eta", 0.5)).value


def _eval_mixed_moment(inst, P, ctx):
    return circle.mixed_moment_estimate(inst["C"], P, inst.get("l", 1), sigma=inst.get("sigma", 0.0),
                                        eta=inst.get("eta", 0.5)).value


def _eval_upsilon(inst, N, ctx):
    return counting.count_upsilon(inst["C"], N, partitions=ctx.partitions, budget=ctx.budget).count


def _eval_exceptional_mass(inst, N, ctx):
    eta = inst.get("eta", 1.0)
    variant = cubes.Plain() if eta >= 1 else cubes.Smooth(eta)
    table = ctx.table(N, variant)
    _, mass = cubes.exceptional_set(table, N, inst["theta"])
    return mass


def _eval_system_lower(inst, P, ctx):
    return counting.count_system(inst["C"], None, P, partitions=ctx.partitions, budget=ctx.budget).count


EVALUATORS = {
    "square-moment": _eval_square_moment,
    "correlation": _eval_xi,
    "smooth-correlation": _eval_xi,
    "correlation-strong": _eval_xi,
    "aux-system": _eval_aux_system,
    "sixth-moment": _eval_sixth_moment,
    "mixed-moment": _eval_mixed_moment,
    "upsilon-lower": _eval_upsilon,
    "exceptional-mass": _eval_exceptional_mass,
    "system-lower": _eval_system_lower,
}


@dataclass
class _Context:
    budget: float = counting.DEFAULT_BUDGET
    partitions: int = 1
    cache_dir: str | None = None
    _tables: dict = field(default_factory=dict)

    def table(self, N, variant):
        key = repr(variant)
        t = self._tables.get(key)
        if t is None or t.limit < N:
            t = cubes.rho_table(N, variant, cache_dir=self.cache_dir, partitions=self.partitions)
            self._tables[key] = t
        return t


def run_experiment(spec: ExperimentSpec, *, budget: float = counting.DEFAULT_BUDGET, partitions: int = 1,
                   cache_dir=None) -> dict:
    """Evaluate the sweep, fit, bound-check; a budget failure yields a partial report."""
    ctx = _Context(budget, partitions, cache_dir)
    evaluate = EVALUATORS[spec.target]
    sweep, partial = [], None
    for x in spec.sweep:
        try:
            v = evaluate(spec.instance, x, ctx)
        except BudgetExceeded as exc:
            partial = str(exc)
            break
        sweep.append({"x": x, "value": v if isinstance(v, int) else float(v)})
    report = {"target": spec.target, "instance": spec.instance, "sweep": sweep,
              "exponent": spec.exponent, "tolerance": spec.tolerance, "eps": spec.eps,
              "bound": "lower" if spec.lower else "upper"}
    if partial is not None:
        report["partial"] = partial
    pos = [(p["x"], p["value"]) for p in sweep if p["value"] > 0]
    if len(pos) >= 3:
        fit = fit_exponent(pos)
        bc = bound_check(pos, spec.exponent, spec.eps, lower=spec.lower)
        slope_ok = fit.slope >= spec.exponent - spec.tolerance if spec.lower \
            else fit.slope <= spec.exponent + spec.tolerance
        report.update(slope=fit.slope, intercept=fit.intercept, max_residual=fit.max_residual,
                      K=bc.K, Ks=bc.Ks, verdict=bc.verdict, slope_ok=bool(slope_ok))
    else:
        report.update(slope=None, K=None, verdict="insufficient data", slope_ok=False)
    if partial is not None:
        report["verdict"] = "partial"
    for p in report["sweep"]:
        if isinstance(p["value"], int) and abs(p["value"]) >= 2**53:
            p["value"] = str(p["value"])
    return report


P_SWEEPS = {"aux-system", "sixth-moment", "mixed-moment", "system-lower"}


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["P" if report["target"] in P_SWEEPS else "N", "value", "fitted_slope"])
    for p in report["sweep"]:
        w.writerow([p["x"], p["value"], report.get("slope")])
    return buf.getvalue()
