"""Extremal-family margins, violation search and empirical radius adjudication.

The Moebius maps ``z -> ((b - z) / (1 - b z)) I`` have closed-form
ingredients, so their functional values need no truncation.  Adjudication
bisects the largest radius at which every member of a b-grid stays below 1,
then checks seeded random Schur samples at that radius and lowers it if any
sample violates the bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .functionals import FAIL, Estimate, FunctionalKind, compose, functional_value
from .radii import CONSTANTS, RadiusSpec, solve_radius
from .series import DEFAULT_DIM, DEFAULT_ORDER, schur_samples

CONFIRMS, CONTRADICTS, INCONCLUSIVE = "CONFIRMS", "CONTRADICTS", "INCONCLUSIVE"
DEFAULT_B_GRID = (0.5, 0.9, 0.99, 0.999, 0.9999, 0.99999)
DEFAULT_R_TOL = 1e-5
# rounding allowance on closed-form margins
EXTREMAL_SLACK = 1e-12
# a witness margin must clear this to count as robust
WITNESS_FLOOR = 1e-9
R_LO, R_HI = 1e-6, 1.0 - 1e-6
ADJUDICATION_SAMPLES = 64


def _mobius_parts(b: float, r: float, k: FunctionalKind):
    u = 1.0 - b * b
    x = r * r
    table = {
        "sup": lambda: (b + r) / (1.0 + b * r),
        "maj": lambda: u * r / (1.0 - b * r),
        "majN": lambda: u * b ** (k.N - 1) * r ** k.N / (1.0 - b * r),
        "sq": lambda: u * u * x / (1.0 - b * b * x),
        "area": lambda: u * u * x / (1.0 - b * b * x) ** 2,
    }
    return lambda name: Estimate(table[name]())


def extremal_margin(k: FunctionalKind, b: float, r: float) -> float:
    """Functional value of the Moebius map with head b at radius r, minus 1, from closed forms."""
    if not (0.0 <= b < 1.0):
        raise DomainError(f"b must lie in [0, 1), got {b}")
    if not (0.0 < r < 1.0):
        raise DomainError(f"r must lie in (0, 1), got {r}")
    return compose(k, r, b, _mobius_parts(b, r, k)).value - 1.0


def claimed_radius(k: FunctionalKind, a0: float = 0.0) -> float:
    """Radius asserted for ``k``; for N2 it depends on the head, 1/(3 - a0)."""
    t = k.tag
    if t == "TNj":
        tag = "RN" if k.j == 1 else "RNprime"
        return solve_radius(RadiusSpec(tag, N=k.N)).value
    if t == "M":
        return CONSTANTS["inv_sqrt5" if k.j == 1 else "one_third"][0]
    if t == "C":
        return CONSTANTS["one_fifth" if k.j == 1 else "one_third"][0]
    if t == "D":
        return CONSTANTS["sqrt5_minus2"][0]
    if t == "N2":
        return 1.0 / (3.0 - a0)
    return CONSTANTS["one_third"][0]


@dataclass(frozen=True)
class Witness:
    r: float
    value: float
    b: float | None = None
    sample_index: int | None = None
    slack: float = EXTREMAL_SLACK

    @property
    def margin(self) -> float:
        return self.value - 1.0

    def to_json(self) -> dict:
        return {"b": self.b, "sample_index": self.sample_index, "r": self.r,
                "value": self.value, "margin": self.margin, "slack": self.slack}


@dataclass
class AdjudicationReport:
    kind: FunctionalKind
    claimed_radius: float
    empirical_radius: float
    family_radius: float
    verdict: str
    slack_budget: float
    r_tol: float
    b_grid: tuple[float, ...]
    samples: int
    seed: int
    worst_witness: Witness | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.label,
            "params": self.kind.params,
            "claimed_radius": self.claimed_radius,
            "empirical_radius": self.empirical_radius,
            "family_radius": self.family_radius,
            "verdict": self.verdict,
            "worst_witness": None if self.worst_witness is None else self.worst_witness.to_json(),
            "slack_budget": self.slack_budget,
            "r_tol": self.r_tol,
            "b_grid": list(self.b_grid),
            "samples": self.samples,
            "seed": self.seed,
            "notes": list(self.notes),
        }


def _family_max(k: FunctionalKind, b_grid, r: float) -> float:
    return max(extremal_margin(k, b, r) for b in b_grid)


def _bisect_up(ok, lo: float, hi: float, tol: float) -> float:
    """Largest r in [lo, hi] with ok(r), given ok(lo) and not ok(hi), to ``tol``."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def family_radius(k: FunctionalKind, b_grid=DEFAULT_B_GRID, r_tol: float = DEFAULT_R_TOL) -> float:
    ok = lambda r: _family_max(k, b_grid, r) <= EXTREMAL_SLACK
    if ok(R_HI):
        return R_HI
    if not ok(R_LO):
        return R_LO
    return _bisect_up(ok, R_LO, R_HI, r_tol)


def _family_witness(k: FunctionalKind, b_grid, r: float) -> Witness | None:
    # the largest violating b shows the b -> 1 regime the sharpness arguments rely on
    for b in sorted(b_grid, reverse=True):
        m = extremal_margin(k, b, r)
        if m > WITNESS_FLOOR:
            return Witness(r=r, value=1.0 + m, b=b)
    return None


def adjudicate_radius(k: FunctionalKind, b_grid=DEFAULT_B_GRID, r_tol: float = DEFAULT_R_TOL,
                      seed: int = 0, samples: int = ADJUDICATION_SAMPLES, dim: int = DEFAULT_DIM,
                      order: int = DEFAULT_ORDER, claimed: float | None = None) -> AdjudicationReport:
    b_grid = tuple(sorted(float(b) for b in b_grid))
    if any(not (0.0 <= b < 1.0) for b in b_grid):
        raise DomainError("b_grid must lie in [0, 1)")
    claimed = claimed_radius(k) if claimed is None else claimed
    notes = []
    r_fam = family_radius(k, b_grid, r_tol)
    emp = r_fam
    slack_budget = EXTREMAL_SLACK
    sample_witness = None
    if samples > 0:
        pool = list(schur_samples(seed, samples, dim, order))
        for i, s in enumerate(pool):
            est = functional_value(k, s, emp)
            slack_budget = max(slack_budget, est.slack)
            if est.verdict() != FAIL:
                continue
            # values are nondecreasing in r, so this sample alone moves the radius down
            ok = lambda r, s=s: functional_value(k, s, r).verdict() != FAIL
            emp = _bisect_up(ok, R_LO, emp, r_tol) if ok(R_LO) else R_LO
            notes.append(f"random sample {i} violates below the extremal-family radius")
            val = functional_value(k, s, min(emp + 10 * r_tol, R_HI))
            sample_witness = Witness(r=min(emp + 10 * r_tol, R_HI), value=val.value, sample_index=i, slack=val.slack)
    diff = abs(emp - claimed)
    step = min(0.01, max(diff / 2.0, 10 * r_tol))
    r_w = min(emp + step, R_HI)
    witness = _family_witness(k, b_grid, r_w) if sample_witness is None else sample_witness
    if witness is None and emp >= R_HI:
        notes.append("no violation found below 1")
    if diff <= 10 * r_tol:
        verdict = CONFIRMS
    elif witness is not None:
        verdict = CONTRADICTS
    else:
        verdict = INCONCLUSIVE
    return AdjudicationReport(k, claimed, emp, r_fam, verdict, slack_budget, r_tol, b_grid,
                              samples, seed, witness, notes)


def _b_search_grid() -> np.ndarray:
    return np.unique(np.concatenate([np.linspace(0.0, 0.99, 100), 1.0 - 10.0 ** -np.linspace(2.0, 6.0, 41)]))


def violation_witness(k: FunctionalKind, r: float, seed: int = 0, budget: int = 64,
                      dim: int = DEFAULT_DIM, order: int = DEFAULT_ORDER) -> Witness | None:
    """Largest-margin violation at radius r from the extremal family and ``budget`` random samples."""
    if not (0.0 < r < 1.0):
        raise DomainError(f"r must lie in (0, 1), got {r}")
    bs = _b_search_grid()
    margins = np.array([extremal_margin(k, float(b), r) for b in bs])
    i = int(np.argmax(margins))
    best = None
    if margins[i] > EXTREMAL_SLACK:
        # refine between neighbouring grid points
        lo, hi = float(bs[max(i - 1, 0)]), float(bs[min(i + 1, len(bs) - 1)])
        fine = np.linspace(lo, hi, 41)
        fm = [extremal_margin(k, float(b), r) for b in fine]
        j = int(np.argmax(fm))
        best = Witness(r=r, value=1.0 + fm[j], b=float(fine[j]))
    for idx, s in enumerate(schur_samples(seed, budget, dim, order)):
        est = functional_value(k, s, r)
        if est.verdict() == FAIL and (best is None or est.value - 1.0 > best.margin):
            best = Witness(r=r, value=est.value, sample_index=idx, slack=est.slack)
    return best


def margin_curve(k: FunctionalKind, bs, rs) -> list[tuple[float, float, float]]:
    """Rows (b, r, margin) in (b, r) order."""
    return [(float(b), float(r), extremal_margin(k, float(b), float(r))) for b in bs for r in rs]
