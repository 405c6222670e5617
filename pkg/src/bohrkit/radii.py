"""Radii and threshold constants as roots of their defining polynomials.

Each :class:`RadiusSpec` knows its defining function ``eq(r)``; the radius
is the unique root in (0, 1).  Uniqueness is checked by a sign-change scan
before bisection rather than assumed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AmbiguousRootError, DomainError, InternalInconsistencyError, InvalidInputError, NoRootError

SCAN_POINTS = 1000
SCAN_LO, SCAN_HI = 1e-9, 1.0 - 1e-9
BISECT_WIDTH = 1e-13

SQRT5 = math.sqrt(5.0)

# name -> (value from its closed form, defining polynomial coefficients, highest degree first)
CONSTANTS: dict[str, tuple[float, tuple[float, ...]]] = {
    "sqrt5_minus2": (SQRT5 - 2.0, (1.0, 4.0, -1.0)),
    "one_third": (1.0 / 3.0, (3.0, -1.0)),
    "one_fifth": (1.0 / 5.0, (5.0, -1.0)),
    "inv_sqrt5": (1.0 / SQRT5, (5.0, 0.0, -1.0)),
    "four_sqrt2_minus5": (4.0 * math.sqrt(2.0) - 5.0, (1.0, 10.0, -7.0)),
    "gpoly_sqrt5_bound": ((13.0 - 5.0 * SQRT5) / 4.0, (4.0, -26.0, 11.0)),
}

# coefficients in increasing degree
THRESHOLD_POLYS = {
    "N1": (277.0, -857.0, 281.0, 371.0, -49.0, -27.0, 3.0, 1.0),
    "N2": (216.0, -780.0, 876.0, -419.0, 95.0, -13.0, 1.0),
}

TAGS = ("RN", "RNprime", "RNp", "ScalarRefined1", "ScalarRefinedCubic", "Const",
        "ThresholdN1", "ThresholdN2", "RadiusOfNkind")


@dataclass(frozen=True)
class RadiusSpec:
    tag: str
    N: int | None = None
    p: float | None = None
    a0: float | None = None
    name: str | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise InvalidInputError(f"unknown radius tag {self.tag!r}")
        if self.tag in ("RN", "RNprime", "RNp") and (self.N is None or int(self.N) != self.N or self.N < 1):
            raise InvalidInputError(f"{self.tag} needs an integer N >= 1")
        if self.tag == "RNp" and (self.p is None or not (0.0 < self.p <= 1.0)):
            raise InvalidInputError("RNp needs p in (0, 1]")
        if self.tag in ("ScalarRefined1", "ScalarRefinedCubic", "RadiusOfNkind"):
            hi_ok = self.tag == "ScalarRefined1"
            if self.a0 is None or not (0.0 <= self.a0 <= 1.0) or (self.a0 == 1.0 and not hi_ok):
                raise InvalidInputError(f"{self.tag} needs a0 in [0, 1)")
        if self.tag == "Const" and self.name not in CONSTANTS:
            raise InvalidInputError(f"unknown constant {self.name!r}; expected one of {sorted(CONSTANTS)}")

    @property
    def params(self) -> str:
        if self.tag in ("RN", "RNprime"):
            return str(self.N)
        if self.tag == "RNp":
            return f"{self.N};{self.p:g}"
        if self.tag in ("ScalarRefined1", "ScalarRefinedCubic", "RadiusOfNkind"):
            return f"{self.a0:g}"
        if self.tag == "Const":
            return self.name
        return ""

    def equation(self) -> Callable[[float], float]:
        t = self.tag
        if t == "RN":
            return lambda r: 2.0 * (1.0 + r) * r ** self.N - (1.0 - r) ** 2
        if t == "RNprime":
            return lambda r: (1.0 + r) * r ** self.N - (1.0 - r) ** 2
        if t == "RNp":
            return lambda r: 2.0 * (1.0 + r) * r ** self.N - self.p * (1.0 - r) ** 2
        a = self.a0
        if t == "ScalarRefined1":
            return lambda r: (1.0 - a - a * a) * r * r - (3.0 + a) * r + 1.0
        if t == "ScalarRefinedCubic":
            return lambda r: (1.0 - a ** 3) * r ** 3 - (1.0 + 2.0 * a) * r * r - 2.0 * r + 1.0
        if t == "RadiusOfNkind":
            return lambda r: (3.0 - a) * r - 1.0
        if t == "Const":
            coeffs = CONSTANTS[self.name][1]
            return lambda r: float(np.polyval(coeffs, r))
        coeffs = THRESHOLD_POLYS[t[len("Threshold"):]]
        return lambda x: float(np.polynomial.polynomial.polyval(x, coeffs))


@dataclass(frozen=True)
class RadiusResult:
    spec: RadiusSpec
    value: float
    residual: float


def sign_change_brackets(fn: Callable[[float], float], lo: float = SCAN_LO, hi: float = SCAN_HI,
                         points: int = SCAN_POINTS) -> list[tuple[float, float]]:
    xs = np.linspace(lo, hi, points)
    ys = [fn(float(x)) for x in xs]
    out = []
    for i in range(points - 1):
        if ys[i] == 0.0:
            out.append((float(xs[i]), float(xs[i])))
        elif ys[i] * ys[i + 1] < 0.0:
            out.append((float(xs[i]), float(xs[i + 1])))
    if ys[-1] == 0.0:
        out.append((float(xs[-1]), float(xs[-1])))
    return out


def bisect(fn: Callable[[float], float], lo: float, hi: float, width: float = BISECT_WIDTH) -> float:
    flo = fn(lo)
    if flo == 0.0:
        return lo
    if fn(hi) == 0.0:
        return hi
    while hi - lo >= width:
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def unique_root(fn: Callable[[float], float], label: str = "equation") -> float:
    brackets = sign_change_brackets(fn)
    if not brackets:
        raise NoRootError(f"{label} has no sign change in (0, 1)")
    if len(brackets) > 1:
        raise AmbiguousRootError(f"{label} has {len(brackets)} sign changes in (0, 1)", brackets)
    return bisect(fn, *brackets[0])


def scalar_refined_radius(a0: float) -> float:
    if not (0.0 <= a0 <= 1.0):
        raise DomainError(f"a0 must lie in [0, 1], got {a0}")
    return 2.0 / (3.0 + a0 + SQRT5 * (1.0 + a0))


def cubic_radius(a0: float) -> float:
    """Unique root in (0, 1/2] of (1 - a0^3) r^3 - (1 + 2 a0) r^2 - 2 r + 1."""
    if not (0.0 <= a0 < 1.0):
        raise DomainError(f"a0 must lie in [0, 1), got {a0}")
    fn = RadiusSpec("ScalarRefinedCubic", a0=a0).equation()
    root = unique_root(fn, "cubic")
    if not (1.0 / 3.0 < root < 1.0 / (2.0 + a0)):
        raise InternalInconsistencyError(f"cubic root {root} outside (1/3, 1/(2+a0)) for a0={a0}")
    return root


def threshold_a(kind: str) -> float:
    """Smallest root in (0, 1) of the N1 / N2 threshold polynomial."""
    if kind not in THRESHOLD_POLYS:
        raise InvalidInputError(f"threshold kind must be N1 or N2, got {kind!r}")
    fn = RadiusSpec("Threshold" + kind).equation()
    brackets = sign_change_brackets(fn)
    if not brackets:
        raise InternalInconsistencyError(f"{kind} threshold polynomial has no root in (0, 1)")
    return bisect(fn, *brackets[0])


def solve_radius(spec: RadiusSpec) -> RadiusResult:
    fn = spec.equation()
    t = spec.tag
    if t == "ScalarRefined1":
        value = scalar_refined_radius(spec.a0)
    elif t == "RadiusOfNkind":
        value = 1.0 / (3.0 - spec.a0)
    elif t == "Const":
        value = CONSTANTS[spec.name][0]
    elif t == "ScalarRefinedCubic":
        value = cubic_radius(spec.a0)
    elif t in ("ThresholdN1", "ThresholdN2"):
        value = threshold_a(t[len("Threshold"):])
    else:
        value = unique_root(fn, f"{t}({spec.params})")
    return RadiusResult(spec, value, abs(fn(value)))


def radius_table(a0_grid=(0.0, 0.25, 0.5, 0.75, 1.0), n_max: int = 10) -> list[RadiusResult]:
    """All radii: RN, RN', RNp (p = 1/2) for N <= n_max, scalar radii on ``a0_grid``, constants, thresholds."""
    specs: list[RadiusSpec] = []
    for n in range(1, n_max + 1):
        specs += [RadiusSpec("RN", N=n), RadiusSpec("RNprime", N=n), RadiusSpec("RNp", N=n, p=0.5)]
    for a in a0_grid:
        specs.append(RadiusSpec("ScalarRefined1", a0=a))
        if a < 1.0:
            specs += [RadiusSpec("ScalarRefinedCubic", a0=a), RadiusSpec("RadiusOfNkind", a0=a)]
    specs += [RadiusSpec("Const", name=k) for k in CONSTANTS]
    specs += [RadiusSpec("ThresholdN1"), RadiusSpec("ThresholdN2")]
    return [solve_radius(s) for s in specs]
