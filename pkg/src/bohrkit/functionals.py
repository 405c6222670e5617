"""Bohr-Rogosinski functionals of a truncated operator series at radius r.

Every quantity is returned as an :class:`Estimate` ``(value, slack)``: the
true value of the functional for the untruncated function lies in
``[value - slack, value + slack]`` (in practice the computed value is a
lower bound and ``value + slack`` an upper bound).  Slack collects the
geometric truncation tail and the certificate of the circle-supremum search.

The terms ``||f(z)||`` with ``|z| = r`` are taken as the supremum over the
circle.  In the C-kinds the term ``||f(z) - A_0||`` is replaced by its
majorant ``sum_{n>=1} ||A_n|| r^n``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidInputError, UnsupportedClassError
from .matcore import spectral_norms
from .series import OperatorSeries

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"
SCHWARZ_PICK_TOL = 1e-9
# accumulated floating-point error of the finite sums (norms are good to ~1e-15)
ROUNDING_SLACK = 1e-12
SUP_TOL = 5e-9
SUP_INITIAL_POINTS = 128
SUP_SPLIT = 8
SUP_MAX_EVALS = 1 << 18

SQRT5 = math.sqrt(5.0)
GPOLY_SQRT5_BOUND = (13.0 - 5.0 * SQRT5) / 4.0


@dataclass(frozen=True)
class Estimate:
    value: float
    slack: float = 0.0

    def __add__(self, other):
        if isinstance(other, Estimate):
            return Estimate(self.value + other.value, self.slack + other.slack)
        return Estimate(self.value + float(other), self.slack)

    __radd__ = __add__

    def __rmul__(self, c: float):
        if c < 0:
            raise ValueError("estimates scale by nonnegative factors only")
        return Estimate(c * self.value, c * self.slack)

    def map(self, fn: Callable[[float], float]) -> "Estimate":
        """Push through a nondecreasing function on [0, inf)."""
        v = fn(self.value)
        return Estimate(v, fn(self.value + self.slack) - v)

    def __pow__(self, j: float) -> "Estimate":
        return self.map(lambda t: t ** j)

    @property
    def upper(self) -> float:
        return self.value + self.slack

    def verdict(self, bound: float = 1.0) -> str:
        """PASS if certainly <= bound, FAIL if certainly > bound."""
        if self.value + self.slack <= bound:
            return PASS
        if self.value - self.slack > bound:
            return FAIL
        return INCONCLUSIVE


# -- G polynomials ------------------------------------------------------------

@dataclass(frozen=True)
class GPoly:
    """G(t) = c_1 t + ... + c_l t^l with nonnegative coefficients."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(x) for x in self.coeffs)
        if len(c) < 1:
            raise InvalidInputError("G needs at least one coefficient")
        if any(not math.isfinite(x) or x < 0 for x in c):
            raise InvalidInputError("G coefficients must be finite and nonnegative")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, t: float) -> float:
        return gpoly_eval(self, t)


def gpoly_eval(G: GPoly, t: float) -> float:
    if t < 0:
        raise DomainError("G is evaluated on t >= 0")
    acc = 0.0
    for c in reversed(G.coeffs):
        acc = (acc + c) * t
    return acc


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    value: float
    bound: float

    @property
    def margin(self) -> float:
        return self.bound - self.value


GPOLY_VARIANTS = ("sqrt5_minus2", "one_third")


def gpoly_admissible(G: GPoly, variant: str) -> Admissibility:
    """Coefficient conditions on G for the D-kind (radius sqrt5-2) and E-kind (radius 1/3)."""
    m = np.arange(1, len(G.coeffs) + 1)
    c = np.array(G.coeffs)
    if variant == "sqrt5_minus2":
        value, bound = float(np.sum(c * 2.0 ** (1 - 4 * m))), GPOLY_SQRT5_BOUND
    elif variant == "one_third":
        value, bound = float(np.sum(8 * (2 * m - 1) * c * 0.375 ** (2 * m))), 1.0
    else:
        raise InvalidInputError(f"unknown variant {variant!r}; expected one of {GPOLY_VARIANTS}")
    return Admissibility(value <= bound, value, bound)


# -- functional kinds -----------------------------------------------------------

KIND_TAGS = ("Bohr", "TNj", "M", "C", "Bp", "D", "E", "N1", "N2")


@dataclass(frozen=True)
class FunctionalKind:
    tag: str
    N: int | None = None
    j: int | None = None
    p: float | None = None
    G: GPoly | None = field(default=None)
    lam: float | None = None

    def __post_init__(self):
        t = self.tag
        if t not in KIND_TAGS:
            raise InvalidInputError(f"unknown functional {t!r}")
        if t in ("TNj", "M", "C") and self.j not in (1, 2):
            raise InvalidInputError(f"{t} needs j in {{1, 2}}")
        if t == "TNj" and (self.N is None or self.N < 1):
            raise InvalidInputError("TNj needs N >= 1")
        if t == "Bp" and (self.p is None or not (0.0 < self.p <= 1.0)):
            raise InvalidInputError("Bp needs p in (0, 1]")
        if t in ("D", "E") and self.G is None:
            raise InvalidInputError(f"{t} needs a G polynomial")
        if t in ("N1", "N2") and (self.lam is None or self.lam < 0 or not math.isfinite(self.lam)):
            raise InvalidInputError(f"{t} needs lambda >= 0")

    @classmethod
    def bohr(cls):
        return cls("Bohr")

    @classmethod
    def tn(cls, N: int, j: int):
        return cls("TNj", N=N, j=j)

    @classmethod
    def m(cls, j: int):
        return cls("M", j=j)

    @classmethod
    def c(cls, j: int):
        return cls("C", j=j)

    @classmethod
    def bp(cls, p: float):
        return cls("Bp", p=float(p))

    @classmethod
    def d(cls, G):
        return cls("D", G=G if isinstance(G, GPoly) else GPoly(tuple(G)))

    @classmethod
    def e(cls, G):
        return cls("E", G=G if isinstance(G, GPoly) else GPoly(tuple(G)))

    @classmethod
    def n1(cls, lam: float):
        return cls("N1", lam=float(lam))

    @classmethod
    def n2(cls, lam: float):
        return cls("N2", lam=float(lam))

    @property
    def needs_scalar_head(self) -> bool:
        return self.tag in ("Bp", "N1", "N2")

    @property
    def uses_sup_norm(self) -> bool:
        return self.tag in ("TNj", "M", "D")

    @property
    def params(self) -> dict:
        out = {}
        for name in ("N", "j", "p", "lam"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        if self.G is not None:
            out["G"] = list(self.G.coeffs)
        return out

    @property
    def label(self) -> str:
        if self.tag == "Bohr":
            return "Bohr"
        if self.tag == "TNj":
            return f"TNj({self.N},{self.j})"
        if self.tag in ("M", "C"):
            return f"{self.tag}({self.j})"
        if self.tag == "Bp":
            return f"Bp({self.p:g})"
        if self.tag in ("D", "E"):
            return f"{self.tag}(" + ",".join(f"{c:g}" for c in self.G.coeffs) + ")"
        return f"{self.tag}({self.lam:g})"

    def __str__(self):
        return self.label


def _number(text: str) -> float:
    text = text.strip()
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return float(text)
    except ValueError:
        raise InvalidInputError(f"not a number: {text!r}") from None


_KIND_RE = re.compile(r"^\s*([A-Za-z]+?)(\d?)\s*(?:[(:]\s*([^)]*?)\s*\)?)?\s*$")


def parse_kind(text: str) -> FunctionalKind:
    """Parse labels such as ``Bohr``, ``M1``, ``M(2)``, ``Bp:0.5``, ``D:2.47``, ``N1:8/9``, ``TNj:1,2``."""
    m = _KIND_RE.match(text)
    if not m:
        raise InvalidInputError(f"cannot parse functional kind {text!r}")
    name, digit, argtext = m.group(1), m.group(2), m.group(3)
    args = [a for a in (argtext or "").split(",") if a.strip()]
    lname = name.lower()
    try:
        if lname == "bohr" and not digit and not args:
            return FunctionalKind.bohr()
        if lname in ("m", "c"):
            j = int(digit) if digit else int(_number(args[0]))
            return FunctionalKind(name.upper(), j=j)
        if lname in ("tnj", "t"):
            if digit:
                raise InvalidInputError("write TNj:N,j")
            return FunctionalKind.tn(int(_number(args[0])), int(_number(args[1])))
        if lname == "bp" and not digit:
            return FunctionalKind.bp(_number(args[0]) if args else 1.0)
        if lname in ("d", "e") and not digit:
            return FunctionalKind(name.upper(), G=GPoly(tuple(_number(a) for a in args)))
        if lname == "n" and digit in ("1", "2"):
            return FunctionalKind("N" + digit, lam=_number(args[0]))
    except IndexError:
        raise InvalidInputError(f"missing parameters in {text!r}") from None
    except ValueError as exc:
        raise InvalidInputError(str(exc)) from None
    raise InvalidInputError(f"cannot parse functional kind {text!r}")


# -- building blocks ------------------------------------------------------------

def _check_r(r: float):
    if not (0.0 <= r < 1.0) or not math.isfinite(r):
        raise DomainError(f"r must lie in [0, 1), got {r}")


def _coef_bound(s: OperatorSeries) -> float:
    # scalar head: Schwarz-Pick; general (contractive by construction): Cauchy, ||A_n|| <= 1
    return 1.0 - s.a0 ** 2 if s.has_scalar_head else 1.0


def truncation_tail(s: OperatorSeries, r: float, from_index: int | None = None) -> float:
    """Certified bound on sum_{n >= max(M+1, from_index)} ||A_n|| r^n."""
    start = s.order + 1 if from_index is None else max(s.order + 1, from_index)
    return _coef_bound(s) * r ** start / (1.0 - r)


@dataclass(frozen=True)
class SupNorm:
    value: float
    slack: float
    theta: float
    evaluations: int

    @property
    def estimate(self) -> Estimate:
        return Estimate(self.value, self.slack)


def circle_sup_norm(s: OperatorSeries, r: float, tol: float = SUP_TOL,
                    max_evals: int = SUP_MAX_EVALS, split: int = SUP_SPLIT) -> SupNorm:
    """max over |z| = r of ||p(z)|| for the truncated polynomial p.

    Branch and bound on arcs of half-width eta around centres t_i.  On an
    arc, p(t_i + u) = p(t_i) + u p'(t_i) + R with ||R|| <= u^2/2 sum n^2 ||A_n|| r^n,
    and ||p(t_i) + u p'(t_i)|| is convex in u, so its maximum sits at
    u = +-eta.  Arcs far below the running maximum are discarded first with
    the cruder bound ||p(t_i)|| + eta ||p'(t_i)||_F on the initial grid.  Arcs whose bound exceeds the best sampled value by more
    than ``tol`` are halved until none remain or ``max_evals`` is spent.
    The returned slack bounds (sup - value) for the polynomial; the
    truncation tail is not included.
    """
    _check_r(r)
    if r == 0.0 or s.order == 0:
        return SupNorm(float(s.norms[0]), 0.0, 0.0, 1)
    M, d = s.order, s.dim
    n = np.arange(M + 1)
    rn = r ** n
    flat = s.coeffs.reshape(M + 1, d * d)
    second = float(np.sum(n * n * s.norms * rn))

    def values(theta):
        e = np.exp(1j * np.outer(theta, n)) * rn
        return (e @ flat).reshape(-1, d, d), ((e * (1j * n)) @ flat).reshape(-1, d, d)

    k0 = SUP_INITIAL_POINTS
    eta = math.pi / k0
    centres = 2.0 * math.pi * np.arange(k0) / k0
    best, best_theta, done_upper, evals = -1.0, 0.0, -1.0, 0
    while True:
        p, dp = values(centres)
        quad = 0.5 * eta * eta * second
        if evals == 0:
            g = spectral_norms(p)
            best_candidate = float(np.max(g))
            # cheap first-order bound via the Frobenius norm of the derivative
            upper = g + eta * np.sqrt(np.sum(np.abs(dp) ** 2, axis=(1, 2))) + quad
            close = upper > best_candidate + tol
            pc, dc = p[close], dp[close]
            sharp = spectral_norms(np.concatenate([pc + eta * dc, pc - eta * dc])).reshape(2, -1)
            upper[close] = np.minimum(upper[close], np.max(sharp, axis=0) + quad)
        else:
            # near the maximum nearly every arc survives the cheap bound; one batched call
            norms = spectral_norms(np.concatenate([p, p + eta * dp, p - eta * dp])).reshape(3, -1)
            g = norms[0]
            upper = np.max(norms[1:], axis=0) + quad
        evals += len(centres)
        i = int(np.argmax(g))
        if g[i] > best:
            best, best_theta = float(g[i]), float(centres[i])
        active = upper > best + tol
        if np.any(~active):
            done_upper = max(done_upper, float(np.max(upper[~active])))
        if not np.any(active):
            break
        if evals + split * int(np.sum(active)) > max_evals:
            done_upper = max(done_upper, float(np.max(upper[active])))
            break
        eta /= split
        c = centres[active]
        centres = (c[:, None] + eta * (2.0 * np.arange(split) - (split - 1))).reshape(-1)
    return SupNorm(best, max(done_upper - best, 0.0), best_theta, evals)


def majorant_sum(s: OperatorSeries, r: float, from_index: int = 0) -> Estimate:
    """sum_{n >= from_index} ||A_n|| r^n with certified tail."""
    _check_r(r)
    if from_index < 0:
        raise InvalidInputError("from_index must be >= 0")
    n = np.arange(from_index, s.order + 1)
    head = float(np.sum(s.norms[from_index:] * r ** n)) if len(n) else 0.0
    return Estimate(head, truncation_tail(s, r, from_index) + ROUNDING_SLACK)


def weighted_square_sum(s: OperatorSeries, r: float) -> Estimate:
    """sum_{n >= 1} ||A_n||^2 r^(2n)."""
    _check_r(r)
    x = r * r
    n = np.arange(1, s.order + 1)
    val = float(np.sum(s.norms[1:] ** 2 * x ** n))
    c = _coef_bound(s)
    return Estimate(val, c * c * x ** (s.order + 1) / (1.0 - x) + ROUNDING_SLACK)


def sr_over_pi(s: OperatorSeries, r: float) -> Estimate:
    """sum_{n >= 1} n ||A_n||^2 r^(2n), the normalised area of f(D_r)."""
    _check_r(r)
    x = r * r
    n = np.arange(1, s.order + 1)
    val = float(np.sum(n * s.norms[1:] ** 2 * x ** n))
    c = _coef_bound(s)
    k = s.order + 1
    tail = c * c * x ** k * (k - (k - 1) * x) / (1.0 - x) ** 2
    return Estimate(val, tail + ROUNDING_SLACK)


def weight(head: float, r: float) -> float:
    return 1.0 / (1.0 + head) + r / (1.0 - r)


def compose(k: FunctionalKind, r: float, head: float, part: Callable[[str], Estimate]) -> Estimate:
    """Assemble functional ``k`` from its ingredients.

    ``part(name)`` supplies Estimates for ``sup`` (max of ||f|| on |z| = r),
    ``maj`` (sum_{n>=1} ||A_n|| r^n), ``majN`` (sum_{n>=N}), ``sq``
    (sum_{n>=1} ||A_n||^2 r^2n) and ``area`` (sum_{n>=1} n ||A_n||^2 r^2n).  ``head`` is ||A_0||.
    Shared by the numerical route and the closed-form extremal route.
    """
    t = k.tag
    if t == "Bohr":
        return head + part("maj")
    if t == "TNj":
        return part("sup") ** k.j + part("majN")
    if t == "D":
        return part("sup") + part("maj") + part("area").map(k.G)
    if t == "E":
        return head + part("maj") + part("area").map(k.G)
    w = weight(head, r)
    body = part("maj") + w * part("sq")
    if t == "M":
        return part("sup") ** k.j + body
    if t == "C":
        return head + body + part("maj") ** k.j
    if t == "Bp":
        return head ** k.p + body
    if t == "N1":
        return head + body + k.lam * part("area")
    if t == "N2":
        return head * head + body + k.lam * part("area")
    raise InvalidInputError(f"unhandled kind {t}")


def functional_values(kinds, s: OperatorSeries, r: float, sup_tol: float = SUP_TOL) -> list[Estimate]:
    """Evaluate several kinds on one series, computing each shared ingredient once."""
    _check_r(r)
    for k in kinds:
        if k.needs_scalar_head and not s.has_scalar_head:
            raise UnsupportedClassError(f"{k.label} needs a schur_scalar_head series")
    cache: dict[tuple, Estimate] = {}

    def parts(k):
        def part(name):
            key = (name, k.N) if name == "majN" else (name,)
            if key not in cache:
                if name == "sup":
                    sup = circle_sup_norm(s, r, tol=sup_tol)
                    cache[key] = Estimate(sup.value, sup.slack + truncation_tail(s, r))
                elif name == "maj":
                    cache[key] = majorant_sum(s, r, 1)
                elif name == "majN":
                    cache[key] = majorant_sum(s, r, k.N)
                elif name == "sq":
                    cache[key] = weighted_square_sum(s, r)
                elif name == "area":
                    cache[key] = sr_over_pi(s, r)
            return cache[key]
        return part

    return [compose(k, r, s.head_norm, parts(k)) for k in kinds]


def functional_value(k: FunctionalKind, s: OperatorSeries, r: float, sup_tol: float = SUP_TOL) -> Estimate:
    return functional_values([k], s, r, sup_tol)[0]


# -- worst-case envelopes from the coefficient bounds ---------------------------

def envelope_bound(k: FunctionalKind, a: float, r: float) -> float:
    """Upper bound on the functional over Schur-class f with ||A_0|| = a.

    Built from ||A_n|| <= 1 - a^2, ||f(z)|| <= (a + r)/(1 + a r) and, for the
    N-kinds, the area bound r^2 (1-a^2)^2 / (1 - a^2 r^2)^2.  The D-kind uses
    sum_m c_m (1-a^2)^2 (r / (1 - r^2))^(2m), which dominates G of the
    Schwarz-Pick area bound.
    """
    if not (0.0 <= a < 1.0):
        raise DomainError(f"a must lie in [0, 1), got {a}")
    _check_r(r)
    u = 1.0 - a * a
    maj = u * r / (1.0 - r)
    # (1/(1+a) + r/(1-r)) * u^2 r^2 / (1 - r^2)
    sq = (1.0 + a * r) * u * u * r * r / ((1.0 + a) * (1.0 - r) * (1.0 - r * r))
    mob = (a + r) / (1.0 + a * r)
    area = r * r * u * u / (1.0 - a * a * r * r) ** 2
    t = k.tag
    if t == "Bohr":
        return a + maj
    if t == "TNj":
        return mob ** k.j + u * r ** k.N / (1.0 - r)
    if t == "M":
        return mob ** k.j + maj + sq
    if t == "C":
        return a + maj + sq + maj ** k.j
    if t == "Bp":
        return a ** k.p + maj + sq
    if t == "D":
        x = (r / (1.0 - r * r)) ** 2
        return mob + maj + sum(c * u * u * x ** (m + 1) for m, c in enumerate(k.G.coeffs))
    if t == "E":
        return a + maj + k.G(u * u * r * r / (1.0 - r * r) ** 2)
    if t == "N1":
        return a + maj + sq + k.lam * area
    if t == "N2":
        return a * a + maj + sq + k.lam * area
    raise InvalidInputError(f"unsupported kind {k.label}")


@dataclass(frozen=True)
class SchwarzPick:
    ok: bool
    worst_index: int
    worst_excess: float


def schwarz_pick_check(s: OperatorSeries) -> SchwarzPick:
    """Check ||A_n|| <= 1 - a0^2 for n >= 1; report the largest violation."""
    if not s.has_scalar_head:
        raise UnsupportedClassError("Schwarz-Pick bound needs a scalar head")
    if s.order == 0:
        return SchwarzPick(True, 0, -math.inf)
    excess = s.norms[1:] - (1.0 - s.a0 ** 2)
    i = int(np.argmax(excess))
    return SchwarzPick(bool(excess[i] <= SCHWARZ_PICK_TOL), i + 1, float(excess[i]))
