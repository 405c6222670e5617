"""Several-variable maps on complete circular domains, handled through complex lines.

A map f on a domain Q is represented by its slicer: for a direction b with
gauge 1 the one-variable series h -> f(b h) = sum_k P_k(b) h^k.  An
inequality on the homothetic domain rho Q holds iff it holds at radius rho
for every slice, so verification reduces to one-variable checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidInputError, PreconditionError, UnsupportedClassError
from .functionals import FAIL, INCONCLUSIVE, PASS, FunctionalKind, functional_value
from .series import SCHUR_SCALAR_HEAD, OperatorSeries

UNSUPPORTED_HYPOTHESIS = "UNSUPPORTED_HYPOTHESIS"
DOMAIN_KINDS = ("polydisc", "ball")
GAUGE_TOL = 1e-12
LINEAR_COMPOSITE, CUSTOM = "linear_composite", "custom"


@dataclass(frozen=True)
class CircularDomain:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in DOMAIN_KINDS:
            raise InvalidInputError(f"domain must be one of {DOMAIN_KINDS}, got {self.kind!r}")
        if int(self.n) != self.n or self.n < 1:
            raise InvalidInputError("domain needs n >= 1 variables")

    @classmethod
    def polydisc(cls, n: int):
        return cls("polydisc", n)

    @classmethod
    def ball(cls, n: int):
        return cls("ball", n)

    @property
    def label(self) -> str:
        return f"{self.kind}({self.n})"


def _vector(d: CircularDomain, z) -> np.ndarray:
    v = np.asarray(z, dtype=complex).reshape(-1)
    if v.shape != (d.n,):
        raise InvalidInputError(f"expected {d.n} coordinates, got {v.shape[0]}")
    return v


def gauge(d: CircularDomain, z) -> float:
    """Minkowski gauge: max modulus for the polydisc, Euclidean norm for the ball."""
    v = _vector(d, z)
    return float(np.max(np.abs(v))) if d.kind == "polydisc" else float(np.linalg.norm(v))


def dual_norm(d: CircularDomain, w) -> float:
    """sup of |sum w_i z_i| over the unit domain."""
    v = _vector(d, w)
    return float(np.sum(np.abs(v))) if d.kind == "polydisc" else float(np.linalg.norm(v))


@dataclass(frozen=True, eq=False)
class MultiSeries:
    domain: CircularDomain
    slicer: Callable[[np.ndarray], OperatorSeries]
    kind_tag: str = CUSTOM
    inner: OperatorSeries | None = None
    w: np.ndarray | None = None
    head_a0: float | None = None

    def linear_form_value(self, b) -> complex:
        if self.kind_tag != LINEAR_COMPOSITE:
            raise InvalidInputError("linear_form_value is defined for linear composites only")
        return complex(np.dot(self.w, _vector(self.domain, b)))


def compose_linear(inner: OperatorSeries, w, d: CircularDomain) -> MultiSeries:
    """f(z) = inner(w_1 z_1 + ... + w_n z_n)."""
    wv = _vector(d, w)
    if dual_norm(d, wv) > 1.0 + GAUGE_TOL:
        raise PreconditionError(f"linear form has dual norm {dual_norm(d, wv):.6g} > 1 on {d.label}")
    k = np.arange(inner.order + 1)

    def slicer(b: np.ndarray) -> OperatorSeries:
        om = complex(np.dot(wv, b))
        coeffs = inner.coeffs * (om ** k)[:, None, None]
        return OperatorSeries(coeffs, inner.class_tag, inner.a0)

    wv.setflags(write=False)
    return MultiSeries(d, slicer, LINEAR_COMPOSITE, inner, wv, inner.a0)


def slice_series(m: MultiSeries, b) -> OperatorSeries:
    v = _vector(m.domain, b)
    g = gauge(m.domain, v)
    if abs(g - 1.0) > GAUGE_TOL:
        raise DomainError(f"direction must have gauge 1, got {g!r}")
    return m.slicer(v)


def sample_directions(d: CircularDomain, rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform points of the distinguished boundary torus (polydisc) or the unit sphere (ball)."""
    if d.kind == "polydisc":
        return np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, size=(count, d.n)))
    z = rng.normal(size=(count, d.n)) + 1j * rng.normal(size=(count, d.n))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


@dataclass(frozen=True)
class HomothetyResult:
    verdict: str
    rho: float
    samples: int
    evaluated: int
    worst_index: int | None = None
    worst_direction: tuple[complex, ...] | None = None
    worst_value: float | None = None
    worst_slack: float | None = None

    def to_json(self) -> dict:
        direction = None
        if self.worst_direction is not None:
            direction = [[z.real, z.imag] for z in self.worst_direction]
        return {"verdict": self.verdict, "rho": self.rho, "samples": self.samples,
                "evaluated": self.evaluated, "worst_index": self.worst_index,
                "worst_direction": direction, "worst_value": self.worst_value,
                "worst_slack": self.worst_slack}


def _combine(verdicts: list[str]) -> str:
    if FAIL in verdicts:
        return FAIL
    if INCONCLUSIVE in verdicts:
        return INCONCLUSIVE
    return PASS


def homothety_verify(m: MultiSeries, k: FunctionalKind, rho: float, seed: int = 0,
                     count: int = 10_000) -> HomothetyResult:
    """Check the functional on every sampled slice at radius ``rho``.

    For linear composites the slice at b is inner(l(b) h) with l the linear form, whose
    functional value is nondecreasing in |l(b)|.  Directions are visited
    in decreasing |l(b)|; the first certified PASS certifies all later
    ones, and the first FAIL is the worst sample.
    """
    if not (0.0 < rho < 1.0):
        raise DomainError(f"rho must lie in (0, 1), got {rho}")
    dirs = sample_directions(m.domain, np.random.default_rng(seed), count)
    if m.kind_tag == LINEAR_COMPOSITE:
        if m.inner.class_tag != SCHUR_SCALAR_HEAD:
            return HomothetyResult(UNSUPPORTED_HYPOTHESIS, rho, count, 0)
        order = np.argsort(-np.abs(dirs @ m.w), kind="stable")
    else:
        order = np.arange(count)
    verdicts, worst, evaluated = [], None, 0
    for idx in order:
        s = m.slicer(dirs[idx])
        if s.class_tag != SCHUR_SCALAR_HEAD:
            return HomothetyResult(UNSUPPORTED_HYPOTHESIS, rho, count, evaluated)
        est = functional_value(k, s, rho)
        evaluated += 1
        v = est.verdict()
        verdicts.append(v)
        if worst is None or est.value > worst[1].value:
            worst = (int(idx), est)
        if m.kind_tag == LINEAR_COMPOSITE and v in (PASS, FAIL):
            break
    i, est = worst
    return HomothetyResult(_combine(verdicts), rho, count, evaluated, i,
                           tuple(complex(z) for z in dirs[i]), est.value, est.slack)


def radius_of_nkind_domain(m: MultiSeries) -> float:
    """Homothety factor 1 / (3 - a0) for the N2 functional."""
    if m.head_a0 is None:
        raise UnsupportedClassError("radius needs a scalar head f(0) = a0 I")
    return 1.0 / (3.0 - m.head_a0)
