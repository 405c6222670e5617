"""Truncated operator-valued power series f(z) = sum_n A_n z^n on the unit disk.

A series is stored as a coefficient stack of shape ``(M + 1, d, d)``.  Two
class tags exist:

``schur_scalar_head``
    f is contractive on the disk and ``A_0 = a0 * I`` with real
    ``0 <= a0 < 1``.  Then ``||A_n|| <= 1 - a0**2`` for n >= 1, which gives a
    certified geometric bound on the discarded tail.
``general``
    No head structure is assumed.

Generators: the Moebius family ``blaschke_series``, ``mobius_schur`` (a
scalar-head Schur function built from any Schur ``g``), and transfer
functions of contractive colligations.  ``schur_samples`` mixes the two
independent random constructions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import DomainError, InvalidInputError, PreconditionError, UnsupportedClassError
from .matcore import ComplexMatrix, spectral_norm, spectral_norms

SCHUR_SCALAR_HEAD = "schur_scalar_head"
GENERAL = "general"
DEFAULT_ORDER = 128
DEFAULT_DIM = 4
CONTRACTION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class OperatorSeries:
    coeffs: np.ndarray
    class_tag: str = GENERAL
    a0: float | None = None

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex, copy=True)
        if c.ndim != 3 or c.shape[1] != c.shape[2] or c.shape[0] < 1 or c.shape[1] < 1:
            raise InvalidInputError(f"coefficient stack must have shape (M+1, d, d), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("series has non-finite coefficients")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if self.class_tag == SCHUR_SCALAR_HEAD:
            if self.a0 is None or not (0.0 <= self.a0 < 1.0):
                raise InvalidInputError(f"scalar head a0 must lie in [0, 1), got {self.a0}")
            object.__setattr__(self, "a0", float(self.a0))
            if not np.array_equal(c[0], self.a0 * np.eye(self.dim)):
                raise InvalidInputError("schur_scalar_head series must have A_0 == a0 * I exactly")
        elif self.class_tag == GENERAL:
            if self.a0 is not None:
                raise InvalidInputError("general series carry no scalar head")
        else:
            raise InvalidInputError(f"unknown class tag {self.class_tag!r}")

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    @property
    def order(self) -> int:
        """Truncation order M (index of the last stored coefficient)."""
        return self.coeffs.shape[0] - 1

    @property
    def has_scalar_head(self) -> bool:
        return self.class_tag == SCHUR_SCALAR_HEAD

    @cached_property
    def norms(self) -> np.ndarray:
        return spectral_norms(self.coeffs)

    @property
    def head_norm(self) -> float:
        return self.a0 if self.has_scalar_head else float(self.norms[0])

    def matrix(self, n: int) -> ComplexMatrix:
        return ComplexMatrix(self.coeffs[n])

    def with_head(self, a0: float) -> "OperatorSeries":
        """Retag as schur_scalar_head; the caller vouches for contractivity."""
        return OperatorSeries(self.coeffs, SCHUR_SCALAR_HEAD, a0)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "class": self.class_tag,
            "a0": self.a0,
            "coeffs": [ComplexMatrix(a).to_json() for a in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "OperatorSeries":
        try:
            mats = [ComplexMatrix.from_json(m).entries for m in obj["coeffs"]]
            tag, a0, dim = obj["class"], obj.get("a0"), int(obj["dim"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"bad series record: {exc}") from None
        if any(m.shape != (dim, dim) for m in mats):
            raise InvalidInputError("coefficient dimension does not match declared dim")
        return cls(np.stack(mats), tag, a0)


def constant_series(a0: float, dim: int = DEFAULT_DIM, order: int = 0) -> OperatorSeries:
    c = np.zeros((order + 1, dim, dim), dtype=complex)
    c[0] = a0 * np.eye(dim)
    return OperatorSeries(c, SCHUR_SCALAR_HEAD, a0)


def _check_b(b: float) -> float:
    if not (0.0 <= b < 1.0) or not math.isfinite(b):
        raise DomainError(f"b must lie in [0, 1), got {b}")
    return float(b)


def blaschke_series(b: float, dim: int = DEFAULT_DIM, order: int = DEFAULT_ORDER) -> OperatorSeries:
    """Coefficients of ((b - z) / (1 - b z)) * I truncated at ``order``."""
    b = _check_b(b)
    if order < 1:
        raise InvalidInputError("order must be at least 1")
    n = np.arange(1, order + 1)
    scal = np.empty(order + 1)
    scal[0] = b
    scal[1:] = -(1.0 - b * b) * b ** (n - 1)
    return OperatorSeries(scal[:, None, None] * np.eye(dim), SCHUR_SCALAR_HEAD, b)


def evaluate(s: OperatorSeries, z: complex) -> ComplexMatrix:
    if abs(z) >= 1.0:
        raise DomainError(f"|z| must be < 1, got {abs(z)}")
    acc = np.zeros((s.dim, s.dim), dtype=complex)
    for a in s.coeffs[::-1]:
        acc = acc * z + a
    return ComplexMatrix(acc)


def mobius_schur(a0: float, g: OperatorSeries, order: int = DEFAULT_ORDER) -> OperatorSeries:
    """Expand f(z) = (a0 I - z g(z)) (I - a0 z g(z))^{-1} to ``order``.

    ``g`` must be Schur class; coefficients of ``g`` past its truncation
    order are taken as zero (exact for polynomial ``g``).  The result has
    ``f(0) = a0 I`` and is tagged schur_scalar_head.
    """
    a0 = _check_b(a0)
    d = g.dim
    h = np.zeros((order + 1, d, d), dtype=complex)
    take = min(order, g.order + 1)
    h[1 : take + 1] = g.coeffs[:take]
    # u = (I - a0 h)^{-1}:  u_n = a0 * sum_{k=1..n} h_k u_{n-k}
    u = np.zeros_like(h)
    u[0] = np.eye(d)
    f = np.zeros_like(h)
    f[0] = a0 * np.eye(d)
    for n in range(1, order + 1):
        conv = np.einsum("kij,kjl->il", h[1 : n + 1], u[n - 1 :: -1][:n])
        u[n] = a0 * conv
        f[n] = a0 * u[n] - conv
    return OperatorSeries(f, SCHUR_SCALAR_HEAD, a0)


def _block(A, B, C, D) -> np.ndarray:
    return np.block([[A, B], [C, D]])


def colligation_series(A, B, C, D, order: int = DEFAULT_ORDER) -> OperatorSeries:
    """Transfer function A + z B (I - z D)^{-1} C of a contractive colligation."""
    A, B, C, D = (m.entries if isinstance(m, ComplexMatrix) else np.asarray(m, dtype=complex) for m in (A, B, C, D))
    if spectral_norm(_block(A, B, C, D)) > 1.0 + CONTRACTION_TOL:
        raise PreconditionError("colligation block [[A, B], [C, D]] is not a contraction")
    d = A.shape[0]
    out = np.zeros((order + 1, d, d), dtype=complex)
    out[0] = A
    dpow = np.eye(D.shape[0], dtype=complex)
    for n in range(1, order + 1):
        out[n] = B @ dpow @ C
        dpow = dpow @ D
    return OperatorSeries(out, GENERAL)


def _defect(g: np.ndarray) -> np.ndarray:
    """(I - g g*)^{1/2} for a contraction g."""
    w, v = np.linalg.eigh(np.eye(g.shape[0]) - g @ np.conj(g.T))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ np.conj(v.T)


def scalar_head_colligation(a0: float, gamma1, gamma2, gamma3, order: int = DEFAULT_ORDER) -> OperatorSeries:
    """Colligation whose corner block is exactly ``a0 I``.

    Every contraction [[a0 I, B], [C, D]] has the form B = s G1, C = s G2,
    D = -a0 G2 G1 + (I - G2 G2*)^{1/2} G3 (I - G1* G1)^{1/2} with
    s = sqrt(1 - a0^2) and contractions G1, G2, G3.
    """
    a0 = _check_b(a0)
    g1, g2, g3 = (np.asarray(m, dtype=complex) for m in (gamma1, gamma2, gamma3))
    d = g1.shape[0]
    s = math.sqrt(1.0 - a0 * a0)
    D = -a0 * g2 @ g1 + _defect(g2) @ g3 @ _defect(np.conj(g1.T))
    f = colligation_series(a0 * np.eye(d), s * g1, s * g2, D, order)
    return f.with_head(a0)


def tail_majorant_bound(s: OperatorSeries, r: float) -> float:
    """Bound on sum_{n > M} ||A_n|| r^n from ||A_n|| <= 1 - a0^2."""
    if not s.has_scalar_head:
        raise UnsupportedClassError("certified tail needs a schur_scalar_head series")
    if not (0.0 <= r < 1.0):
        raise DomainError(f"r must lie in [0, 1), got {r}")
    return (1.0 - s.a0 ** 2) * r ** (s.order + 1) / (1.0 - r)


def coeff_norms(s: OperatorSeries) -> list[float]:
    return [float(x) for x in s.norms]


# -- random Schur-class samples ---------------------------------------------

def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_contraction(rng: np.random.Generator, d: int) -> np.ndarray:
    """U diag(s) V with Haar U, V and singular values sqrt(uniform[0, 1])."""
    s = np.sqrt(rng.uniform(0.0, 1.0, size=d))
    return (random_unitary(rng, d) * s) @ random_unitary(rng, d)


def random_colligation(rng: np.random.Generator, d: int, order: int = DEFAULT_ORDER) -> OperatorSeries:
    k = random_contraction(rng, 2 * d)
    # the random block may exceed 1 by rounding; pull it inside
    k /= max(1.0, spectral_norm(k))
    return colligation_series(k[:d, :d], k[:d, d:], k[d:, :d], k[d:, d:], order)


CONSTRUCTIONS = ("mobius", "colligation")


def random_schur_series(rng: np.random.Generator, a0: float, dim: int = DEFAULT_DIM,
                        order: int = DEFAULT_ORDER, construction: str = "mobius") -> OperatorSeries:
    if construction == "mobius":
        return mobius_schur(a0, random_colligation(rng, dim, order), order)
    if construction == "colligation":
        gs = [random_contraction(rng, dim) for _ in range(3)]
        return scalar_head_colligation(a0, *gs, order=order)
    raise InvalidInputError(f"unknown construction {construction!r}")


def schur_samples(seed: int, count: int, dim: int = DEFAULT_DIM, order: int = DEFAULT_ORDER,
                  a0_range: tuple[float, float] = (0.0, 1.0)) -> Iterator[OperatorSeries]:
    """Seeded scalar-head Schur samples, alternating the two constructions.

    Sample ``i`` depends only on ``(seed, i)``, so any slice of the stream is
    reproducible on its own.
    """
    lo, hi = a0_range
    if not (0.0 <= lo <= hi <= 1.0):
        raise InvalidInputError(f"a0 range must satisfy 0 <= lo <= hi <= 1, got {a0_range}")
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        a0 = rng.uniform(lo, hi)
        if a0 >= 1.0:
            a0 = math.nextafter(1.0, 0.0)
        yield random_schur_series(rng, a0, dim, order, CONSTRUCTIONS[i % 2])
