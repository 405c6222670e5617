"""Dense complex matrices standing in for bounded operators on C^d.

Spectral norms are computed by a power method on ``M* M`` accelerated by
repeated squaring: after ``k`` squarings the normalised iterate is
proportional to ``(M* M)^(2^k)``, so applying it to a fixed probe vector gives an
accurate top singular vector.  Iteration stops per matrix once the
Rayleigh residual is below ``RES_TOL`` relative, which also forces a
near-degenerate top pair to be resolved rather than averaged.  Everything is vectorised over leading batch axes because
the circle-supremum search evaluates thousands of norms at once.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, SingularMatrixError

MAX_SQUARINGS = 80
FREE_SQUARINGS = 5
COND_LIMIT = 1e12
# stop once ||h v - q v|| <= RES_TOL * q; q is then within about that of the top eigenvalue
RES_TOL = 1e-13


def _probe(d: int) -> np.ndarray:
    """Fixed vector with no special alignment to coordinate or sign patterns."""
    k = np.arange(1, d + 1)
    return np.exp(1j * np.sqrt(2.0) * k) * (1.0 + 1.0 / (k + np.pi))


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """A d x d complex matrix; ``entries`` is stored as a read-only copy."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise InvalidInputError(f"expected a non-empty square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("matrix has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "ComplexMatrix":
        return cls(np.eye(dim))

    @classmethod
    def zeros(cls, dim: int) -> "ComplexMatrix":
        return cls(np.zeros((dim, dim)))

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return ComplexMatrix(self.entries @ other.entries)

    def __add__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return ComplexMatrix(self.entries + other.entries)

    def __sub__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return ComplexMatrix(self.entries - other.entries)

    def scale(self, c: complex) -> "ComplexMatrix":
        return ComplexMatrix(c * self.entries)

    def allclose(self, other: "ComplexMatrix", atol: float = 1e-12) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.entries, other.entries, rtol=0.0, atol=atol))

    def to_json(self) -> dict:
        rows = [[[float(z.real), float(z.imag)] for z in row] for row in self.entries]
        return {"dim": self.dim, "entries": rows}

    @classmethod
    def from_json(cls, obj: dict) -> "ComplexMatrix":
        try:
            d = int(obj["dim"])
            arr = np.array([[complex(re, im) for re, im in row] for row in obj["entries"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"bad matrix record: {exc}") from None
        if arr.shape != (d, d):
            raise InvalidInputError(f"declared dim {d} does not match entries shape {arr.shape}")
        return cls(arr)


def _as_stack(m) -> np.ndarray:
    arr = m.entries if isinstance(m, ComplexMatrix) else np.asarray(m, dtype=complex)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise InvalidInputError(f"expected square matrices, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("matrix has non-finite entries")
    return arr


def spectral_norms(stack) -> np.ndarray:
    """Largest singular value of every matrix in a ``(..., d, d)`` stack."""
    a = _as_stack(stack)
    batch = a.shape[:-2]
    d = a.shape[-1]
    a = a.reshape((-1, d, d))
    scale = np.max(np.abs(a), axis=(-2, -1))
    out = np.zeros(len(a))
    live = scale > 0.0
    if not np.any(live):
        return out.reshape(batch)
    # exact power-of-two rescaling to entries of modulus < 1, so nothing over- or underflows
    expo = np.frexp(scale[live])[1][:, None, None]
    a = np.ldexp(a[live].real, -expo) + 1j * np.ldexp(a[live].imag, -expo)
    h = np.conj(np.swapaxes(a, -1, -2)) @ a
    p = h / np.real(np.trace(h, axis1=-2, axis2=-1))[:, None, None]
    # the first squarings are never enough to converge; skip the checks
    for _ in range(FREE_SQUARINGS):
        p = p @ p
        p /= np.real(np.trace(p, axis1=-2, axis2=-1))[:, None, None]
    x = _probe(d)
    q_out = np.empty(len(h))
    idx = np.arange(len(h))
    for it in range(MAX_SQUARINGS):
        v = p @ x
        nv = np.real(np.einsum("bi,bi->b", np.conj(v), v))
        flat = nv <= 0.0
        if np.any(flat):
            cols = np.argmax(np.sum(np.abs(p[flat]) ** 2, axis=-2), axis=-1)
            v[flat] = p[flat][np.arange(len(cols)), :, cols]
            nv[flat] = np.real(np.einsum("bi,bi->b", np.conj(v[flat]), v[flat]))
        hv = np.einsum("bij,bj->bi", h, v)
        q = np.real(np.einsum("bi,bi->b", np.conj(v), hv)) / nv
        res = hv - q[:, None] * v
        res2 = np.real(np.einsum("bi,bi->b", np.conj(res), res)) / nv
        done = res2 <= (RES_TOL * q) ** 2
        if it == MAX_SQUARINGS - 1:
            done[:] = True
        q_out[idx[done]] = q[done]
        if np.all(done):
            break
        keep = ~done
        idx, h, p = idx[keep], h[keep], p[keep]
        p = p @ p
        p /= np.real(np.trace(p, axis1=-2, axis2=-1))[:, None, None]
    q = q_out
    out[live] = np.ldexp(np.sqrt(np.maximum(q, 0.0)), expo[:, 0, 0])
    return out.reshape(batch)


def spectral_norm(m) -> float:
    """Operator 2-norm of a single matrix (ComplexMatrix or array)."""
    a = _as_stack(m)
    if a.ndim != 2:
        raise InvalidInputError("spectral_norm takes one matrix; use spectral_norms for stacks")
    return float(spectral_norms(a[None])[0])


def _smallest_singular_value(a: np.ndarray) -> float:
    # power method on (M* M)^{-1} would need the inverse we are validating;
    # the Hermitian eigen-solve is the cheap independent route here
    return float(np.sqrt(max(np.linalg.eigvalsh(np.conj(a.T) @ a)[0], 0.0)))


def invert(m: ComplexMatrix) -> ComplexMatrix:
    a = _as_stack(m)
    if a.ndim != 2:
        raise InvalidInputError("invert takes one matrix")
    d = a.shape[0]
    top = spectral_norm(a)
    low = _smallest_singular_value(a)
    if top == 0.0 or low == 0.0 or top / low > COND_LIMIT:
        raise SingularMatrixError(f"condition number above {COND_LIMIT:g}")
    try:
        inv = np.linalg.solve(a, np.eye(d, dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from None
    return ComplexMatrix(inv)
