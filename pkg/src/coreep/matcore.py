"""Dense complex-matrix kernel.

Every algebra element is a 2-D ``numpy`` array of dtype ``complex128``; the
involution is the conjugate transpose.  Range and annihilator comparisons are
expressed through SVD-based numerical rank, so that for square matrices

    l(X) = l(Y)  <=>  range(X) = range(Y)
    r(X) = r(Y)  <=>  range(X*) = range(Y*)
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import MatrixFormatError, ShapeError

EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances used by every check.

    rank_tol: relative singular-value cutoff (times the largest singular value).
    eq_tol:   bound on the relative Frobenius residual of an equality.
    nil_tol:  bound on the nilpotency residual.
    """

    rank_tol: float = 64 * EPS
    eq_tol: float = 1e-8
    nil_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_tol", "eq_tol", "nil_tol"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")

    def to_dict(self) -> dict:
        return {"rankTol": self.rank_tol, "eqTol": self.eq_tol, "nilTol": self.nil_tol}

    @classmethod
    def from_dict(cls, obj: dict) -> "ToleranceConfig":
        return cls(obj["rankTol"], obj["eqTol"], obj["nilTol"])

    def subspace(self) -> "ToleranceConfig":
        """Cutoff used by subspace predicates: computed ranges carry errors near eq_tol, not eps."""
        return replace(self, rank_tol=max(self.rank_tol, self.eq_tol))


DEFAULT_TOL = ToleranceConfig()


def cmatrix(x) -> np.ndarray:
    """Coerce ``x`` to a finite complex128 2-D array (copy)."""
    m = np.array(x, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"matrix dimensions must be positive, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise MatrixFormatError("matrix has non-finite entries")
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def require_square(m: np.ndarray, what="matrix") -> int:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"{what} must be square, got shape {m.shape}")
    return m.shape[0]


def conj_transpose(m) -> np.ndarray:
    return np.conj(np.asarray(m)).T


ct = conj_transpose


def singular_values(m) -> np.ndarray:
    m = np.asarray(m)
    if m.size == 0:
        return np.zeros(0)
    return np.linalg.svd(m, compute_uv=False)


def _cutoff(s, cfg, scale):
    ref = max(float(s[0]) if s.size else 0.0, float(scale))
    return cfg.rank_tol * ref


def rank(m, cfg: ToleranceConfig = DEFAULT_TOL, scale: float = 0.0) -> int:
    """Number of singular values above ``rank_tol * max(sigma_max, scale)``; rank(0) = 0.

    ``scale`` is an a-priori magnitude for ``m`` (e.g. ||A||^k when ``m`` is a
    computed power A^k), so that pure rounding noise is not counted as rank.
    """
    s = singular_values(m)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > _cutoff(s, cfg, scale)))


def _svd_truncated(m, cfg, scale=0.0):
    u, s, vh = np.linalg.svd(np.asarray(m, dtype=np.complex128), full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int(np.count_nonzero(s > _cutoff(s, cfg, scale)))
    return u[:, :r], s[:r], vh[:r, :]


def pinv(m, cfg: ToleranceConfig = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Moore-Penrose inverse by truncated SVD."""
    m = np.asarray(m, dtype=np.complex128)
    u, s, vh = _svd_truncated(m, cfg, scale)
    return (conj_transpose(vh) / s) @ conj_transpose(u)


def range_basis(m, cfg: ToleranceConfig = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Orthonormal basis (as columns) of the column space of ``m``."""
    u, _, _ = _svd_truncated(m, cfg, scale)
    return u


def range_projector(m, cfg: ToleranceConfig = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Orthogonal projector P = P^2 = P* onto range(m)."""
    u = range_basis(m, cfg, scale)
    p = u @ conj_transpose(u)
    # exact self-adjointness; idempotence is up to rounding anyway
    return 0.5 * (p + conj_transpose(p))


def range_contains(x, y, cfg: ToleranceConfig = DEFAULT_TOL, scale: float = 0.0) -> bool:
    """True iff range(y) is a subspace of range(x)."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape[0] != y.shape[0]:
        raise ShapeError("range comparison needs equal row counts")
    cfg = cfg.subspace()
    return rank(np.hstack([x, y]), cfg, scale) == rank(x, cfg, scale)


def range_equal(x, y, cfg: ToleranceConfig = DEFAULT_TOL, scale: float = 0.0) -> bool:
    """range(x) == range(y), i.e. rank x = rank y = rank [x | y]."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape[0] != y.shape[0]:
        raise ShapeError("range comparison needs equal row counts")
    cfg = cfg.subspace()
    rx = rank(x, cfg, scale)
    return rx == rank(y, cfg, scale) == rank(np.hstack([x, y]), cfg, scale)


def residual(x, y) -> float:
    """||x - y||_F / (1 + ||x||_F + ||y||_F)."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ShapeError(f"shape mismatch {x.shape} vs {y.shape}")
    return float(np.linalg.norm(x - y) / (1.0 + np.linalg.norm(x) + np.linalg.norm(y)))


def approx_equal(x, y, cfg: ToleranceConfig = DEFAULT_TOL):
    """Return ``(ok, residual)`` with the relative Frobenius residual."""
    r = residual(x, y)
    return r <= cfg.eq_tol, r


def mat_pow(m, k: int) -> np.ndarray:
    """m**k by repeated squaring; m**0 = I."""
    m = np.asarray(m, dtype=np.complex128)
    n = require_square(m)
    if k < 0:
        raise ValueError("power must be nonnegative")
    result = identity(n)
    base = m
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def power_scale(m, k: int) -> float:
    """A-priori magnitude ||m||_2^k of a computed power m^k."""
    return float(np.linalg.norm(np.asarray(m), 2)) ** k


def is_projection(p, cfg: ToleranceConfig = DEFAULT_TOL):
    """Check p = p^2 = p*; returns (ok, max residual)."""
    r = max(residual(p @ p, p), residual(conj_transpose(p), p))
    return r <= cfg.eq_tol, r


def nilpotency_residual(m) -> float:
    """||m^n||_F / max(1, ||m||_F)^n with n the dimension."""
    m = np.asarray(m)
    n = require_square(m)
    scale = max(1.0, float(np.linalg.norm(m))) ** n
    return float(np.linalg.norm(mat_pow(m, n)) / scale)


def is_nilpotent(m, cfg: ToleranceConfig = DEFAULT_TOL):
    r = nilpotency_residual(m)
    return r <= cfg.nil_tol, r


# --- matrix file format ------------------------------------------------------

def _reject_constant(name):
    raise MatrixFormatError(f"non-finite number {name} in matrix JSON")


def _finite_number(v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise MatrixFormatError(f"expected a number, got {v!r}")
    if not math.isfinite(v):
        raise MatrixFormatError("non-finite number in matrix data")
    return float(v)


def matrix_from_obj(obj) -> np.ndarray:
    """Build a matrix from the ``{"rows", "cols", "data": [[re, im], ...]}`` object."""
    if not isinstance(obj, dict):
        raise MatrixFormatError("matrix JSON must be an object")
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except KeyError as exc:
        raise MatrixFormatError(f"missing field {exc.args[0]!r}") from None
    for name, v in (("rows", rows), ("cols", cols)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise MatrixFormatError(f"{name} must be a positive integer")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise MatrixFormatError(
            f"data length {len(data) if isinstance(data, list) else '?'} != rows*cols = {rows * cols}"
        )
    vals = np.empty(rows * cols, dtype=np.complex128)
    for i, pair in enumerate(data):
        if not isinstance(pair, list) or len(pair) != 2:
            raise MatrixFormatError(f"entry {i} is not a [re, im] pair")
        vals[i] = complex(_finite_number(pair[0]), _finite_number(pair[1]))
    return vals.reshape(rows, cols)


def matrix_to_obj(m) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    rows, cols = m.shape
    return {
        "rows": rows,
        "cols": cols,
        "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def loads_matrix(text: str) -> np.ndarray:
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON: {exc}") from None
    return matrix_from_obj(obj)


def dumps_matrix(m) -> str:
    return json.dumps(matrix_to_obj(m))


def load_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return loads_matrix(fh.read())


def save_matrix(m, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_matrix(m))
        fh.write("\n")
