"""Drazin, group, core, {1,3}, (b,c) and core-EP inverses of square matrices.

Each routine computes its result from an explicit formula and then checks the
defining identities, raising :class:`NumericalFailure` when a residual
exceeds the tolerance, so ill-conditioning is reported rather than passed on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NoBCInverse, NoGroupInverse, NumericalFailure, RouteMismatch, ShapeError
from .matcore import (
    DEFAULT_TOL,
    ToleranceConfig,
    approx_equal,
    ct,
    identity,
    is_nilpotent,
    is_projection,
    mat_pow,
    pinv,
    power_scale,
    range_contains,
    range_equal,
    range_projector,
    rank,
    require_square,
    residual,
)

ROUTES = ("R1", "R2", "R3")


@dataclass(frozen=True)
class DrazinResult:
    dinv: np.ndarray
    index: int
    spectral_idempotent: np.ndarray
    residuals: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CoreEPResult:
    """Core-EP inverse ``ceinv`` with ``q`` (projector onto range(A^D)) and ``p = A ceinv``."""

    ceinv: np.ndarray
    q: np.ndarray
    p: np.ndarray
    routes_agree: bool
    max_route_residual: float
    residuals: dict = field(default_factory=dict)
    candidates: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CoreEPDecomposition:
    """A = core_part + nil_part with core_part* nil_part = nil_part core_part = 0."""

    core_part: np.ndarray
    nil_part: np.ndarray
    p: np.ndarray
    residuals: dict = field(default_factory=dict)


def _check(name, residuals, tol):
    bad = {k: v for k, v in residuals.items() if v > tol}
    if bad:
        worst = max(bad, key=bad.get)
        raise NumericalFailure(
            f"{name}: identity {worst!r} has residual {bad[worst]:.3e} > {tol:.1e}",
            residuals,
        )


def _norm(a, scale):
    return max(power_scale(a, 1), float(scale))


def index(a, cfg: ToleranceConfig = DEFAULT_TOL, scale: float = 0.0) -> int:
    """Smallest k >= 0 with rank(A^k) = rank(A^(k+1)).

    ``scale`` is an a-priori magnitude of A; pass it when A is itself a computed
    product or compression whose exact value may be (near) zero.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = require_square(a)
    norm = _norm(a, scale)
    power = identity(n)
    r_prev = n
    for k in range(n + 1):
        power = power @ a
        r_next = rank(power, cfg, norm ** (k + 1))
        if r_next == r_prev:
            return k
        r_prev = r_next
    return n


def drazin(a, cfg: ToleranceConfig = DEFAULT_TOL, scale: float = 0.0) -> DrazinResult:
    """Drazin inverse A^k pinv(A^(2k+1)) A^k with k = index(A)."""
    a = np.asarray(a, dtype=np.complex128)
    n = require_square(a)
    k = index(a, cfg, scale)
    ak = mat_pow(a, k)
    ak1 = ak @ a
    x = ak @ pinv(ak1 @ ak, cfg, _norm(a, scale) ** (2 * k + 1)) @ ak
    res = {
        "commute": residual(a @ x, x @ a),
        "reflexive": residual(x @ a @ x, x),
        "power": residual(ak, x @ ak1),
    }
    _check("drazin", res, cfg.eq_tol)
    return DrazinResult(x, k, identity(n) - a @ x, res)


def qnil_sequence(a, x, start: int, count: int = 4):
    """||A^m - X A^(m+1)||^(1/m) for m = start .. start+count-1 (m >= 1)."""
    a = np.asarray(a, dtype=np.complex128)
    out = []
    for m in range(max(start, 1), max(start, 1) + count):
        am = mat_pow(a, m)
        out.append(float(np.linalg.norm(am - x @ am @ a, 2)) ** (1.0 / m))
    return out


def group_inverse(a, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    require_square(a)
    if rank(a, cfg) != rank(a @ a, cfg, power_scale(a, 2)):
        raise NoGroupInverse("rank(A^2) < rank(A): index exceeds 1, no group inverse")
    x = drazin(a, cfg).dinv
    _check("group inverse", {"inner": residual(a @ x @ a, a)}, cfg.eq_tol)
    return x


def one_three_inverse(a, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Canonical {1,3}-inverse: the Moore-Penrose inverse."""
    return pinv(a, cfg)


def core_inverse(a, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Core inverse A^# A A^+ for index(A) <= 1."""
    a = np.asarray(a, dtype=np.complex128)
    x = group_inverse(a, cfg) @ a @ pinv(a, cfg)
    _check("core inverse", {"inner": residual(a @ x @ a, a)}, cfg.eq_tol)
    # xA = aA  and  Ax = Aa*  (row space of x = row space of a*)
    if not range_equal(x, a, cfg):
        raise NumericalFailure("core inverse: range(X) != range(A)")
    if not range_equal(ct(x), a, cfg):
        raise NumericalFailure("core inverse: row space of X != row space of A*")
    return x


def bc_inverse(a, b, c, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """(b,c)-inverse X = B pinv(C A B) C, existing iff rank(CAB) = rank(B) = rank(C)."""
    a, b, c = (np.asarray(m, dtype=np.complex128) for m in (a, b, c))
    n = require_square(a)
    if b.shape != (n, n) or c.shape != (n, n):
        raise ShapeError("A, B, C must be square of equal size")
    cab = c @ a @ b
    rb, rc, rcab = rank(b, cfg), rank(c, cfg), rank(cab, cfg)
    if not rb == rc == rcab:
        raise NoBCInverse(f"rank(CAB)={rcab}, rank(B)={rb}, rank(C)={rc}: no (b,c)-inverse")
    x = b @ pinv(cab, cfg) @ c
    _check("(b,c)-inverse", {"xab=b": residual(x @ a @ b, b), "cax=c": residual(c @ a @ x, c)}, cfg.eq_tol)
    if not range_contains(b, x, cfg):
        raise NumericalFailure("(b,c)-inverse: range(X) not inside range(B)")
    if not range_contains(ct(c), ct(x), cfg):
        raise NumericalFailure("(b,c)-inverse: row space of X not inside row space of C")
    return x


def _route(route, a, dz: DrazinResult, cfg, scale):
    ad = dz.dinv
    if route == "R1":
        return ad @ range_projector(mat_pow(a, dz.index), cfg, _norm(a, scale) ** dz.index)
    # A^D is itself computed, so its numerical null space sits well above eps
    cfg = cfg.subspace()
    if route == "R2":
        return ad @ ad @ core_inverse(ad, cfg)
    if route == "R3":
        return ad @ one_three_inverse(a @ ad, cfg)
    raise ValueError(f"unknown route {route!r}")


def core_ep(a, route: str = "R1", cfg: ToleranceConfig = DEFAULT_TOL, dz: DrazinResult | None = None,
            scale: float = 0.0) -> CoreEPResult:
    """Core-EP inverse by route R1 (A^D q), R2 ((A^D)^2 core(A^D)), R3 (A^D (AA^D)^(1,3)) or ALL."""
    a = np.asarray(a, dtype=np.complex128)
    require_square(a)
    if dz is None:
        dz = drazin(a, cfg, scale)
    route = route.upper()
    if route == "ALL":
        cands = {r: _route(r, a, dz, cfg, scale) for r in ROUTES}
        pair_res = {
            f"{r}-{s}": residual(cands[r], cands[s])
            for i, r in enumerate(ROUTES)
            for s in ROUTES[i + 1:]
        }
        worst = max(pair_res.values())
        if worst > cfg.eq_tol:
            raise RouteMismatch(f"core-EP routes disagree (max residual {worst:.3e})", cands, pair_res)
        x = cands["R1"]
    else:
        x = _route(route, a, dz, cfg, scale)
        cands = {route: x}
        pair_res = {}
        worst = 0.0

    k = dz.index
    ak = mat_pow(a, k)
    q = range_projector(ak, cfg, _norm(a, scale) ** k)
    ax = a @ x
    res = {
        "x=ax^2": residual(x, a @ x @ x),
        "(ax)*=ax": residual(ct(ax), ax),
        "a^k=xa^(k+1)": residual(ak, x @ ak @ a),
        "q projection": is_projection(q, cfg)[1],
        "p projection": is_projection(ax, cfg)[1],
    }
    res.update(pair_res)
    _check("core-EP", res, cfg.eq_tol)
    if not range_equal(q, dz.dinv, cfg):
        raise NumericalFailure("core-EP: range(q) != range(A^D)", res)
    return CoreEPResult(x, q, ax, True, worst, res, cands)


def core_ep_inverse(a, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    return core_ep(a, "R1", cfg).ceinv


def core_ep_decompose(a, cfg: ToleranceConfig = DEFAULT_TOL) -> CoreEPDecomposition:
    a = np.asarray(a, dtype=np.complex128)
    n = require_square(a)
    k = index(a, cfg)
    proj = range_projector(mat_pow(a, k), cfg, power_scale(a, k))
    core = proj @ a
    nil = (identity(n) - proj) @ a
    p = core @ core_ep(core, "R1", cfg).ceinv
    res = {
        "x*y=0": residual(ct(core) @ nil, 0 * core),
        "yx=0": residual(nil @ core, 0 * core),
        "p=P": residual(p, proj),
        "nilpotent": is_nilpotent(nil, cfg)[1],
    }
    _check("core-EP decomposition", {k_: v for k_, v in res.items() if k_ != "nilpotent"}, cfg.eq_tol)
    if res["nilpotent"] > cfg.nil_tol:
        raise NumericalFailure("core-EP decomposition: nil part is not nilpotent", res)
    if rank(core, cfg) != rank(core @ core, cfg, power_scale(core, 2)):
        raise NumericalFailure("core-EP decomposition: core part has index > 1", res)
    return CoreEPDecomposition(core, nil, p, res)


def projection_characterization(a, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Projection p with A + p invertible and pA = pAp nilpotent."""
    a = np.asarray(a, dtype=np.complex128)
    n = require_square(a)
    k = index(a, cfg)
    p = identity(n) - range_projector(mat_pow(a, k), cfg, power_scale(a, k))
    pa = p @ a
    res = {
        "projection": is_projection(p, cfg)[1],
        "pa=pap": residual(pa, pa @ p),
    }
    _check("projection characterization", res, cfg.eq_tol)
    nil_ok, nil_res = is_nilpotent(pa, cfg)
    if not nil_ok:
        raise NumericalFailure("projection characterization: pA not nilpotent", {**res, "nilpotent": nil_res})
    if rank(a + p, cfg) != n:
        raise NumericalFailure("projection characterization: A + p is singular", res)
    return p


def is_normal(a, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    return approx_equal(a @ ct(a), ct(a) @ a, cfg)[0]
