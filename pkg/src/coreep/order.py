"""The core-EP partial order a <= b: a a^cEP = b a^cEP and a^cEP a = a^cEP b.

Blocks are kept in the ambient n x n space as compressions e_i M e_j, so no
basis ordering is ever fixed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalFailure, OrderViolation
from .gen_inverses import core_ep
from .instances import haar_unitary, rng_for
from .laws import VerificationReport, _report
from .matcore import (
    DEFAULT_TOL,
    ToleranceConfig,
    ct,
    identity,
    is_nilpotent,
    is_projection,
    matrix_to_obj,
    rank,
    require_square,
    residual,
)


def _ce(m, cfg, scale=0.0):
    return core_ep(m, "R1", cfg, scale=scale).ceinv


def order_holds(a, b, cfg: ToleranceConfig = DEFAULT_TOL):
    """Return ``(holds, residuals)`` for a <= b in the core-EP order."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError("a and b must have the same shape")
    x = _ce(a, cfg)
    res = {
        "a x=b x": residual(a @ x, b @ x),
        "x a=x b": residual(x @ a, x @ b),
    }
    return all(v <= cfg.eq_tol for v in res.values()), res


def lemma42_check(a, b, cfg: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """a <= b iff, over p = a a^cEP, b has a's first block row and a zero lower-left block."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    n = require_square(a)
    holds, ores = order_holds(a, b, cfg)
    p = a @ _ce(a, cfg)
    pc = identity(n) - p
    block = {
        "(1-p)bp=0": residual(pc @ b @ p, 0 * p),
        "pbp=pap": residual(p @ b @ p, p @ a @ p),
        "pb(1-p)=pa(1-p)": residual(p @ b @ pc, p @ a @ pc),
    }
    blocks_ok = all(v <= cfg.eq_tol for v in block.values())
    notes = [f"order {'holds' if holds else 'fails'}", f"block form {'holds' if blocks_ok else 'fails'}"]
    return VerificationReport("lem4.2", True, holds == blocks_ok, {}, cfg.eq_tol, notes, {**ores, **block})


def lemma43_corner(a, b, cfg: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """Corner c = (1-p) b (1-p), p = a a^cEP, and the identities used to invert it.

    Needs a <= b; otherwise the report is vacuous.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    n = require_square(a)
    holds, ores = order_holds(a, b, cfg)
    p = a @ _ce(a, cfg)
    pc = identity(n) - p
    c = pc @ b @ pc
    ce = _ce(c, cfg, np.linalg.norm(b, 2))
    be = _ce(b, cfg)
    bbe = b @ be
    x4 = pc @ be @ pc
    res = {
        "x3=(1-p)b^cEP p=0": residual(pc @ be @ p, 0 * p),
        "p bb^cEP=bb^cEP p": residual(p @ bbe, bbe @ p),
        "c x4 self-adjoint": residual(c @ x4, ct(c @ x4)),
        "c x4^2=x4": residual(c @ x4 @ x4, x4),
        "c^cEP=(1-p)b^cEP(1-p)": residual(ce, x4),
    }
    notes = ["order hypothesis a <= b is required by the block argument"]
    return _report("lem4.3", holds, res, cfg, notes, ores)


@dataclass
class OrderCertificate:
    """Canonical three-projection form of an ordered pair a <= b."""

    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    blocks_a: list
    blocks_b: list
    residuals: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    def ok(self, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
        nil = {k for k in self.residuals if k.startswith("nilpotent")}
        return (
            all(v <= cfg.eq_tol for k, v in self.residuals.items() if k not in nil)
            and all(self.residuals[k] <= cfg.nil_tol for k in nil)
            and all(self.checks.values())
        )

    def dims(self, cfg: ToleranceConfig = DEFAULT_TOL):
        return tuple(rank(e, cfg.subspace(), 1.0) for e in (self.e1, self.e2, self.e3))

    def to_dict(self) -> dict:
        return {
            "e1": matrix_to_obj(self.e1),
            "e2": matrix_to_obj(self.e2),
            "e3": matrix_to_obj(self.e3),
            "blocksA": [[matrix_to_obj(m) for m in row] for row in self.blocks_a],
            "blocksB": [[matrix_to_obj(m) for m in row] for row in self.blocks_b],
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "checks": {k: bool(v) for k, v in self.checks.items()},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _grid(m, es):
    return [[ei @ m @ ej for ej in es] for ei in es]


def certify(a, b, e1, e2, cfg: ToleranceConfig = DEFAULT_TOL) -> OrderCertificate:
    n = a.shape[0]
    e3 = identity(n) - e1 - e2
    es = (e1, e2, e3)
    ga, gb = _grid(a, es), _grid(b, es)
    zero = np.zeros((n, n), dtype=np.complex128)
    res = {}
    for i, e in enumerate(es, 1):
        res[f"e{i} projection"] = is_projection(e, cfg)[1]
    res["e1e2=0"] = residual(e1 @ e2, zero)
    res["e2e1=0"] = residual(e2 @ e1, zero)
    res["e1e3=0"] = residual(e1 @ e3, zero)
    res["e2e3=0"] = residual(e2 @ e3, zero)
    for i, j in ((1, 0), (2, 0)):
        res[f"a[{i + 1},{j + 1}]=0"] = residual(ga[i][j], zero)
    for i, j in ((1, 0), (2, 0), (2, 1)):
        res[f"b[{i + 1},{j + 1}]=0"] = residual(gb[i][j], zero)
    for j in range(3):
        res[f"a[1,{j + 1}]=b[1,{j + 1}]"] = residual(ga[0][j], gb[0][j])
    f = e2 + e3
    res["nilpotent (e2+e3)a(e2+e3)"] = is_nilpotent(f @ a @ f, cfg)[1]
    res["nilpotent e3 b e3"] = is_nilpotent(e3 @ b @ e3, cfg)[1]
    sub = cfg.subspace()
    na, nb = np.linalg.norm(a, 2), np.linalg.norm(b, 2)
    checks = {
        "t1 invertible in e1 A e1": rank(e1 @ a @ e1, sub, na) == rank(e1, sub, 1.0),
        "t3 invertible in e2 A e2": rank(e2 @ b @ e2, sub, nb) == rank(e2, sub, 1.0),
    }
    return OrderCertificate(e1, e2, e3, ga, gb, res, checks)


def thm44_decompose(a, b, cfg: ToleranceConfig = DEFAULT_TOL) -> OrderCertificate:
    """Build e1 = a a^cEP, e2 = c c^cEP for the corner c, and the 3x3 block grids."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    n = require_square(a)
    holds, ores = order_holds(a, b, cfg)
    if not holds:
        raise OrderViolation(f"a is not below b in the core-EP order (residuals {ores})")
    e1 = a @ _ce(a, cfg)
    pc = identity(n) - e1
    c = pc @ b @ pc
    e2 = c @ _ce(c, cfg, np.linalg.norm(b, 2))
    cert = certify(a, b, e1, e2, cfg)
    if not cert.ok(cfg):
        raise NumericalFailure("order certificate invariants violated", cert.residuals)
    return cert


def _invertible_upper(m, rng):
    if m == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    diag = (0.5 + 0.5 * rng.random(m)) * np.exp(2j * np.pi * rng.random(m))
    off = np.triu(rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m)), 1)
    return np.diag(diag) + off * (0.5 / m)


def _strict_upper(m, rng):
    off = np.triu(rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m)), 1)
    return off * (0.5 / max(m, 1))


def thm44_assemble(e1dim: int, e2dim: int, e3dim: int, seed, cfg: ToleranceConfig = DEFAULT_TOL,
                   return_parts: bool = False):
    """Random pair a <= b in the three-block canonical form, conjugated by a Haar unitary.

    a = [[T1, S1, S2], [0, N], ...] with the lower-right (e2+e3) block strictly upper
    triangular, b = [[T1, S1, S2], [0, T3, T4], [0, 0, T5]] with T1, T3 invertible
    upper triangular and T5 strictly upper triangular.
    """
    dims = (e1dim, e2dim, e3dim)
    if min(dims) < 0 or sum(dims) < 1:
        raise ValueError("block dimensions must be >= 0 with a positive total")
    rng = rng_for(seed)
    n = sum(dims)
    r1, r2 = e1dim, e1dim + e2dim
    a0 = np.zeros((n, n), dtype=np.complex128)
    b0 = np.zeros((n, n), dtype=np.complex128)
    t1 = _invertible_upper(e1dim, rng)
    s = rng.standard_normal((e1dim, n - r1)) + 1j * rng.standard_normal((e1dim, n - r1))
    if s.size:
        s *= 0.5 / max(1.0, np.linalg.norm(s, 2))
    for m in (a0, b0):
        m[:r1, :r1] = t1
        m[:r1, r1:] = s
    a0[r1:, r1:] = _strict_upper(n - r1, rng)
    b0[r1:r2, r1:r2] = _invertible_upper(e2dim, rng)
    t4 = rng.standard_normal((e2dim, e3dim)) + 1j * rng.standard_normal((e2dim, e3dim))
    b0[r1:r2, r2:] = 0.5 * t4 / max(1.0, np.linalg.norm(t4, 2)) if t4.size else t4
    b0[r2:, r2:] = _strict_upper(e3dim, rng)
    scale = max(1.0, np.linalg.norm(a0, 2), np.linalg.norm(b0, 2))
    a0 /= scale
    b0 /= scale
    u = haar_unitary(n, rng)
    uh = u.conj().T
    a, b = u @ a0 @ uh, u @ b0 @ uh
    holds, res = order_holds(a, b, cfg)
    if not holds:
        raise NumericalFailure("assembled pair fails the order check", res)
    if not return_parts:
        return a, b
    proj = []
    for lo, hi in ((0, r1), (r1, r2), (r2, n)):
        p = np.zeros((n, n), dtype=np.complex128)
        p[lo:hi, lo:hi] = np.eye(hi - lo)
        proj.append(u @ p @ uh)
    return a, b, {"e1": proj[0], "e2": proj[1], "e3": proj[2], "dims": dims}
