"""Instance-level verifiers for the annihilator characterizations, the
reverse-order laws and the block upper-triangular core-EP formula.

Every verifier checks its hypotheses first and then the conclusion; when the
hypotheses fail the report is still produced but marked vacuous.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .gen_inverses import core_ep, core_inverse, drazin
from .instances import CommutationPair
from .matcore import (
    DEFAULT_TOL,
    ToleranceConfig,
    ct,
    identity,
    is_projection,
    mat_pow,
    power_scale,
    range_basis,
    range_contains,
    range_equal,
    range_projector,
    rank,
    require_square,
    residual,
)

COR22_MAX_DIM = 8


@dataclass
class VerificationReport:
    """Outcome of one law on one instance.

    ``residuals`` are the quantities whose smallness the conclusion asserts;
    ``diagnostics`` are informative numbers that do not decide the outcome.
    """

    law_id: str
    hypothesis_satisfied: bool
    conclusion_holds: bool
    residuals: dict = field(default_factory=dict)
    tolerance: float = DEFAULT_TOL.eq_tol
    notes: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def vacuous(self) -> bool:
        return not self.hypothesis_satisfied

    @property
    def passed(self) -> bool:
        return self.hypothesis_satisfied and self.conclusion_holds

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def to_dict(self) -> dict:
        return {
            "lawId": self.law_id,
            "hypothesisSatisfied": bool(self.hypothesis_satisfied),
            "conclusionHolds": bool(self.conclusion_holds),
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "tolerance": float(self.tolerance),
            "notes": list(self.notes),
            "diagnostics": {k: float(v) for k, v in self.diagnostics.items()},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _report(law_id, hyp, residuals, cfg, notes=None, diagnostics=None, extra_ok=True):
    concl = extra_ok and all(v <= cfg.eq_tol for v in residuals.values())
    notes = list(notes or [])
    if not hyp:
        notes.append("vacuous: hypothesis not satisfied")
    return VerificationReport(law_id, bool(hyp), bool(concl), dict(residuals), cfg.eq_tol, notes, dict(diagnostics or {}))


# --- annihilators and projectors -------------------------------------------

def verify_thm21(a, x, cfg: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """Equivalent descriptions of X = core-EP inverse of A.

    (i)   X equals the computed core-EP inverse;
    (ii)  XAX = X, (AX)* = AX, (XA - I)A^D = 0, range(X) inside range(A^D);
    (iii) XAX = X, l(X) = l(X*) = l(A^D);
    (iv)  XAX = X, l(X) and l(X*) inside l(A^D), l(A^D) inside l(X).
    The law holds when all four agree.
    """
    a = np.asarray(a, dtype=np.complex128)
    x = np.asarray(x, dtype=np.complex128)
    n = require_square(a)
    dz = drazin(a, cfg)
    ad = dz.dinv
    tol = cfg.eq_tol
    diag = {
        "x-coreEP": residual(x, core_ep(a, "R1", cfg, dz=dz).ceinv),
        "xax=x": residual(x @ a @ x, x),
        "(ax)*=ax": residual(ct(a @ x), a @ x),
        "(xa-1)a^d=0": residual((x @ a - identity(n)) @ ad, 0 * ad),
    }
    in_range = range_contains(ad, x, cfg)
    rng_x = range_equal(x, ad, cfg)
    rng_xs = range_equal(ct(x), ad, cfg)
    conds = {
        "i": diag["x-coreEP"] <= tol,
        "ii": diag["xax=x"] <= tol and diag["(ax)*=ax"] <= tol and diag["(xa-1)a^d=0"] <= tol and in_range,
        "iii": diag["xax=x"] <= tol and rng_x and rng_xs,
        "iv": diag["xax=x"] <= tol and range_contains(x, ad, cfg) and range_contains(ct(x), ad, cfg) and in_range,
    }
    agree = len(set(conds.values())) == 1
    notes = [f"condition ({k}) {'holds' if v else 'fails'}" for k, v in conds.items()]
    if not agree:
        notes.append("conditions disagree")
    return VerificationReport("thm2.1", True, agree, {}, tol, notes, diag)


def _vec_left(m):
    # Y -> m Y on column-major vec
    return np.kron(identity(m.shape[0]), m)


def _vec_right(m):
    # Y -> Y m on column-major vec
    return np.kron(m.T, identity(m.shape[0]))


def _null_basis(op, cfg):
    _, s, vh = np.linalg.svd(op)
    if s.size == 0 or s[0] == 0:
        return identity(op.shape[1])
    r = int(np.count_nonzero(s > cfg.rank_tol * s[0]))
    return vh[r:].conj().T


def verify_cor22(a, cfg: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """M_n = A^D M_n (+) l(A^D) = (A^D)* M_n (+) l(A^D), and the right-handed analogue."""
    a = np.asarray(a, dtype=np.complex128)
    n = require_square(a)
    if n > COR22_MAX_DIM:
        raise ValueError(f"verify_cor22 is limited to n <= {COR22_MAX_DIM} (got {n})")
    ad = drazin(a, cfg).dinv
    sub = cfg.subspace()
    left_null = _null_basis(_vec_right(ad), sub)  # X A^D = 0
    right_null = _null_basis(_vec_left(ad), sub)  # A^D X = 0
    left_ideals = {
        "a^d A": range_basis(_vec_left(ad), sub),
        "(a^d)* A": range_basis(_vec_left(ct(ad)), sub),
        "A a^d": range_basis(_vec_right(ad), sub),
        "A (a^d)*": range_basis(_vec_right(ct(ad)), sub),
    }
    pairs = {
        "a^d A + l(a^d)": ("a^d A", left_null),
        "(a^d)* A + l(a^d)": ("(a^d)* A", left_null),
        "A a^d + r(a^d)": ("A a^d", right_null),
        "A (a^d)* + r(a^d)": ("A (a^d)*", right_null),
    }
    # the same ideals paired with the annihilator on the matching side
    swapped = {
        "a^d A + r(a^d)": ("a^d A", right_null),
        "(a^d)* A + r(a^d)": ("(a^d)* A", right_null),
        "A a^d + l(a^d)": ("A a^d", left_null),
        "A (a^d)* + l(a^d)": ("A (a^d)*", left_null),
    }

    def direct_sum(u, v):
        stacked = np.hstack([u, v])
        full = rank(stacked, sub) == n * n
        sv = np.linalg.svd(stacked, compute_uv=False)
        return full and u.shape[1] + v.shape[1] == n * n, float(sv[-1])

    ok = True
    notes, diag = [], {}
    for name, (ideal, v) in pairs.items():
        u = left_ideals[ideal]
        good, smin = direct_sum(u, v)
        diag[f"sigma_min[{name}]"] = smin
        notes.append(f"{name}: dims {u.shape[1]} + {v.shape[1]} of {n * n}, "
                     f"{'direct' if good else 'not direct'}")
        ok = ok and good
    swapped_ok = True
    for name, (ideal, v) in swapped.items():
        good, smin = direct_sum(left_ideals[ideal], v)
        diag[f"sigma_min[{name}]"] = smin
        swapped_ok = swapped_ok and good
    notes.append(f"matching-side pairing {'holds' if swapped_ok else 'fails'}")
    diag["matching-side pairing holds"] = float(swapped_ok)
    return VerificationReport("cor2.2", True, ok, {}, cfg.eq_tol, notes, diag)


def verify_thm23(a, cfg: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """The projector q onto range(A^D) gives the core-EP inverse A^D q and is unique."""
    a = np.asarray(a, dtype=np.complex128)
    dz = drazin(a, cfg)
    ad = dz.dinv
    q = range_projector(ad, cfg.subspace())
    q_other = ad @ core_inverse(ad, cfg.subspace())
    res = {
        "q=q^2=q*": is_projection(q, cfg)[1],
        "coreEP=a^d q": residual(core_ep(a, "R1", cfg, dz=dz).ceinv, ad @ q),
        "q unique": residual(q, q_other),
    }
    same = range_equal(ad, q, cfg)
    notes = [] if same else ["range(q) != range(a^d)"]
    return _report("thm2.3", True, res, cfg, notes, extra_ok=same)


# --- reverse-order laws ---------------------------------------------------

def _nrm(m):
    return float(np.linalg.norm(m, 2))


def _ce(m, cfg, route="R1", scale=0.0):
    return core_ep(m, route, cfg, scale=scale).ceinv


def verify_lemma32(pair: CommutationPair, x, cfg: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """If aX = lam Xa and a*X = mu Xa*, then a^cEP X = lam^-1 X a^cEP."""
    a = pair.a
    x = np.asarray(x, dtype=np.complex128)
    lam, mu = pair.lam, pair.mu
    hyp = {
        "ax=lam xa": residual(a @ x, lam * x @ a),
        "a*x=mu xa*": residual(ct(a) @ x, mu * x @ ct(a)),
    }
    ae = _ce(a, cfg)
    res = {"a^cEP x=lam^-1 x a^cEP": residual(ae @ x, x @ ae / lam)}
    return _report("lem3.2", all(v <= cfg.eq_tol for v in hyp.values()), res, cfg, diagnostics=hyp)


def verify_thm33(pair: CommutationPair, cfg: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """If ab = lam ba and a*b = mu ba*, then (ab)^cEP = b^cEP a^cEP = lam^-1 a^cEP b^cEP."""
    a, b, lam, mu = pair.a, pair.b, pair.lam, pair.mu
    hyp = {
        "ab=lam ba": residual(a @ b, lam * b @ a),
        "a*b=mu ba*": residual(ct(a) @ b, mu * b @ ct(a)),
    }
    abe = core_ep(a @ b, "ALL", cfg, scale=_nrm(a) * _nrm(b)).ceinv
    ae, be = _ce(a, cfg), _ce(b, cfg)
    res = {
        "(ab)^cEP=b^cEP a^cEP": residual(abe, be @ ae),
        "(ab)^cEP=lam^-1 a^cEP b^cEP": residual(abe, ae @ be / lam),
    }
    return _report("thm3.3", all(v <= cfg.eq_tol for v in hyp.values()), res, cfg, diagnostics=hyp)


def verify_lemma34(a, k: int, cfg: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """(A^k)^cEP = (A^cEP)^k and A^cEP = A^(k-1) (A^k)^cEP."""
    if k < 1:
        raise ValueError("k must be positive")
    a = np.asarray(a, dtype=np.complex128)
    ae = _ce(a, cfg)
    ake = _ce(mat_pow(a, k), cfg, scale=_nrm(a) ** k)
    res = {
        "(a^k)^cEP=(a^cEP)^k": residual(ake, mat_pow(ae, k)),
        "a^cEP=a^(k-1)(a^k)^cEP": residual(ae, mat_pow(a, k - 1) @ ake),
    }
    return _report("lem3.4", True, res, cfg)


def verify_thm35(pair: CommutationPair, cfg: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """If bab = lam ab^2 = mu b^2a and ba*b = lam' a*b^2 = mu' b^2a*, then (ab)^cEP = mu^-1 b^cEP a^cEP.

    The unweighted product b^cEP a^cEP is reported as a diagnostic.
    """
    if pair.lam2 is None or pair.mu2 is None:
        raise ValueError("verify_thm35 needs lam2 and mu2")
    a, b = pair.a, pair.b
    lam, mu, lam2, mu2 = pair.lam, pair.mu, pair.lam2, pair.mu2
    b2 = b @ b
    bab = b @ a @ b
    bas = b @ ct(a) @ b
    hyp = {
        "bab=lam ab^2": residual(bab, lam * a @ b2),
        "bab=mu b^2a": residual(bab, mu * b2 @ a),
        "ba*b=lam' a*b^2": residual(bas, lam2 * ct(a) @ b2),
        "ba*b=mu' b^2a*": residual(bas, mu2 * b2 @ ct(a)),
    }
    abe = core_ep(a @ b, "ALL", cfg, scale=_nrm(a) * _nrm(b)).ceinv
    prod = _ce(b, cfg) @ _ce(a, cfg)
    res = {"(ab)^cEP=mu^-1 b^cEP a^cEP": residual(abe, prod / mu)}
    diag = dict(hyp)
    diag["(ab)^cEP=b^cEP a^cEP"] = residual(abe, prod)
    notes = []
    if res["(ab)^cEP=mu^-1 b^cEP a^cEP"] > cfg.eq_tol and diag["(ab)^cEP=b^cEP a^cEP"] <= cfg.eq_tol:
        notes.append("stated weight mu^-1 fails; unweighted b^cEP a^cEP matches")
    return _report("thm3.5", all(v <= cfg.eq_tol for v in hyp.values()), res, cfg, notes, diag)


def block_constraint(a, b, d, cfg: ToleranceConfig = DEFAULT_TOL, upto=None):
    """Sum_{i=0}^{upto} A^i A^pi B (D^D)^(i+2) (upto defaults to i(A))."""
    dz_a = drazin(a, cfg)
    dd = drazin(d, cfg).dinv
    top = dz_a.index if upto is None else upto
    total = np.zeros_like(b, dtype=np.complex128)
    ai = identity(a.shape[0])
    for i in range(top + 1):
        total = total + ai @ dz_a.spectral_idempotent @ b @ mat_pow(dd, i + 2)
        ai = ai @ a
    return total


def block_z(a, b, d, cfg: ToleranceConfig = DEFAULT_TOL, reading: str = "closed"):
    """Off-diagonal block of the core-EP inverse of [[A, B], [0, D]].

    ``closed``:    A^D A^cEP B D D^cEP - (A^D)^2 B (D^D)^3 - A^D B (D^D)^4
    ``literal``:   A^D (A^D)^cEP B D D^cEP - (A^D)^2 B (D^D)^3 - A^D B (D^D)^4
    ``corrected``: A^D A^cEP B Q - (A^D)^2 B Q - A^D B D^D Q with Q = D D^cEP
    """
    ad = drazin(a, cfg).dinv
    dd = drazin(d, cfg).dinv
    ae = _ce(a, cfg)
    de = _ce(d, cfg)
    if reading == "closed":
        return ad @ ae @ b @ d @ de - ad @ ad @ b @ mat_pow(dd, 3) - ad @ b @ mat_pow(dd, 4)
    if reading == "literal":
        ade = _ce(ad, cfg.subspace())
        return ad @ ade @ b @ d @ de - ad @ ad @ b @ mat_pow(dd, 3) - ad @ b @ mat_pow(dd, 4)
    if reading == "corrected":
        qd = d @ de
        return ad @ ae @ b @ qd - ad @ ad @ b @ qd - ad @ b @ dd @ qd
    raise ValueError(f"unknown reading {reading!r}")


def assemble_block(a, b, d):
    r, s = a.shape[0], d.shape[0]
    m = np.zeros((r + s, r + s), dtype=np.complex128)
    m[:r, :r] = a
    m[:r, r:] = b
    m[r:, r:] = d
    return m


def verify_thm36(a, b, d, cfg: ToleranceConfig = DEFAULT_TOL) -> VerificationReport:
    """Core-EP inverse of the block matrix [[A, B], [0, D]] via the closed-form Z."""
    a, b, d = (np.asarray(m, dtype=np.complex128) for m in (a, b, d))
    r = require_square(a, "A")
    s = require_square(d, "D")
    if b.shape != (r, s):
        raise ValueError(f"B must be {r}x{s}")
    constraint = block_constraint(a, b, d, cfg)
    hyp_res = float(np.linalg.norm(constraint) / (1.0 + np.linalg.norm(b)))
    # terms past i(A) vanish because A^i A^pi = 0 there
    tail = block_constraint(a, b, d, cfg, upto=r + 1) - constraint
    diag = {
        "constraint": hyp_res,
        "tail beyond i(A)": float(np.linalg.norm(tail) / (1.0 + np.linalg.norm(b))),
    }
    m = assemble_block(a, b, d)
    me = core_ep(m, "ALL", cfg).ceinv
    z = block_z(a, b, d, cfg, "closed")
    expected = assemble_block(_ce(a, cfg), z, _ce(d, cfg))
    res = {
        "M^cEP=[[A^cEP,Z],[0,D^cEP]]": residual(me, expected),
        "Z": residual(me[:r, r:], z),
    }
    notes = []
    for reading in ("literal", "corrected"):
        diag[f"Z[{reading}]"] = residual(me[:r, r:], block_z(a, b, d, cfg, reading))
    notes.append(f"literal (A^D)^cEP reading residual {diag['Z[literal]']:.3e}")
    if diag["tail beyond i(A)"] > cfg.eq_tol:
        notes.append("truncation self-check failed: terms beyond i(A) are not negligible")
    return _report("thm3.6", hyp_res <= cfg.eq_tol, res, cfg, notes, diag)
