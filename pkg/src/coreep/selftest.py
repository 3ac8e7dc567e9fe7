"""Batch property suite: every law verifier over seeded generated instances.

Each suite draws its instances from its own child seed, so adding or
reordering suites never changes the instances another suite sees.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CoreEPError
from .gen_inverses import bc_inverse, core_ep, drazin
from .instances import (
    BLOCK_MODES,
    gen_block_triple,
    gen_lambda_pair,
    gen_thm35_pair,
    gen_with_index,
    _random_index_spec,
    rng_for,
)
from .laws import (
    COR22_MAX_DIM,
    verify_cor22,
    verify_lemma32,
    verify_lemma34,
    verify_thm21,
    verify_thm23,
    verify_thm33,
    verify_thm35,
    verify_thm36,
)
from .matcore import DEFAULT_TOL, ToleranceConfig, ct, residual
from .order import lemma42_check, lemma43_corner, thm44_assemble, thm44_decompose

CORE_EP_IDENTITIES = ("x=ax^2", "(ax)*=ax", "a^k=xa^(k+1)")


@dataclass
class SuiteResult:
    law: str
    passes: int = 0
    failures: int = 0
    max_residual: float = 0.0
    failed_cases: list = field(default_factory=list)

    def record(self, case, ok, res):
        if ok:
            self.passes += 1
        else:
            self.failures += 1
            self.failed_cases.append(case)
        if res is not None and np.isfinite(res):
            self.max_residual = max(self.max_residual, float(res))

    def to_dict(self):
        return {"law": self.law, "passes": self.passes, "failures": self.failures,
                "maxResidual": self.max_residual}


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _split(n, parts, rng):
    cuts = np.sort(rng.integers(0, n + 1, size=parts - 1))
    edges = np.concatenate([[0], cuts, [n]])
    return tuple(int(x) for x in np.diff(edges))


# --- per-instance checks: each returns (passed, residual) --------------------

def check_routes(a, cfg):
    res = core_ep(a, "ALL", cfg)
    worst = max(res.max_route_residual, *(res.residuals[k] for k in CORE_EP_IDENTITIES))
    return worst <= cfg.eq_tol, worst


def check_bc(a, cfg):
    aad = a @ drazin(a, cfg).dinv
    r = residual(core_ep(a, "R1", cfg).ceinv, bc_inverse(a, aad, ct(aad), cfg))
    return r <= cfg.eq_tol, r


def check_report(rep):
    return rep.passed, rep.max_residual


def check_thm21(a, cfg):
    return check_report(verify_thm21(a, core_ep(a, "R1", cfg).ceinv, cfg))


def check_lem34(a, cfg, powers=(1, 2, 3, 4)):
    reps = [verify_lemma34(a, k, cfg) for k in powers]
    return all(r.passed for r in reps), max(r.max_residual for r in reps)


def check_roundtrip(dims, seed, cfg):
    a, b, parts = thm44_assemble(*dims, seed, cfg, return_parts=True)
    cert = thm44_decompose(a, b, cfg)
    worst = max(cert.residuals.values())
    return cert.ok(cfg) and cert.dims(cfg) == tuple(dims), worst


def unordered_pair(n, seed, cfg):
    """A pair that is generically not ordered: b = a + a random rank-one bump."""
    rng = rng_for(seed)
    a = gen_with_index(_random_index_spec(n, rng))
    u = rng.standard_normal((n, 1)) + 1j * rng.standard_normal((n, 1))
    v = rng.standard_normal((1, n)) + 1j * rng.standard_normal((1, n))
    return a, a + 0.5 * (u @ v) / (np.linalg.norm(u) * np.linalg.norm(v))


# --- suite driver -------------------------------------------------------------

def _run(suite: SuiteResult, cases, fn):
    for case in cases:
        try:
            ok, res = fn(case)
        except CoreEPError:
            ok, res = False, None
        suite.record(case[0] if isinstance(case, tuple) else case, ok, res)
    return suite


def run_selftest(n_instances: int, dims=(2, 4), seed=0, cfg: ToleranceConfig = DEFAULT_TOL):
    """Run every suite on ``n_instances`` instances each; returns a list of SuiteResult."""
    if n_instances < 1:
        raise ValueError("n_instances must be >= 1")
    lo, hi = dims
    if not 1 <= lo <= hi:
        raise ValueError("dims must satisfy 1 <= lo <= hi")
    children = np.random.SeedSequence(seed).spawn(16)
    child = iter(children)

    def draws():
        rng = np.random.default_rng(next(child))
        return rng, [int(s) for s in rng.integers(2**63, size=n_instances)]

    suites = []

    rng, seeds = draws()
    corpus = []
    for i, s in enumerate(seeds):
        sub = rng_for(s)
        corpus.append((i, gen_with_index(_random_index_spec(int(sub.integers(lo, hi + 1)), sub))))

    suites.append(_run(SuiteResult("route-agreement"), corpus, lambda c: check_routes(c[1], cfg)))
    suites.append(_run(SuiteResult("lem3.1"), corpus, lambda c: check_bc(c[1], cfg)))
    suites.append(_run(SuiteResult("thm2.1"), corpus, lambda c: check_thm21(c[1], cfg)))
    small = [c for c in corpus if c[1].shape[0] <= min(COR22_MAX_DIM, 6)]
    suites.append(_run(SuiteResult("cor2.2"), small, lambda c: check_report(verify_cor22(c[1], cfg))))
    suites.append(_run(SuiteResult("thm2.3"), corpus, lambda c: check_report(verify_thm23(c[1], cfg))))
    suites.append(_run(SuiteResult("lem3.4"), corpus, lambda c: check_lem34(c[1], cfg)))

    rng, seeds = draws()
    pairs = []
    for i, s in enumerate(seeds):
        n = int(rng.integers(lo, hi + 1))
        root = int(rng.choice(_divisors(n)))
        pairs.append((i, gen_lambda_pair(n, root, s, singular_direct_summand=bool(rng.integers(2)))))
    suites.append(_run(SuiteResult("lem3.2"), pairs, lambda c: check_report(verify_lemma32(c[1], c[1].b, cfg))))
    suites.append(_run(SuiteResult("thm3.3"), pairs, lambda c: check_report(verify_thm33(c[1], cfg))))

    rng, seeds = draws()
    pairs35 = [(i, gen_thm35_pair(int(rng.integers(lo, hi + 1)), s)) for i, s in enumerate(seeds)]
    suites.append(_run(SuiteResult("thm3.5"), pairs35, lambda c: check_report(verify_thm35(c[1], cfg))))

    rng, seeds = draws()
    triples = []
    for i, s in enumerate(seeds):
        r = int(rng.integers(1, max(1, hi - 1) + 1))
        t = int(rng.integers(1, max(1, hi - r) + 1))
        triples.append((i, gen_block_triple(r, t, BLOCK_MODES[i % len(BLOCK_MODES)], s)))
    suites.append(_run(SuiteResult("thm3.6"), triples, lambda c: check_report(verify_thm36(*c[1][:3], cfg))))

    rng, seeds = draws()
    shapes = [(i, _split(int(rng.integers(lo, hi + 1)), 3, rng), s) for i, s in enumerate(seeds)]
    suites.append(_run(SuiteResult("thm4.4"), shapes, lambda c: check_roundtrip(c[1], c[2], cfg)))

    def ordered(c):
        a, b = thm44_assemble(*c[1], c[2], cfg)
        return a, b

    mixed = []
    for i, dims_, s in shapes:
        mixed.append((i, ordered((i, dims_, s)) if i % 2 == 0 else unordered_pair(sum(dims_), s, cfg)))
    suites.append(_run(SuiteResult("lem4.2"), mixed, lambda c: check_report(lemma42_check(*c[1], cfg))))
    suites.append(_run(SuiteResult("lem4.3"), shapes,
                       lambda c: check_report(lemma43_corner(*ordered(c), cfg))))
    return suites


def summary(suites, seed, cfg: ToleranceConfig = DEFAULT_TOL) -> dict:
    return {
        "suites": [s.to_dict() for s in suites],
        "seed": seed,
        "tolerances": cfg.to_dict(),
    }
