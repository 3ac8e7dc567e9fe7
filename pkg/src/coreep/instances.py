"""Seeded generators for matrices and pairs that satisfy each law's hypotheses.

All generators are deterministic functions of their arguments and seed
(``numpy.random.default_rng``), and scale their outputs to spectral norm <= 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentSpec
from .gen_inverses import drazin, index as matrix_index
from .matcore import DEFAULT_TOL, identity, mat_pow, matrix_from_obj, matrix_to_obj, rank

BLOCK_MODES = ("NilpotentD", "RangeB", "NullspaceSolve")


@dataclass(frozen=True)
class GenSpec:
    """Request for a matrix A = S blockdiag(C, N) S^-1.

    ``rank`` is the size of the invertible core C (so rank(A^k) = rank for
    k >= index); ``index`` is the nilpotency index of N (0 when rank == dim).
    """

    dim: int
    rank: int
    index: int
    seed: int = 0
    condition_cap: float = 4.0

    def validate(self):
        if self.dim < 1:
            raise InconsistentSpec("dim must be positive")
        if not 0 <= self.rank <= self.dim:
            raise InconsistentSpec("rank must lie in 0..dim")
        if self.condition_cap < 1:
            raise InconsistentSpec("condition_cap must be >= 1")
        nil = self.dim - self.rank
        if nil == 0:
            if self.index != 0:
                raise InconsistentSpec("a full-rank core forces index 0")
        elif not 1 <= self.index <= nil:
            raise InconsistentSpec(f"index must lie in 1..{nil} for a nilpotent block of size {nil}")


def rng_for(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _unit_phase(rng, size=None):
    return np.exp(2j * np.pi * rng.random(size))


def _normalize(*mats):
    """Scale all matrices by one common factor so the largest spectral norm is <= 1."""
    s = max(np.linalg.norm(m, 2) for m in mats)
    if s > 1.0:
        return tuple(m / s for m in mats)
    return mats


def _core_block(r, cap, rng):
    # upper triangular, eigenvalue moduli in [cap^-0.8, 1]
    if r == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    lo = cap ** -0.8
    mods = lo + (1 - lo) * rng.random(r)
    mods[rng.integers(r)] = 1.0
    t = np.diag(mods * _unit_phase(rng, r))
    off = np.triu(rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r)), 1)
    scale = 0.5 / max(1, r)
    while True:
        c = t + scale * off
        if np.linalg.cond(c) <= cap or scale < 1e-6:
            return c
        scale /= 2


def _nilpotent_block(m, k, rng):
    """Strictly upper triangular m x m with nilpotency index exactly k."""
    n = np.zeros((m, m), dtype=np.complex128)
    if m == 0 or k <= 1:
        return n
    sizes = [k]
    left = m - k
    while left > 0:
        s = int(rng.integers(1, min(k, left) + 1))
        sizes.append(s)
        left -= s
    rng.shuffle(sizes)
    start = 0
    for s in sizes:
        for i in range(start, start + s - 1):
            n[i, i + 1] = (0.5 + 0.5 * rng.random()) * _unit_phase(rng)
        for i in range(start, start + s):
            for j in range(i + 2, start + s):
                n[i, j] = 0.3 * (rng.standard_normal() + 1j * rng.standard_normal())
        start += s
    return n


def gen_with_index(spec: GenSpec) -> np.ndarray:
    """Random A with an invertible core of size ``rank`` and prescribed index."""
    spec.validate()
    rng = rng_for(spec.seed)
    n, r = spec.dim, spec.rank
    m = n - r
    c = _core_block(r, spec.condition_cap, rng)
    nil = _nilpotent_block(m, spec.index, rng)
    # S = U [[I, Y], [0, I]]: unitary times a bounded shear, cond(S) <= (1 + 0.5)^2
    y = rng.standard_normal((r, m)) + 1j * rng.standard_normal((r, m))
    if y.size:
        y *= 0.5 / np.linalg.norm(y, 2)
    u = haar_unitary(n, rng)
    upper = np.zeros((n, n), dtype=np.complex128)
    upper[:r, :r] = c
    upper[r:, r:] = nil
    upper[:r, r:] = c @ y - y @ nil
    (a,) = _normalize(u @ upper @ u.conj().T)
    return a


@dataclass(frozen=True)
class CommutationPair:
    """Pair (a, b) with scalar weights for the reverse-order laws.

    Commuting form: ab = lam ba, a*b = mu ba*.
    Square form: bab = lam ab^2 = mu b^2 a, ba*b = lam2 a*b^2 = mu2 b^2 a*.
    """

    a: np.ndarray
    b: np.ndarray
    lam: complex
    mu: complex
    lam2: complex | None = None
    mu2: complex | None = None
    regime: str = ""

    def __post_init__(self):
        if self.lam == 0 or self.mu == 0:
            raise ValueError("lambda and mu must be nonzero")
        if self.a.shape != self.b.shape or self.a.shape[0] != self.a.shape[1]:
            raise ValueError("a and b must be square of equal size")


def _up_shift(n, cyclic):
    s = np.zeros((n, n), dtype=np.complex128)
    for i in range(n - 1):
        s[i, i + 1] = 1.0
    if cyclic and n > 0:
        s[n - 1, 0] = 1.0
    return s


def _blockdiag(*blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=np.complex128)
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def gen_lambda_pair(n: int, root_order: int, seed, singular_direct_summand: bool = False,
                    *, mix: bool = True, lam: complex | None = None) -> CommutationPair:
    """a = diag(d, d/lam, ..., d/lam^(n-1)), b = cyclic shift; ab = lam ba, a*b = conj(lam) ba*.

    ``lam`` defaults to a random primitive ``root_order``-th root of unity.  Passing
    a ``lam`` that is not an n-th root of unity switches to the nilpotent regime,
    where b is the non-cyclic shift (so b is nilpotent).
    With ``singular_direct_summand`` two 2x2 summands are appended: (shift, geometric
    diagonal) and (geometric diagonal, shift), making both a and b singular.
    ``mix`` conjugates everything by one Haar unitary.
    """
    if n < 1 or root_order < 1 or n % root_order:
        raise InconsistentSpec(f"root order {root_order} must divide n = {n}")
    rng = rng_for(seed)
    if lam is None:
        choices = [j for j in range(root_order) if np.gcd(j, root_order) == 1] or [0]
        lam = np.exp(2j * np.pi * int(rng.choice(choices)) / root_order)
    lam = complex(lam)
    cyclic = np.isclose(lam ** n, 1.0, rtol=0, atol=1e-12)
    regime = "root-of-unity" if cyclic else "nilpotent-b"
    mu = lam.conjugate()

    d = (0.5 + 0.5 * rng.random()) * _unit_phase(rng)
    a = np.diag(d * lam ** -np.arange(n))
    b = _up_shift(n, cyclic)
    if singular_direct_summand:
        if not cyclic or not np.isclose(abs(lam), 1.0):
            raise InconsistentSpec("singular summands need |lambda| = 1")
        c = (0.5 + 0.5 * rng.random()) * _unit_phase(rng)
        e = (0.5 + 0.5 * rng.random()) * _unit_phase(rng)
        alpha, beta = 0.5 + 0.5 * rng.random(2)
        # (alpha N, diag(c lam^i)) and (diag(e lam^-i), beta N) both satisfy the relations
        a = _blockdiag(a, alpha * _up_shift(2, False), np.diag(e * lam ** -np.arange(2)))
        b = _blockdiag(b, np.diag(c * lam ** np.arange(2)), beta * _up_shift(2, False))
        regime += "+singular"
    if mix:
        u = haar_unitary(a.shape[0], rng)
        a = u @ a @ u.conj().T
        b = u @ b @ u.conj().T
    a, = _normalize(a)
    b, = _normalize(b)
    return CommutationPair(a, b, lam, mu, regime=regime)


def gen_thm35_pair(n: int, seed, *, mix: bool = True) -> CommutationPair:
    """a = diag(d lam^i) with lam = exp(2 pi i / n), b = cyclic up-shift.

    Entrywise (bab)_{i,i+2} = d_{i+1}, (ab^2)_{i,i+2} = d_i, (b^2 a)_{i,i+2} = d_{i+2},
    so bab = lam ab^2 = mu b^2 a with mu = 1/lam; the conjugate relations hold with
    lam2 = conj(lam) and mu2 = 1/conj(lam).
    """
    if n < 1:
        raise InconsistentSpec("n must be positive")
    rng = rng_for(seed)
    lam = complex(np.exp(2j * np.pi / n))
    d = (0.5 + 0.5 * rng.random()) * _unit_phase(rng)
    a = np.diag(d * lam ** np.arange(n))
    b = _up_shift(n, True)
    if mix:
        u = haar_unitary(n, rng)
        a = u @ a @ u.conj().T
        b = u @ b @ u.conj().T
    a, = _normalize(a)
    return CommutationPair(a, b, lam, 1 / lam, lam.conjugate(), 1 / lam.conjugate(), regime="root-of-unity")


def thm36_constraint_terms(a, b, d, upto=None, cfg=DEFAULT_TOL):
    """Terms A^i A^pi B (D^D)^(i+2) for i = 0..upto (default i(A))."""
    dz_a = drazin(a, cfg)
    dd = drazin(d, cfg).dinv
    top = dz_a.index if upto is None else upto
    terms = []
    ai = identity(a.shape[0])
    for i in range(top + 1):
        terms.append(ai @ dz_a.spectral_idempotent @ b @ mat_pow(dd, i + 2))
        ai = ai @ a
    return terms


def _random_index_spec(dim, rng, singular=None):
    if singular is True:
        r = int(rng.integers(0, dim))
    elif singular is False:
        r = dim
    else:
        r = int(rng.integers(0, dim + 1))
    k = 0 if r == dim else int(rng.integers(1, dim - r + 1))
    return GenSpec(dim, r, k, int(rng.integers(2**63)))


def gen_block_triple(r: int, s: int, mode: str, seed):
    """(A, B, D) whose block-formula constraint sum vanishes.

    Returns ``(A, B, D, note)``; ``note`` is empty unless the null space was trivial.
    """
    if r < 1 or s < 1:
        raise InconsistentSpec("block sizes must be positive")
    if mode not in BLOCK_MODES:
        raise ValueError(f"mode must be one of {BLOCK_MODES}")
    rng = rng_for(seed)
    note = ""
    if mode == "NilpotentD":
        a = gen_with_index(_random_index_spec(r, rng))
        d = gen_with_index(GenSpec(s, 0, int(rng.integers(1, s + 1)), int(rng.integers(2**63))))
        bm = rng.standard_normal((r, s)) + 1j * rng.standard_normal((r, s))
    elif mode == "RangeB":
        a = gen_with_index(_random_index_spec(r, rng))
        d = gen_with_index(_random_index_spec(s, rng))
        k = matrix_index(a)
        bm = mat_pow(a, k) @ (rng.standard_normal((r, s)) + 1j * rng.standard_normal((r, s)))
    else:
        a = gen_with_index(_random_index_spec(r, rng, singular=True if r > 1 else None))
        d = gen_with_index(_random_index_spec(s, rng, singular=False if s == 1 else None))
        dz_a = drazin(a)
        dd = drazin(d).dinv
        # vec(X B Y) = (Y^T kron X) vec(B), column-major
        op = np.zeros((r * s, r * s), dtype=np.complex128)
        ai = identity(r)
        for i in range(dz_a.index + 1):
            op += np.kron(mat_pow(dd, i + 2).T, ai @ dz_a.spectral_idempotent)
            ai = ai @ a
        _, sv, vh = np.linalg.svd(op)
        tol = max(sv[0], 1.0) * 1e-12 if sv.size else 0.0
        null = vh[np.count_nonzero(sv > tol):].conj().T
        if null.shape[1] == 0:
            bm = np.zeros((r, s), dtype=np.complex128)
            note = "constraint map has trivial null space; B = 0"
        else:
            coef = rng.standard_normal(null.shape[1]) + 1j * rng.standard_normal(null.shape[1])
            bm = (null @ coef).reshape((r, s), order="F")
    nb = np.linalg.norm(bm, 2)
    if nb > 0:
        bm = bm / nb
    return a, bm, d, note


def gen_order_pair(dims, seed, cfg=DEFAULT_TOL):
    """Pair (a, b) with a below b in the core-EP order; see order.thm44_assemble."""
    from .order import thm44_assemble

    e1, e2, e3 = dims
    return thm44_assemble(e1, e2, e3, seed, cfg)


def random_corpus(count: int, seed, dims=(2, 6)):
    """``count`` GenSpec-driven matrices with dims in the inclusive range ``dims``."""
    rng = rng_for(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(dims[0], dims[1] + 1))
        out.append(gen_with_index(_random_index_spec(n, rng)))
    return out


# --- instance bundle JSON ----------------------------------------------------

def bundle_to_obj(kind: str, seed, matrices: dict, scalars: dict | None = None) -> dict:
    return {
        "kind": kind,
        "seed": seed,
        "matrices": {k: matrix_to_obj(v) for k, v in matrices.items()},
        "scalars": {k: [float(complex(v).real), float(complex(v).imag)] for k, v in (scalars or {}).items()},
    }


def bundle_from_obj(obj: dict):
    mats = {k: matrix_from_obj(v) for k, v in obj.get("matrices", {}).items()}
    scal = {k: complex(v[0], v[1]) for k, v in obj.get("scalars", {}).items()}
    return obj["kind"], obj.get("seed"), mats, scal


def dumps_bundle(kind, seed, matrices, scalars=None) -> str:
    return json.dumps(bundle_to_obj(kind, seed, matrices, scalars))

