"""Exact rational reference implementation for real matrices.

Matrices are tuples of tuples of ``Fraction``.  Nothing here touches floating
point or numpy, so agreement with the package is an independent check.
"""

from __future__ import annotations

from fractions import Fraction


def M(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def shape(a):
    return len(a), len(a[0]) if a else 0


def zeros(r, c):
    return tuple(tuple(Fraction(0) for _ in range(c)) for _ in range(r))


def eye(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def T(a):
    # real matrices only, so this is also the involution
    r, c = shape(a)
    return tuple(tuple(a[i][j] for i in range(r)) for j in range(c))


def mul(*ms):
    out = ms[0]
    for b in ms[1:]:
        r, k = shape(out)
        k2, c = shape(b)
        assert k == k2
        out = tuple(tuple(sum((out[i][t] * b[t][j] for t in range(k)), Fraction(0)) for j in range(c))
                    for i in range(r))
    return out


def add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(s, a):
    s = Fraction(s)
    return tuple(tuple(s * x for x in row) for row in a)


def mpow(a, k):
    out = eye(len(a))
    for _ in range(k):
        out = mul(out, a)
    return out


def is_zero(a):
    return all(x == 0 for row in a for x in row)


def rref(a):
    """Reduced row echelon form and pivot columns."""
    m = [list(row) for row in a]
    r, c = shape(a)
    pivots = []
    row = 0
    for col in range(c):
        pr = next((i for i in range(row, r) if m[i][col] != 0), None)
        if pr is None:
            continue
        m[row], m[pr] = m[pr], m[row]
        pv = m[row][col]
        m[row] = [x / pv for x in m[row]]
        for i in range(r):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == r:
            break
    return tuple(tuple(rw) for rw in m), pivots


def rank(a):
    return len(rref(a)[1])


def inverse(a):
    n = len(a)
    aug = tuple(tuple(list(a[i]) + list(eye(n)[i])) for i in range(n))
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(red[i][n:]) for i in range(n))


def column_basis(a):
    """Matrix whose columns are the pivot columns of ``a`` (a basis of its range)."""
    _, piv = rref(a)
    r, _ = shape(a)
    return tuple(tuple(a[i][j] for j in piv) for i in range(r))


def full_rank_factor(a):
    """a = F G with F of full column rank and G of full row rank."""
    red, piv = rref(a)
    f = column_basis(a)
    g = tuple(red[i] for i in range(len(piv)))
    return f, g


def pinv(a):
    r, c = shape(a)
    if rank(a) == 0:
        return zeros(c, r)
    f, g = full_rank_factor(a)
    return mul(T(g), inverse(mul(g, T(g))), inverse(mul(T(f), f)), T(f))


def index(a):
    n = len(a)
    prev = n
    p = eye(n)
    for k in range(n + 1):
        p = mul(p, a)
        cur = rank(p)
        if cur == prev:
            return k
        prev = cur
    return n


def drazin(a):
    k = index(a)
    ak = mpow(a, k)
    return mul(ak, pinv(mpow(a, 2 * k + 1)), ak)


def range_projector(a):
    return mul(a, pinv(a))


def core_ep(a):
    k = index(a)
    return mul(drazin(a), range_projector(mpow(a, k)))


def group_inverse(a):
    if rank(a) != rank(mul(a, a)):
        raise ValueError("no group inverse")
    return drazin(a)


def core_inverse(a):
    return mul(group_inverse(a), a, pinv(a))


def bc_inverse(a, b, c):
    cab = mul(c, a, b)
    if not rank(cab) == rank(b) == rank(c):
        raise ValueError("no (b,c)-inverse")
    return mul(b, pinv(cab), c)


def null_space(a):
    """Columns spanning {v : a v = 0}."""
    red, piv = rref(a)
    _, c = shape(a)
    free = [j for j in range(c) if j not in piv]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * c
        v[fcol] = Fraction(1)
        for i, pcol in enumerate(piv):
            v[pcol] = -red[i][fcol]
        basis.append(v)
    return basis


def vec(x):
    # column-major
    r, c = shape(x)
    return [x[i][j] for j in range(c) for i in range(r)]


def unvec(v, n):
    return tuple(tuple(v[j * n + i] for j in range(n)) for i in range(n))


def units(n):
    out = []
    for j in range(n):
        for i in range(n):
            e = [[Fraction(0)] * n for _ in range(n)]
            e[i][j] = Fraction(1)
            out.append(M(e))
    return out


def span_dim(vectors):
    if not vectors:
        return 0
    return rank(tuple(tuple(v) for v in vectors))


def left_ideal_basis(a):
    """Spanning set of a M_n = {a Y}."""
    return [vec(mul(a, e)) for e in units(len(a))]


def right_ideal_basis(a):
    """Spanning set of M_n a = {Y a}."""
    return [vec(mul(e, a)) for e in units(len(a))]


def left_annihilator_basis(a):
    """Basis of l(a) = {X : X a = 0} as vec'd matrices."""
    n = len(a)
    rows = [vec(mul(e, a)) for e in units(n)]
    # columns of the linear map X -> X a, in vec coordinates
    op = T(tuple(tuple(r) for r in rows))
    return null_space(op)


def right_annihilator_basis(a):
    n = len(a)
    rows = [vec(mul(a, e)) for e in units(n)]
    op = T(tuple(tuple(r) for r in rows))
    return null_space(op)


def direct_sum(u, v, n):
    """(dim U, dim V, dim (U + V), is U + V = M_n with U cap V = 0)."""
    du, dv, ds = span_dim(u), span_dim(v), span_dim(list(u) + list(v))
    return du, dv, ds, ds == n * n and du + dv == n * n


def order_holds(a, b):
    x = core_ep(a)
    return mul(a, x) == mul(b, x) and mul(x, a) == mul(x, b)
