"""Dense exact linear algebra over QQ and F_p.

Matrices are lists of rows.  Entries may be ``Fraction``/``int`` (rationals)
or :class:`GFElem`.  Internally elimination runs on plain ints modulo p or
on Fractions, which is noticeably faster than going through ``GFElem``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import NotInvertible, NotSquare, SizeMismatch
from .field import GF, QQ, GFElem


def _lower(M, field):
    """Convert to raw entries: ints mod p, or Fractions."""
    if field is QQ:
        return [[Fraction(x) for x in row] for row in M]
    p = field.p
    return [[(x.v if isinstance(x, GFElem) else int(x)) % p for x in row] for row in M]


def _raise(M, field):
    if field is QQ:
        return [list(row) for row in M]
    p = field.p
    return [[GFElem(x, p) for x in row] for row in M]


def _rref_raw(A, p, ncols):
    """In-place reduced row echelon form.  Returns pivot column list."""
    pivots = []
    r = 0
    nrows = len(A)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        row = A[r]
        if p:
            inv = pow(row[c], -1, p)
            if inv != 1:
                A[r] = row = [(x * inv) % p for x in row]
        else:
            inv = 1 / row[c]
            if inv != 1:
                A[r] = row = [x * inv for x in row]
        for i in range(nrows):
            if i != r:
                f = A[i][c]
                if f:
                    other = A[i]
                    if p:
                        A[i] = [(a - f * b) % p for a, b in zip(other, row)]
                    else:
                        A[i] = [a - f * b for a, b in zip(other, row)]
        pivots.append(c)
        r += 1
    return pivots


def _pchar(field):
    return 0 if field is QQ else field.p


def _rank_gf2(M):
    """Rank over F_2 with rows packed into Python ints."""
    rows = []
    for row in M:
        v = 0
        for j, x in enumerate(row):
            if x:
                v |= 1 << j
        rows.append(v)
    basis = {}
    for v in rows:
        while v:
            h = v.bit_length() - 1
            if h in basis:
                v ^= basis[h]
            else:
                basis[h] = v
                break
    return len(basis)


def _rank_integer(A):
    """Rank over Q after clearing denominators; fraction-free elimination
    with row content removal keeps the integers small."""
    rows = []
    for row in A:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in row]
        if any(ints):
            rows.append(ints)
    rk = 0
    ncols = len(A[0])
    for c in range(ncols):
        piv = None
        for i in range(rk, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        prow = rows[rk]
        a = prow[c]
        for i in range(rk + 1, len(rows)):
            f = rows[i][c]
            if f:
                new = [a * x - f * y for x, y in zip(rows[i], prow)]
                g = 0
                for x in new:
                    if x:
                        g = gcd(g, x)
                        if g == 1:
                            break
                if g > 1:
                    new = [x // g for x in new]
                rows[i] = new
        rk += 1
        if rk == len(rows):
            break
    return rk


def rank(M, field=QQ) -> int:
    if not M or not M[0]:
        return 0
    A = _lower(M, field)
    if field is QQ:
        return _rank_integer(A)
    if field.p == 2:
        return _rank_gf2(A)
    return len(_rref_raw(A, field.p, len(A[0])))


def rref(M, field=QQ):
    """Return (R, pivots) with R the reduced row echelon form."""
    if not M:
        return [], []
    A = _lower(M, field)
    pivots = _rref_raw(A, _pchar(field), len(A[0]))
    return _raise(A, field), pivots


def nullspace(M, field=QQ, ncols=None):
    """Basis of {x : M x = 0}, as a list of vectors."""
    if not M:
        n = ncols or 0
        return _raise([[1 if i == j else 0 for j in range(n)] for i in range(n)], field)
    n = len(M[0])
    A = _lower(M, field)
    p = _pchar(field)
    pivots = _rref_raw(A, p, n)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, pc in enumerate(pivots):
            x = A[i][f]
            if x:
                v[pc] = (-x) % p if p else -x
        basis.append(v)
    if p:
        return [[GFElem(x, p) for x in v] for v in basis]
    return [[Fraction(x) for x in v] for v in basis]


def nullity(M, field=QQ, ncols=None) -> int:
    if not M:
        return ncols or 0
    return len(M[0]) - rank(M, field)


def det(M, field=QQ):
    n = len(M)
    if any(len(row) != n for row in M):
        raise NotSquare(f"matrix is {n}x{len(M[0]) if M else 0}")
    if n == 0:
        return field.one
    A = _lower(M, field)
    p = _pchar(field)
    d = 1
    for c in range(n):
        piv = None
        for i in range(c, n):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            return field.zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        pv = A[c][c]
        d = d * pv
        if p:
            d %= p
            inv = pow(pv, -1, p)
        else:
            inv = 1 / pv
        for i in range(c + 1, n):
            f = A[i][c]
            if f:
                f = (f * inv) % p if p else f * inv
                if p:
                    A[i] = [(a - f * b) % p for a, b in zip(A[i], A[c])]
                else:
                    A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return field(d)


def inverse(M, field=QQ):
    n = len(M)
    if any(len(row) != n for row in M):
        raise NotSquare("cannot invert a non-square matrix")
    A = _lower(M, field)
    p = _pchar(field)
    for i in range(n):
        A[i] = A[i] + [1 if i == j else 0 for j in range(n)]
    pivots = _rref_raw(A, p, n)
    if len(pivots) < n:
        raise NotInvertible("matrix is singular")
    return _raise([row[n:] for row in A], field)


def solve(M, b, field=QQ):
    """One solution x of M x = b, or None if inconsistent."""
    n = len(M[0]) if M else 0
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    A = _lower(aug, field)
    p = _pchar(field)
    pivots = _rref_raw(A, p, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [0] * n
    for i, pc in enumerate(pivots):
        x[pc] = A[i][n]
    return _raise([x], field)[0]


def matmul(A, B, field=QQ):
    if not A:
        return []
    k = len(B)
    if len(A[0]) != k:
        raise SizeMismatch(f"cannot multiply {len(A)}x{len(A[0])} by {k}x{len(B[0]) if B else 0}")
    m = len(B[0]) if B else 0
    zero = field.zero
    cols = list(zip(*B)) if B else [() for _ in range(m)]
    out = []
    for row in A:
        out.append([sum((a * b for a, b in zip(row, col) if a and b), zero) for col in cols])
    return out


def identity(n, field=QQ):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def zeros(r, c, field=QQ):
    return [[field.zero] * c for _ in range(r)]


def is_identity(M) -> bool:
    return all(
        (x == 1) if i == j else (x == 0)
        for i, row in enumerate(M)
        for j, x in enumerate(row)
    ) and all(len(row) == len(M) for row in M)


def transpose(M):
    return [list(col) for col in zip(*M)]


def block_diag(blocks, field=QQ):
    n = sum(len(b) for b in blocks)
    out = zeros(n, n, field)
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return out


def random_invertible(n, field, rng, lo=-3, hi=3):
    """A random invertible n x n matrix (rejection sampling)."""
    while True:
        M = [[field.random_element(rng, lo, hi) for _ in range(n)] for _ in range(n)]
        if n == 0 or det(M, field) != 0:
            return M


__all__ = [
    "rank", "rref", "nullspace", "nullity", "det", "inverse", "solve",
    "matmul", "identity", "zeros", "is_identity", "transpose", "block_diag",
    "random_invertible", "GF", "QQ",
]
