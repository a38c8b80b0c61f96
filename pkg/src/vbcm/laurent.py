"""Laurent polynomials in one variable t, matrices over k[t, t^-1], and the
splitting type of a vector bundle on the projective line.

A bundle on P^1 is glued from trivial bundles on the two standard charts by
an invertible Laurent matrix A.  :func:`diagonalize` finds S over k[t] and
T over k[t^-1] (both with constant nonzero determinant) such that S*A*T is
diag(t^d_1, ..., t^d_r); the d_i form the splitting type.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
import random

from . import linalg
from .errors import NotInvertible, NotSquare, SizeMismatch, ValidationError
from .field import QQ


class LaurentPoly:
    """Immutable sparse Laurent polynomial.

    ``terms`` is a tuple of ``(exponent, coefficient)`` pairs with strictly
    increasing exponents and no zero coefficient.
    """

    __slots__ = ("terms", "field")

    def __init__(self, terms=(), field=QQ):
        acc = {}
        for e, c in (terms.items() if isinstance(terms, dict) else terms):
            c = field(c)
            acc[e] = acc.get(e, field.zero) + c
        self.terms = tuple(sorted((e, c) for e, c in acc.items() if c != 0))
        self.field = field

    @classmethod
    def _raw(cls, terms, field):
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.field = field
        return obj

    @classmethod
    def monomial(cls, coeff, exp, field=QQ):
        return cls({exp: coeff}, field)

    @classmethod
    def const(cls, c, field=QQ):
        return cls({0: c}, field)

    @classmethod
    def zero(cls, field=QQ):
        return cls._raw((), field)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, e):
        for ee, c in self.terms:
            if ee == e:
                return c
        return self.field.zero

    @property
    def lo(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return self.terms[0][0]

    @property
    def hi(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return self.terms[-1][0]

    def span(self) -> int:
        return self.hi - self.lo if self.terms else 0

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other, self.field)
        acc = dict(self.terms)
        zero = self.field.zero
        for e, c in other.terms:
            acc[e] = acc.get(e, zero) + c
        return LaurentPoly._raw(tuple(sorted((e, c) for e, c in acc.items() if c != 0)), self.field)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(tuple((e, -c) for e, c in self.terms), self.field)

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other, self.field)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = self.field(other)
            if c == 0:
                return LaurentPoly.zero(self.field)
            return LaurentPoly._raw(tuple((e, a * c) for e, a in self.terms), self.field)
        if not self.terms or not other.terms:
            return LaurentPoly.zero(self.field)
        acc = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if e in acc:
                    acc[e] = acc[e] + c1 * c2
                else:
                    acc[e] = c1 * c2
        return LaurentPoly._raw(tuple(sorted((e, c) for e, c in acc.items() if c != 0)), self.field)

    __rmul__ = __mul__

    def shift(self, k: int):
        """Multiply by t^k."""
        return LaurentPoly._raw(tuple((e + k, c) for e, c in self.terms), self.field)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            if self.field.contains(other) or isinstance(other, int):
                other = LaurentPoly.const(other, self.field)
            else:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(f"{c}")
            else:
                parts.append(f"{c}*t^{e}")
        return " + ".join(parts)

    def to_json(self):
        return [[e, self.field.format(c)] for e, c in self.terms]

    @classmethod
    def from_json(cls, data, field=QQ):
        if not isinstance(data, list):
            raise ValidationError(f"Laurent polynomial must be a list of [exp, coeff] pairs, got {data!r}")
        terms = {}
        for pair in data:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ValidationError(f"bad term {pair!r}")
            e, c = pair
            if not isinstance(e, int) or isinstance(e, bool):
                raise ValidationError(f"exponent must be an integer, got {e!r}")
            val = field.parse(c)
            terms[e] = terms.get(e, field.zero) + val
        return cls(terms, field)


def is_unit(p: LaurentPoly) -> bool:
    return len(p.terms) == 1


class LaurentMatrix:
    """Immutable matrix over k[t, t^-1]."""

    __slots__ = ("rows", "cols", "entries", "field")

    def __init__(self, entries, field=QQ):
        grid = []
        for row in entries:
            grid.append(tuple(x if isinstance(x, LaurentPoly) else LaurentPoly.const(x, field) for x in row))
        self.rows = len(grid)
        self.cols = len(grid[0]) if grid else 0
        if any(len(row) != self.cols for row in grid):
            raise SizeMismatch("ragged Laurent matrix")
        self.entries = tuple(grid)
        self.field = field

    @classmethod
    def identity(cls, n, field=QQ):
        one = LaurentPoly.const(1, field)
        zero = LaurentPoly.zero(field)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], field)

    @classmethod
    def diagonal_monomials(cls, degrees, field=QQ):
        zero = LaurentPoly.zero(field)
        n = len(degrees)
        return cls(
            [[LaurentPoly.monomial(1, degrees[i], field) if i == j else zero for j in range(n)] for i in range(n)],
            field,
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __mul__(self, other):
        if self.cols != other.rows:
            raise SizeMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        zero = LaurentPoly.zero(self.field)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LaurentMatrix(out, self.field)

    def __eq__(self, other):
        return isinstance(other, LaurentMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"LaurentMatrix({[list(r) for r in self.entries]!r})"

    def transpose(self):
        return LaurentMatrix([list(col) for col in zip(*self.entries)], self.field)

    def nonzero_entries(self):
        return [x for row in self.entries for x in row if x.terms]

    def exponent_range(self):
        """(lowest, highest) exponent over all nonzero entries."""
        nz = self.nonzero_entries()
        if not nz:
            return (0, 0)
        return (min(p.lo for p in nz), max(p.hi for p in nz))

    def det(self) -> LaurentPoly:
        """Determinant by dynamic programming over column subsets."""
        if self.rows != self.cols:
            raise NotSquare(f"matrix is {self.rows}x{self.cols}")
        n = self.rows
        if n == 0:
            return LaurentPoly.const(1, self.field)
        # minors[cols] = det of the first len(cols) rows restricted to cols
        minors = {(): LaurentPoly.const(1, self.field)}
        for i in range(n):
            nxt = {}
            for cols in combinations(range(n), i + 1):
                acc = LaurentPoly.zero(self.field)
                for pos, c in enumerate(cols):
                    a = self.entries[i][c]
                    if not a.terms:
                        continue
                    sub = cols[:pos] + cols[pos + 1:]
                    m = minors.get(sub)
                    if m is None or not m.terms:
                        continue
                    term = a * m
                    acc = acc - term if (i + pos) % 2 else acc + term
                nxt[cols] = acc
            minors = nxt
        return minors[tuple(range(n))]

    def is_diagonal_monomial(self) -> bool:
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if i == j:
                    if not is_unit(x):
                        return False
                elif x.terms:
                    return False
        return True

    def to_json(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[x.to_json() for x in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data, field=QQ):
        if not isinstance(data, dict) or "entries" not in data:
            raise ValidationError("Laurent matrix must be an object with 'entries'")
        entries = [[LaurentPoly.from_json(x, field) for x in row] for row in data["entries"]]
        m = cls(entries, field)
        if "rows" in data and data["rows"] != m.rows:
            raise SizeMismatch(f"declared {data['rows']} rows, found {m.rows}")
        if "cols" in data and data["cols"] != m.cols:
            raise SizeMismatch(f"declared {data['cols']} cols, found {m.cols}")
        return m


@dataclass(frozen=True)
class DiagonalizationResult:
    S: LaurentMatrix
    T: LaurentMatrix
    degrees: tuple


def _require_invertible(A: LaurentMatrix) -> LaurentPoly:
    if A.rows != A.cols:
        raise NotSquare(f"matrix is {A.rows}x{A.cols}")
    d = A.det()
    if not is_unit(d):
        raise NotInvertible(f"determinant {d!r} is not a unit of k[t, t^-1]")
    return d


def _row_degree(row):
    return max(p.hi for p in row if p.terms)


def _row_reduce(P, field):
    """Left-multiply the polynomial matrix P by a unimodular U until the
    leading row coefficient matrix is invertible.  Returns (U, P, degrees).
    """
    n = len(P)
    one = LaurentPoly.const(1, field)
    zero = LaurentPoly.zero(field)
    U = [[one if i == j else zero for j in range(n)] for i in range(n)]
    while True:
        deg = [_row_degree(row) for row in P]
        L = [[P[i][j].coeff(deg[i]) for j in range(n)] for i in range(n)]
        null = linalg.nullspace(linalg.transpose(L), field)
        if not null:
            return U, P, deg
        alpha = null[0]
        support = [i for i in range(n) if alpha[i] != 0]
        j = max(support, key=lambda i: (deg[i], -i))
        aj = alpha[j]
        new_P = [zero] * n
        new_U = [zero] * n
        for i in support:
            coeff = alpha[i] / aj
            k = deg[j] - deg[i]
            new_P = [acc + x.shift(k) * coeff for acc, x in zip(new_P, P[i])]
            new_U = [acc + x.shift(k) * coeff for acc, x in zip(new_U, U[i])]
        P[j] = new_P
        U[j] = new_U


def _invert_in_u(W, degrees, field):
    """Invert W, a matrix over k[u] with u = t^-1 and invertible constant
    term, given as Laurent polynomials with nonpositive exponents."""
    n = len(W)
    K = max((-p.lo for row in W for p in row if p.terms), default=0)
    coeffs = [
        [[W[i][j].coeff(-k) for j in range(n)] for i in range(n)]
        for k in range(K + 1)
    ]
    L_inv = linalg.inverse(coeffs[0], field)
    bound = (n - 1) * K
    series = [L_inv]
    for k in range(1, bound + 1):
        acc = linalg.zeros(n, n, field)
        for j in range(1, min(k, K) + 1):
            prod = linalg.matmul(coeffs[j], series[k - j], field)
            acc = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(acc, prod)]
        series.append(linalg.matmul(L_inv, [[-x for x in row] for row in acc], field))
    T = [
        [LaurentPoly({-k: series[k][i][j] for k in range(bound + 1)}, field) for j in range(n)]
        for i in range(n)
    ]
    return T


def diagonalize(A: LaurentMatrix) -> DiagonalizationResult:
    """Return S, T, degrees with S*A*T = diag(t^degrees), degrees non-increasing."""
    field = A.field
    _require_invertible(A)
    n = A.rows
    if n == 0:
        empty = LaurentMatrix([], field)
        return DiagonalizationResult(empty, empty, ())
    lo, _ = A.exponent_range()
    N = -lo
    P = [[x.shift(N) for x in row] for row in A.entries]
    U, P, deg = _row_reduce(P, field)
    # W = diag(t^-deg) * P lives over k[t^-1] with invertible constant term
    W = [[x.shift(-deg[i]) for x in P[i]] for i in range(n)]
    T = _invert_in_u(W, deg, field)
    raw = [d - N for d in deg]
    order = sorted(range(n), key=lambda i: (-raw[i], i))
    S_rows = [U[i] for i in order]
    T_cols = [[T[r][i] for i in order] for r in range(n)]
    S = LaurentMatrix(S_rows, field)
    Tm = LaurentMatrix(T_cols, field)
    degrees = tuple(raw[i] for i in order)
    if S * A * Tm != LaurentMatrix.diagonal_monomials(degrees, field):
        raise AssertionError("diagonalization failed to verify")
    return DiagonalizationResult(S, Tm, degrees)


def splitting_type(A: LaurentMatrix) -> tuple:
    return diagonalize(A).degrees


def adjugate(A: LaurentMatrix) -> LaurentMatrix:
    """Classical adjugate, so that A * adj(A) = det(A) * I."""
    n = A.rows
    if n == 1:
        return LaurentMatrix([[LaurentPoly.const(1, A.field)]], A.field)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = LaurentMatrix(
                [[A.entries[a][b] for b in range(n) if b != j] for a in range(n) if a != i],
                A.field,
            )
            m = minor.det()
            out[j][i] = -m if (i + j) % 2 else m
    return LaurentMatrix(out, A.field)


def laurent_inverse(A: LaurentMatrix) -> LaurentMatrix:
    d = _require_invertible(A)
    (e, c), = d.terms
    inv = LaurentPoly.monomial(1 / c, -e, A.field)
    return LaurentMatrix([[x * inv for x in row] for row in adjugate(A).entries], A.field)


def _oracle_bound(A: LaurentMatrix, twist: int) -> int:
    # A section v satisfies v = A^-1 w with w in t^-twist k[t]^r, so its
    # lowest exponent is at least (lowest exponent of A^-1) - twist.
    lo_inv, _ = laurent_inverse(A).exponent_range()
    return max(0, twist - lo_inv)


def cramer_bound(A: LaurentMatrix, twist: int) -> int:
    """The cruder a-priori bound twist + hi + r*E + 1 (E the exponent span
    of A); always at least :func:`_oracle_bound`."""
    lo, hi = A.exponent_range()
    return max(0, twist + hi + A.rows * (hi - lo) + 1)


def section_dim_oracle(A: LaurentMatrix, twist: int, bound: int | None = None) -> int:
    """dim H^0 of the bundle glued by A, twisted by O(twist).

    Global sections are columns v over k[t^-1] such that A*v has no exponent
    below -twist.  Everything is truncated at a degree bound large enough
    that no section is lost, then counted by a rank computation.
    """
    _require_invertible(A)
    field = A.field
    r = A.rows
    if r == 0:
        return 0
    lo, hi = A.exponent_range()
    B = _oracle_bound(A, twist) if bound is None else bound
    # unknown (k, j): coefficient of t^-k in v_j
    ncols = r * (B + 1)
    rows = []
    for i in range(r):
        # exponent e of (A v)_i receives a_ij[e + k] * c_{k,j}
        for e in range(lo - B, min(hi, -twist - 1) + 1):
            row = [field.zero] * ncols
            nonzero = False
            for j in range(r):
                a = A.entries[i][j]
                for ea, c in a.terms:
                    k = ea - e
                    if 0 <= k <= B:
                        row[k * r + j] = c
                        nonzero = True
            if nonzero:
                rows.append(row)
    if not rows:
        return ncols
    return ncols - linalg.rank(rows, field)


def sections_from_degrees(degrees, twist: int) -> int:
    return sum(max(d + twist + 1, 0) for d in degrees)


def splitting_type_from_oracle(A: LaurentMatrix) -> tuple:
    """Recover the splitting type from section dimensions alone.

    h(n) - h(n-1) counts the degrees d_i >= -n, so scanning n recovers the
    multiset.
    """
    _require_invertible(A)
    r = A.rows
    if r == 0:
        return ()
    lo, hi = A.exponent_range()
    e = A.det().lo
    d_min = e - (r - 1) * hi
    counts = {}
    prev = section_dim_oracle(A, -hi - 1)
    prev_ge = 0
    for n in range(-hi, -d_min + 1):
        cur = section_dim_oracle(A, n)
        ge = cur - prev
        if ge > prev_ge:
            counts[-n] = ge - prev_ge
        prev, prev_ge = cur, ge
        if ge == r:
            break
    out = []
    for d in sorted(counts, reverse=True):
        out.extend([d] * counts[d])
    return tuple(out)


def random_invertible_laurent(r, field, rng: random.Random, lo=-3, hi=3, steps=None):
    """A random invertible r x r Laurent matrix with exponents in [lo, hi].

    Starts from a permuted monomial diagonal and applies elementary
    operations, rejecting those that push an exponent out of range.
    """
    zero = LaurentPoly.zero(field)
    perm = list(range(r))
    rng.shuffle(perm)
    M = [[zero] * r for _ in range(r)]
    for i in range(r):
        M[i][perm[i]] = LaurentPoly.monomial(field.random_nonzero(rng), rng.randint(lo, hi), field)
    steps = steps if steps is not None else 4 * r
    tries = 0
    done = 0
    while done < steps and tries < 50 * steps + 50:
        tries += 1
        i, j = rng.sample(range(r), 2) if r > 1 else (0, 0)
        if i == j:
            break
        poly = LaurentPoly(
            {rng.randint(lo, hi): field.random_nonzero(rng) for _ in range(rng.randint(1, 2))},
            field,
        )
        if rng.random() < 0.5:
            new = [a + poly * b for a, b in zip(M[i], M[j])]
            if all(not x.terms or (lo <= x.lo and x.hi <= hi) for x in new):
                M[i] = new
                done += 1
        else:
            col = [M[k][i] + poly * M[k][j] for k in range(r)]
            if all(not x.terms or (lo <= x.lo and x.hi <= hi) for x in col):
                for k in range(r):
                    M[k][i] = col[k]
                done += 1
    return LaurentMatrix(M, field)
