"""Cohomology of band bundles on a cycle of projective lines.

The closed formulas count sections through the positive parts of d (maximal
cyclic runs of non-negative entries).  :func:`cech_oracle` recomputes both
dimensions from the gluing matrices by plain linear algebra, using the
sequence 0 -> V -> (pullback to the normalization) -> skyscraper -> 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from . import linalg
from .band import BandDatum, GluingData
from .errors import NotCoprime, ValidationError


@dataclass(frozen=True)
class CohomDims:
    h0: int
    h1: int

    def to_json(self):
        return {"h0": self.h0, "h1": self.h1}


@dataclass(frozen=True)
class PositivePart:
    start: int
    length: int
    entries: tuple

    def to_json(self):
        return {"start": self.start, "length": self.length, "entries": list(self.entries)}


def pos_part(a: int) -> int:
    return a if a > 0 else 0


def neg_part(a: int) -> int:
    return -a if a < 0 else 0


def positive_parts(d):
    d = tuple(d)
    n = len(d)
    if n == 0:
        return []
    if all(x >= 0 for x in d):
        return [PositivePart(0, n, d)]
    parts = []
    for k in range(n):
        if d[k] >= 0 and d[k - 1] < 0:
            l = 0
            while d[(k + l) % n] >= 0:
                l += 1
            parts.append(PositivePart(k, l, tuple(d[(k + i) % n] for i in range(l))))
    return parts


def theta(d) -> int:
    n = len(d)
    total = 0
    for p in positive_parts(d):
        if p.length == n or all(x == 0 for x in p.entries):
            total += p.length
        else:
            total += p.length + 1
    return total


def delta_term(d, lam) -> int:
    return 1 if all(x == 0 for x in d) and lam == 1 else 0


def cohomology(b: BandDatum) -> CohomDims:
    d = b.d
    th = theta(d)
    dl = delta_term(d, b.lam)
    h0 = b.m * (sum(pos_part(x + 1) for x in d) - th) + dl
    h1 = b.m * (sum(neg_part(x + 1) for x in d) + len(d) - th) + dl
    return CohomDims(h0, h1)


def _has_zero_ones_zero(d) -> bool:
    """Does some rotation of d contain a contiguous block 0,1,...,1,0?"""
    n = len(d)
    for i in range(n):
        if d[i] != 0:
            continue
        j = 1
        while j < n and d[(i + j) % n] == 1:
            j += 1
        if j < n and d[(i + j) % n] == 0:
            return True
    return False


def _is_rotation_of_zero_ones(d) -> bool:
    return d.count(0) == 1 and all(x in (0, 1) for x in d)


def is_suitable(d) -> bool:
    d = tuple(d)
    if not d or any(x < 0 for x in d) or not any(x > 0 for x in d):
        return False
    if _has_zero_ones_zero(d):
        return False
    if _is_rotation_of_zero_ones(d):
        return False
    return True


def is_generically_spanned(b: BandDatum) -> bool:
    if all(x == 0 for x in b.d) and b.m == 1 and b.lam == 1:
        return True
    return is_suitable(b.d)


def cech_oracle(g: GluingData, degrees=None) -> CohomDims:
    """h0 and h1 of the bundle glued by ``g`` from finite linear algebra.

    Sections of O(d) on a strand are polynomials of degree <= d; the value
    at the left end (t = 0) is the constant coefficient and the value at the
    right end (t = infinity) is the top coefficient.  Pair j imposes
    v_left(j+1) = J^T v_right(j), one equation per copy.
    """
    f = g.field
    d = tuple(g.degrees if degrees is None else degrees)
    n = len(d)
    m = g.m
    if n != g.n_strands:
        raise ValidationError("degree list does not match the gluing data")
    offset = {}
    nvars = 0
    for j in range(n):
        for k in range(m):
            if d[j] >= 0:
                offset[(j, k)] = nvars
                nvars += d[j] + 1

    def left(j, k):
        return offset.get((j, k))

    def right(j, k):
        o = offset.get((j, k))
        return None if o is None else o + d[j]

    rows = []
    for j in range(n):
        J = g.pair_blocks[j]
        nxt = (j + 1) % n
        for l in range(m):
            row = [f.zero] * nvars
            a = left(nxt, l)
            if a is not None:
                row[a] = row[a] + f.one
            for k in range(m):
                c = J[k][l]
                b = right(j, k)
                if b is not None and c != 0:
                    row[b] = row[b] - c
            rows.append(row)
    rk = linalg.rank(rows, f) if nvars else 0
    h0 = nvars - rk
    h1_tilde = m * sum(neg_part(x + 1) for x in d)
    h1 = m * n - rk + h1_tilde
    return CohomDims(h0, h1)


def atiyah_cohom(r: int, d: int, n: int, at_origin: bool = False) -> CohomDims:
    """Cohomology of the indecomposable bundle of rank r, degree d twisted by
    the point n*x on an elliptic curve (x the origin when ``at_origin``)."""
    if r < 1 or n < 1:
        raise ValidationError("rank and multiplicity must be positive")
    if gcd(r, d) != 1:
        raise NotCoprime(f"gcd({r}, {d}) != 1")
    if d > 0:
        return CohomDims(n * d, 0)
    if d < 0:
        return CohomDims(0, n * -d)
    return CohomDims(1, 1) if at_origin else CohomDims(0, 0)
