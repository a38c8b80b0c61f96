"""Band data for vector bundles on a cycle of projective lines.

An indecomposable vector bundle on a cycle X_1, ..., X_s (each X_i meeting
X_{i+1}, and X_s meeting X_1) is described by a triple (d, m, lambda):
``d`` lists the degrees of r*s line bundles, laid out around the cycle r
times; ``m`` is a multiplicity and ``lambda`` a nonzero scalar.  ``d`` must
not be a repetition of a shorter sequence of length l*s, and two triples
give isomorphic bundles exactly when they differ by a rotation of ``d`` by
a multiple of s.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from itertools import combinations, product

import networkx as nx

from . import linalg
from .chain import ChainData
from .errors import Disconnected, InvalidBandDatum, LengthNotMultiple, ValidationError
from .field import QQ


def _check_length(d, s):
    if s < 1:
        raise LengthNotMultiple(f"cycle length must be positive, got {s}")
    if len(d) == 0 or len(d) % s:
        raise LengthNotMultiple(f"length {len(d)} is not a positive multiple of {s}")


def is_nonperiodic(d, s: int) -> bool:
    d = tuple(d)
    _check_length(d, s)
    r = len(d) // s
    for l in range(1, r):
        if r % l == 0 and d == d[: l * s] * (r // l):
            return False
    return True


def least_rotation(blocks) -> int:
    """Index of the lexicographically least rotation (Booth's algorithm)."""
    S = list(blocks) * 2
    n = len(blocks)
    f = [-1] * len(S)
    k = 0
    for j in range(1, len(S)):
        sj = S[j]
        i = f[j - k - 1]
        while i != -1 and sj != S[k + i + 1]:
            if sj < S[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != S[k + i + 1]:
            if sj < S[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n if n else 0


def rotate(d, k: int):
    d = tuple(d)
    if not d:
        return d
    k %= len(d)
    return d[k:] + d[:k]


def canonical_sequence(d, s: int):
    """Lexicographically least rotation of d by a multiple of s."""
    d = tuple(d)
    _check_length(d, s)
    blocks = [d[i: i + s] for i in range(0, len(d), s)]
    k = least_rotation(blocks)
    return rotate(d, k * s)


@dataclass(frozen=True)
class BandDatum:
    s: int
    d: tuple
    m: int
    lam: object
    field: object = dc_field(default=QQ, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(self.d))
        try:
            object.__setattr__(self, "lam", self.field(self.lam))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidBandDatum(f"bad lambda {self.lam!r}") from exc
        if any(not isinstance(x, int) or isinstance(x, bool) for x in self.d):
            raise InvalidBandDatum("degrees must be integers")
        if not isinstance(self.m, int) or self.m < 1:
            raise InvalidBandDatum(f"multiplicity must be a positive integer, got {self.m!r}")
        try:
            periodic = not is_nonperiodic(self.d, self.s)
        except LengthNotMultiple as exc:
            raise InvalidBandDatum(str(exc)) from exc
        if periodic:
            raise InvalidBandDatum(f"{self.d} repeats a shorter sequence")
        if self.lam == 0:
            raise InvalidBandDatum("lambda must be nonzero")

    @property
    def r(self) -> int:
        return len(self.d) // self.s

    def to_json(self):
        return {"s": self.s, "d": list(self.d), "m": self.m, "lambda": self.field.format(self.lam)}

    @classmethod
    def from_json(cls, data, field=QQ):
        try:
            s, d, m = data["s"], data["d"], data.get("m", 1)
            lam = data.get("lambda", "1")
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"band datum is missing a field: {exc}") from exc
        if not isinstance(d, list):
            raise ValidationError("'d' must be a list of integers")
        return cls(s, tuple(d), m, field.parse(lam), field)


def shift(b: BandDatum, k: int) -> BandDatum:
    """Rotate d by k*s positions."""
    return BandDatum(b.s, rotate(b.d, k * b.s), b.m, b.lam, b.field)


def canonical_form(b: BandDatum) -> BandDatum:
    return BandDatum(b.s, canonical_sequence(b.d, b.s), b.m, b.lam, b.field)


def are_isomorphic(b1: BandDatum, b2: BandDatum) -> bool:
    if b1.s != b2.s:
        raise InvalidBandDatum(f"cannot compare band data on cycles of length {b1.s} and {b2.s}")
    return canonical_form(b1) == canonical_form(b2)


def rank_degree(b: BandDatum):
    degree = tuple(sum(b.d[i:: b.s]) for i in range(b.s))
    return b.m * b.r, degree


def jordan_block(m: int, lam, field):
    """Rows are indexed by copies k on the prime side: copy k maps to
    lam * (copy k) + (copy k-1) on the double-prime side."""
    J = [[field.zero] * m for _ in range(m)]
    for k in range(m):
        J[k][k] = field(lam)
        if k > 0:
            J[k][k - 1] = field.one
    return J


@dataclass(frozen=True)
class GluingData:
    """Identifications at the nodes of the cycle.

    Strand j (0-based, j < r*s) is O(d_j) on component j mod s.  Pair j glues
    the right end of strand j to the left end of strand j+1 (cyclically) at
    node j mod s; ``pair_blocks[j]`` is the m x m matrix sending prime-side
    copies to double-prime-side copies (rows = prime side).
    """

    s: int
    m: int
    degrees: tuple
    pair_blocks: tuple
    field: object = dc_field(default=QQ, compare=False)

    @property
    def n_strands(self) -> int:
        return len(self.degrees)

    def pairs_at(self, node: int):
        return [j for j in range(self.n_strands) if j % self.s == node]

    def node_matrix(self, node: int):
        """Block-diagonal identification at node ``node`` (0-based)."""
        return linalg.block_diag([self.pair_blocks[j] for j in self.pairs_at(node)], self.field)

    def node_matrices(self):
        return [self.node_matrix(i) for i in range(self.s)]

    def to_json(self):
        f = self.field
        return {
            "s": self.s,
            "m": self.m,
            "degrees": list(self.degrees),
            "nodes": [
                {
                    "node": i + 1,
                    "pairs": [j + 1 for j in self.pairs_at(i)],
                    "matrix": [[f.format(x) for x in row] for row in self.node_matrix(i)],
                }
                for i in range(self.s)
            ],
        }


def build_gluing(b: BandDatum) -> GluingData:
    f = b.field
    n = len(b.d)
    I = linalg.identity(b.m, f)
    blocks = [I] * (n - 1) + [jordan_block(b.m, b.lam, f)]
    return GluingData(b.s, b.m, b.d, tuple(_freeze(B) for B in blocks), f)


def _freeze(M):
    return tuple(tuple(row) for row in M)


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def enumerate_nonneg(s: int, r: int, delta):
    """Canonical non-periodic sequences d >= 0 of length r*s with the given
    residue-class sums, one per orbit under rotation by multiples of s."""
    delta = tuple(delta)
    if len(delta) != s:
        raise ValidationError(f"delta must have length {s}")
    if any(x < 0 for x in delta):
        raise ValidationError("delta entries must be non-negative")
    if r < 1:
        return []
    found = set()
    for parts in product(*[_compositions(delta[i], r) for i in range(s)]):
        d = tuple(parts[j % s][j // s] for j in range(r * s))
        if canonical_sequence(d, s) != d:
            continue
        if is_nonperiodic(d, s):
            found.add(d)
    return sorted(found)


def nu_count(s: int, r: int, delta) -> int:
    return len(enumerate_nonneg(s, r, delta))


def cut_cycle(b: BandDatum) -> ChainData:
    """Drop the closing identification and unroll the cycle into a chain.

    The result has one component per strand, m rows on each (all with the
    strand's degree), and identity gluings at the remaining nodes.
    """
    f = b.field
    n = len(b.d)
    I = linalg.identity(b.m, f)
    return ChainData(
        n,
        [b.m] * n,
        [b.m] * (n - 1),
        [[x] * b.m for x in b.d],
        [I] * (n - 1),
        [I] * (n - 1),
        f,
    )


class CurveType(str, Enum):
    FINITE = "FINITE"
    TAME_BOUNDED = "TAME_BOUNDED"
    TAME_UNBOUNDED = "TAME_UNBOUNDED"
    WILD = "WILD"


@dataclass(frozen=True)
class DualGraph:
    genera: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "genera", tuple(self.genera))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        n = len(self.genera)
        for g in self.genera:
            if not isinstance(g, int) or g < 0:
                raise ValidationError(f"genus must be a non-negative integer, got {g!r}")
        for e in self.edges:
            if len(e) != 2 or any(not isinstance(v, int) or not 0 <= v < n for v in e):
                raise ValidationError(f"edge {e!r} does not join two of the {n} vertices")

    def graph(self) -> nx.MultiGraph:
        G = nx.MultiGraph()
        G.add_nodes_from(range(len(self.genera)))
        G.add_edges_from(self.edges)
        return G

    def to_json(self):
        return {"genera": list(self.genera), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data):
        try:
            return cls(tuple(data["genera"]), tuple(tuple(e) for e in data.get("edges", [])))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"dual graph needs 'genera' and 'edges': {exc}") from exc


def curve_vb_type(g: DualGraph) -> CurveType:
    G = g.graph()
    n = G.number_of_nodes()
    if n == 0 or not nx.is_connected(G):
        raise Disconnected("the dual graph must be connected and non-empty")
    e = G.number_of_edges()
    rational = all(x == 0 for x in g.genera)
    if n == 1 and e == 0 and g.genera[0] == 1:
        return CurveType.TAME_BOUNDED
    if not rational:
        return CurveType.WILD
    degrees = [deg for _, deg in G.degree()]
    loops = nx.number_of_selfloops(G)
    simple = loops == 0 and e == nx.Graph(G).number_of_edges()
    if e == n - 1 and simple and max(degrees, default=0) <= 2:
        return CurveType.FINITE
    if e == n and all(deg == 2 for deg in degrees):
        return CurveType.TAME_UNBOUNDED
    return CurveType.WILD
