"""Vector bundles and torsion-free sheaves on a chain of projective lines.

A sheaf on a chain X_1 - X_2 - ... - X_s is described by line bundles
O(d_ij) on each component together with gluing data at every node: a pair
of matrices M'_i (rows = summands on X_i) and M''_i (rows = summands on
X_{i+1}) whose columns span the fibre at the node.  Rows carry weights
(the degrees d_ij), and row operations must respect them: row j may receive
a multiple of row l only when d_j >= d_l, and rows of equal weight must be
transformed identically at both ends of a component.

The reduction works node by node, left to right.  Rows of component i are
"strands" and carry a key (d_i, d_{i-1}, ..., d_start, END); two rows may
be combined in a way that keeps the already normalized nodes intact only
when the keys compare correctly.  Components are 0-based internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
import random

from . import linalg
from .errors import (
    InadmissibleTransform,
    NotInvertible,
    RankConditionViolated,
    RankMismatch,
    SizeMismatch,
    ValidationError,
)
from .field import QQ


class _End:
    """Sentinel closing every strand key; compares above all integers."""

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return not isinstance(other, _End)

    def __le__(self, other):
        return isinstance(other, _End)

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return isinstance(other, _End)

    def __hash__(self):
        return hash("_End")

    def __repr__(self):
        return "END"


END = _End()


@dataclass(frozen=True)
class ChainData:
    s: int
    ranks: tuple
    node_dims: tuple
    weights: tuple
    M_prime: tuple
    M_dblprime: tuple
    field: object = dc_field(default=QQ, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))
        object.__setattr__(self, "node_dims", tuple(self.node_dims))
        object.__setattr__(self, "weights", tuple(tuple(w) for w in self.weights))
        object.__setattr__(self, "M_prime", tuple(_freeze(m, self.field) for m in self.M_prime))
        object.__setattr__(self, "M_dblprime", tuple(_freeze(m, self.field) for m in self.M_dblprime))
        self._check_shapes()

    def _check_shapes(self):
        s = self.s
        if s < 1:
            raise ValidationError("a chain needs at least one component")
        if len(self.ranks) != s or len(self.weights) != s:
            raise SizeMismatch(f"expected {s} ranks and weight lists")
        if len(self.node_dims) != s - 1 or len(self.M_prime) != s - 1 or len(self.M_dblprime) != s - 1:
            raise SizeMismatch(f"expected {s - 1} nodes")
        for i, (r, w) in enumerate(zip(self.ranks, self.weights)):
            if r < 0 or len(w) != r:
                raise SizeMismatch(f"component {i + 1}: {len(w)} weights for rank {r}")
        for i in range(s - 1):
            m = self.node_dims[i]
            for name, mat, rows in (
                ("M_prime", self.M_prime[i], self.ranks[i]),
                ("M_dblprime", self.M_dblprime[i], self.ranks[i + 1]),
            ):
                if len(mat) != rows or any(len(row) != m for row in mat):
                    raise SizeMismatch(f"{name}[{i + 1}] must be {rows}x{m}")

    def is_vector_bundle_shape(self) -> bool:
        return len(set(self.ranks)) == 1 and all(m == self.ranks[0] for m in self.node_dims)

    def to_json(self):
        f = self.field

        def mat(M, rows, cols):
            return {"rows": rows, "cols": cols, "entries": [[f.format(x) for x in row] for row in M]}

        return {
            "s": self.s,
            "ranks": list(self.ranks),
            "node_dims": list(self.node_dims),
            "weights": [list(w) for w in self.weights],
            "M_prime": [mat(self.M_prime[i], self.ranks[i], self.node_dims[i]) for i in range(self.s - 1)],
            "M_dblprime": [mat(self.M_dblprime[i], self.ranks[i + 1], self.node_dims[i]) for i in range(self.s - 1)],
        }

    @classmethod
    def from_json(cls, data, field=QQ):
        try:
            s = data["s"]
            ranks = data["ranks"]
            weights = data["weights"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"chain data is missing a field: {exc}") from exc
        node_dims = data.get("node_dims")
        if node_dims is None:
            node_dims = [ranks[0]] * (s - 1) if ranks else []
        for w in weights:
            if any(not isinstance(x, int) or isinstance(x, bool) for x in w):
                raise ValidationError("weights must be integers")

        def parse_mat(obj, rows, cols):
            entries = obj["entries"] if isinstance(obj, dict) else obj
            out = []
            for row in entries:
                out.append([_parse_scalar(x, field) for x in row])
            if isinstance(obj, dict):
                if obj.get("rows", len(out)) != len(out):
                    raise SizeMismatch("declared row count disagrees with entries")
            return out

        Mp = [parse_mat(m, ranks[i], node_dims[i]) for i, m in enumerate(data.get("M_prime", []))]
        Mpp = [parse_mat(m, ranks[i + 1], node_dims[i]) for i, m in enumerate(data.get("M_dblprime", []))]
        return cls(s, ranks, node_dims, weights, Mp, Mpp, field)


def _parse_scalar(x, field):
    # constant entries may also be given as Laurent polynomials [[0, "c"]]
    if isinstance(x, list):
        if not x:
            return field.zero
        if len(x) == 1 and isinstance(x[0], list) and x[0][0] == 0:
            return field.parse(x[0][1])
        raise ValidationError(f"chain matrices need constant entries, got {x!r}")
    return field.parse(x)


def _freeze(M, field):
    return tuple(tuple(field(x) for x in row) for row in M)


@dataclass(frozen=True, order=True)
class IntervalLineBundle:
    """Line bundle supported on components start..end (1-based, inclusive)."""

    start: int
    end: int
    degrees: tuple

    def to_json(self):
        return {"start": self.start, "end": self.end, "degrees": list(self.degrees)}


def _check_vector_bundle(data: ChainData):
    if not data.is_vector_bundle_shape():
        raise RankMismatch(f"vector bundle data needs equal ranks and node dimensions, got ranks {data.ranks}, node_dims {data.node_dims}")
    f = data.field
    for i in range(data.s - 1):
        for name, M in (("M_prime", data.M_prime[i]), ("M_dblprime", data.M_dblprime[i])):
            if linalg.det([list(r) for r in M], f) == 0:
                raise NotInvertible(f"{name}[{i + 1}] is singular")


def _check_torsion_free(data: ChainData):
    f = data.field
    for i in range(data.s - 1):
        Mp = [list(r) for r in data.M_prime[i]]
        Mpp = [list(r) for r in data.M_dblprime[i]]
        m = data.node_dims[i]
        if linalg.rank(Mp, f) != data.ranks[i]:
            raise RankConditionViolated(f"M_prime[{i + 1}] does not have full row rank {data.ranks[i]}")
        if linalg.rank(Mpp, f) != data.ranks[i + 1]:
            raise RankConditionViolated(f"M_dblprime[{i + 1}] does not have full row rank {data.ranks[i + 1]}")
        if linalg.rank(Mp + Mpp, f) != m:
            raise RankConditionViolated(f"node {i + 1}: stacked matrix does not have full column rank {m}")


class _Reducer:
    """Mutable working copy of a ChainData with the admissible operations."""

    def __init__(self, data: ChainData):
        self.f = data.field
        self.s = data.s
        self.Mp = [[list(r) for r in M] for M in data.M_prime]
        self.Mpp = [[list(r) for r in M] for M in data.M_dblprime]
        self.W = [list(w) for w in data.weights]
        self.keys = [None] * self.s
        self.keys[0] = [(w, END) for w in self.W[0]]
        self.node_dims = list(data.node_dims)

    # -- column operations at node i (transformation 1) --
    def col_add(self, i, src, dst, c):
        if c == 0:
            return
        for M in (self.Mp[i], self.Mpp[i]):
            for row in M:
                if row[src] != 0:
                    row[dst] = row[dst] + c * row[src]

    def col_scale(self, i, a, c):
        for M in (self.Mp[i], self.Mpp[i]):
            for row in M:
                row[a] = row[a] * c

    def col_swap(self, i, a, b):
        for M in (self.Mp[i], self.Mpp[i]):
            for row in M:
                row[a], row[b] = row[b], row[a]

    # -- raw row operations --
    def _row_add(self, M, j, l, c):
        M[j] = [x + c * y for x, y in zip(M[j], M[l])]

    def bottom_row_add(self, k, j, l, c):
        """row_j += c*row_l on component k, whose right node is unprocessed."""
        if c == 0:
            return
        if self.W[k][j] < self.W[k][l]:
            raise InadmissibleTransform(f"component {k + 1}: row weight {self.W[k][j]} < {self.W[k][l]}")
        self._row_add(self.Mpp[k - 1], j, l, c)
        if self.W[k][j] == self.W[k][l] and k < self.s - 1:
            self._row_add(self.Mp[k], j, l, c)

    def bottom_row_scale(self, k, j, c):
        self.Mpp[k - 1][j] = [x * c for x in self.Mpp[k - 1][j]]
        if k < self.s - 1:
            self.Mp[k][j] = [x * c for x in self.Mp[k][j]]

    def _unit_col(self, M, j):
        for q, x in enumerate(M[j]):
            if x != 0:
                return q
        raise InadmissibleTransform("normalized node has a zero row")

    def _top_partner(self, i, q):
        for a, row in enumerate(self.Mp[i]):
            if row[q] != 0:
                return a
        return None

    def cascade_row_add(self, k, j, l, c):
        """row_j += c*row_l on component k, repairing the normalized node k-1
        (and further left) by compensating column and row operations."""
        if c == 0:
            return
        wj, wl = self.W[k][j], self.W[k][l]
        if wj < wl:
            raise InadmissibleTransform(f"component {k + 1}: row weight {wj} < {wl}")
        if k < self.s - 1:
            self._row_add(self.Mp[k], j, l, c)
        if k == 0 or wj > wl:
            return
        node = k - 1
        Mpp = self.Mpp[node]
        qj = self._unit_col(Mpp, j)
        ql = self._unit_col(Mpp, l)
        jp = self._top_partner(node, qj)
        lp = self._top_partner(node, ql)
        if jp is not None and lp is None:
            raise InadmissibleTransform("row operation would glue a strand start onto a longer strand")
        self._row_add(Mpp, j, l, c)
        # column q_j is e_j at the bottom, so this clears the new entry
        self.col_add(node, qj, ql, -c)
        if jp is None:
            return
        if lp is None:
            raise InadmissibleTransform("row operation would glue a strand start onto a longer strand")
        self.cascade_row_add(node, jp, lp, c)

    def row_permute(self, k, order):
        """Reorder the rows of component k: new row t is old row order[t]."""
        if k > 0:
            self.Mpp[k - 1] = [self.Mpp[k - 1][t] for t in order]
        if k < self.s - 1:
            self.Mp[k] = [self.Mp[k][t] for t in order]
        self.W[k] = [self.W[k][t] for t in order]
        if self.keys[k] is not None:
            self.keys[k] = [self.keys[k][t] for t in order]

    # -- node processing --
    def process_node(self, i):
        f = self.f
        Mp, Mpp = self.Mp, self.Mpp
        r_top = len(Mp[i])
        r_bot = len(Mpp[i])
        m = self.node_dims[i]
        k_bot = i + 1

        # A) column operations bring M' to [I | 0]
        for j in range(r_top):
            c = next((c for c in range(j, m) if Mp[i][j][c] != 0), None)
            if c is None:
                raise RankConditionViolated(f"M_prime[{i + 1}] lost full row rank")
            if c != j:
                self.col_swap(i, c, j)
            self.col_scale(i, j, 1 / Mp[i][j][j])
            for c2 in range(m):
                if c2 != j and Mp[i][j][c2] != 0:
                    self.col_add(i, j, c2, -Mp[i][j][c2])

        # B) reduce the block K of M'' under the zero part of M'
        k_pivot = {}
        pivot_rows = set()
        for b in range(r_top, m):
            cand = [p for p in range(r_bot) if p not in pivot_rows and Mpp[i][p][b] != 0]
            if not cand:
                raise RankConditionViolated(f"node {i + 1}: stacked matrix lost full column rank")
            p = min(cand, key=lambda p: (self.W[k_bot][p], p))
            self.col_scale(i, b, 1 / Mpp[i][p][b])
            for j in cand:
                if j != p:
                    self.bottom_row_add(k_bot, j, p, -Mpp[i][j][b])
            for b2 in range(r_top, m):
                if b2 != b and Mpp[i][p][b2] != 0:
                    self.col_add(i, b, b2, -Mpp[i][p][b2])
            k_pivot[p] = b
            pivot_rows.add(p)

        # C) clear the K-pivot rows under the identity part
        for p, b in k_pivot.items():
            for a in range(r_top):
                if Mpp[i][p][a] != 0:
                    self.col_add(i, b, a, -Mpp[i][p][a])

        # D) reduce the remaining block X' (rows outside the K pivots)
        rest = [p for p in range(r_bot) if p not in pivot_rows]
        done_rows, done_cols = set(), set()
        match = {}
        while True:
            cols = [
                a for a in range(r_top)
                if a not in done_cols and any(Mpp[i][p][a] != 0 for p in rest if p not in done_rows)
            ]
            if not cols:
                break
            best = max(self.keys[i][a] for a in cols)
            a = next(a for a in cols if self.keys[i][a] == best)
            cand = [p for p in rest if p not in done_rows and Mpp[i][p][a] != 0]
            p = min(cand, key=lambda p: (self.W[k_bot][p], p))
            self.bottom_row_scale(k_bot, p, 1 / Mpp[i][p][a])
            for j in cand:
                if j != p:
                    self.bottom_row_add(k_bot, j, p, -Mpp[i][j][a])
            for l in range(r_top):
                if l != a and Mpp[i][p][l] != 0:
                    x = Mpp[i][p][l]
                    self.col_add(i, a, l, -x)
                    self.cascade_row_add(i, a, l, x)
            done_rows.add(p)
            done_cols.add(a)
            match[a] = p
        if len(done_rows) != len(rest):
            raise RankConditionViolated(f"M_dblprime[{i + 1}] lost full row rank")

        # E) reorder the rows of the next component: matched strands first
        order = [match[a] for a in range(r_top) if a in match]
        order += sorted(k_pivot, key=lambda p: k_pivot[p])
        new_keys = [(self.W[k_bot][match[a]],) + self.keys[i][a] for a in range(r_top) if a in match]
        new_keys += [(self.W[k_bot][p], END) for p in sorted(k_pivot, key=lambda p: k_pivot[p])]
        self.row_permute(k_bot, order)
        self.keys[k_bot] = new_keys

    def run(self):
        for i in range(self.s - 1):
            self.process_node(i)
        self._verify_normal_form()

    def _verify_normal_form(self):
        for i in range(self.s - 1):
            for M in (self.Mp[i], self.Mpp[i]):
                for row in M:
                    nz = [x for x in row if x != 0]
                    if len(nz) != 1 or nz[0] != 1:
                        raise AssertionError(f"node {i + 1} is not in 0/1 normal form")
            for q in range(self.node_dims[i]):
                top = sum(1 for row in self.Mp[i] if row[q] != 0)
                bot = sum(1 for row in self.Mpp[i] if row[q] != 0)
                if top > 1 or bot > 1 or top + bot == 0:
                    raise AssertionError(f"node {i + 1} is not in 0/1 normal form")

    def strands(self):
        """Follow the 0/1 gluings and return the interval line bundles."""
        right = {}
        has_left = set()
        for i in range(self.s - 1):
            for q in range(self.node_dims[i]):
                a = next((a for a, row in enumerate(self.Mp[i]) if row[q] != 0), None)
                p = next((p for p, row in enumerate(self.Mpp[i]) if row[q] != 0), None)
                if a is not None and p is not None:
                    right[(i, a)] = p
                    has_left.add((i + 1, p))
        out = []
        for k in range(self.s):
            for j in range(len(self.W[k])):
                if (k, j) in has_left:
                    continue
                degrees = [self.W[k][j]]
                node, row = k, j
                while (node, row) in right:
                    row = right[(node, row)]
                    node += 1
                    degrees.append(self.W[node][row])
                out.append(IntervalLineBundle(k + 1, node + 1, tuple(degrees)))
        return sorted(out)

    def to_chain_data(self, template: ChainData) -> ChainData:
        return ChainData(
            template.s,
            template.ranks,
            template.node_dims,
            self.W,
            self.Mp,
            self.Mpp,
            template.field,
        )


def reduce_chain(data: ChainData):
    """Reduce vector-bundle gluing data to identity matrices.

    Returns ``(transformed, bundles)`` where bundles is the sorted list of
    vector-degrees of the line bundle summands.
    """
    _check_vector_bundle(data)
    red = _Reducer(data)
    red.run()
    bundles = sorted(b.degrees for b in red.strands())
    out = red.to_chain_data(data)
    for i in range(data.s - 1):
        if not (linalg.is_identity(out.M_prime[i]) and linalg.is_identity(out.M_dblprime[i])):
            raise AssertionError("vector bundle reduction did not reach identity matrices")
    return out, bundles


def decompose_torsion_free(data: ChainData):
    """Split torsion-free gluing data into line bundles on sub-chains."""
    _check_torsion_free(data)
    red = _Reducer(data)
    red.run()
    return red.strands()


def reduce_torsion_free(data: ChainData):
    """Like :func:`decompose_torsion_free` but also return the 0/1 normal form."""
    _check_torsion_free(data)
    red = _Reducer(data)
    red.run()
    return red.to_chain_data(data), red.strands()


def _random_row_transform(weights, field, rng):
    """Random (T', T'') on one component: shared invertible blocks on equal
    weights, independent entries where the receiving row has larger weight."""
    r = len(weights)
    Tp = [[field.zero] * r for _ in range(r)]
    Tpp = [[field.zero] * r for _ in range(r)]
    blocks = {}
    for j, w in enumerate(weights):
        blocks.setdefault(w, []).append(j)
    for idx in blocks.values():
        D = linalg.random_invertible(len(idx), field, rng)
        for a, j in enumerate(idx):
            for b, l in enumerate(idx):
                Tp[j][l] = field(D[a][b])
                Tpp[j][l] = field(D[a][b])
    for j in range(r):
        for l in range(r):
            if weights[j] > weights[l]:
                Tp[j][l] = field.random_element(rng)
                Tpp[j][l] = field.random_element(rng)
    return Tp, Tpp


def random_admissible_transform(data: ChainData, seed: int) -> ChainData:
    """Apply random admissible row and column operations (and row
    relabelings); the result defines an isomorphic sheaf."""
    rng = random.Random(seed)
    f = data.field
    s = data.s
    Mp = [[list(r) for r in M] for M in data.M_prime]
    Mpp = [[list(r) for r in M] for M in data.M_dblprime]
    W = [list(w) for w in data.weights]
    for k in range(s):
        Tp, Tpp = _random_row_transform(W[k], f, rng)
        if k < s - 1:
            Mp[k] = linalg.matmul(Tp, Mp[k], f) if Mp[k] else Mp[k]
        if k > 0:
            Mpp[k - 1] = linalg.matmul(Tpp, Mpp[k - 1], f) if Mpp[k - 1] else Mpp[k - 1]
        order = list(range(len(W[k])))
        rng.shuffle(order)
        W[k] = [W[k][t] for t in order]
        if k < s - 1:
            Mp[k] = [Mp[k][t] for t in order]
        if k > 0:
            Mpp[k - 1] = [Mpp[k - 1][t] for t in order]
    for i in range(s - 1):
        m = data.node_dims[i]
        S = linalg.random_invertible(m, f, rng)
        S = [[f(x) for x in row] for row in S]
        if Mp[i] and m:
            Mp[i] = linalg.matmul(Mp[i], S, f)
        if Mpp[i] and m:
            Mpp[i] = linalg.matmul(Mpp[i], S, f)
    return ChainData(s, data.ranks, data.node_dims, W, Mp, Mpp, f)


def identity_chain(weights, field=QQ) -> ChainData:
    """Vector-bundle data with identity gluings and the given weights."""
    s = len(weights)
    r = len(weights[0])
    I = linalg.identity(r, field)
    return ChainData(s, [r] * s, [r] * (s - 1), weights, [I] * (s - 1), [I] * (s - 1), field)


def random_chain_data(s, r, field, rng, lo=-3, hi=3) -> ChainData:
    """Random vector-bundle data with invertible gluings."""
    weights = [[rng.randint(lo, hi) for _ in range(r)] for _ in range(s)]
    Mp = [[[field(x) for x in row] for row in linalg.random_invertible(r, field, rng)] for _ in range(s - 1)]
    Mpp = [[[field(x) for x in row] for row in linalg.random_invertible(r, field, rng)] for _ in range(s - 1)]
    return ChainData(s, [r] * s, [r] * (s - 1), weights, Mp, Mpp, field)


def chain_from_intervals(s: int, intervals, field=QQ) -> ChainData:
    """Normal-form gluing data for a direct sum of interval line bundles.

    Each interval contributes one row on every component it covers; at a
    node it covers on both sides it gets a matched column, at a node where
    it starts or stops it gets a column of its own.
    """
    intervals = list(intervals)
    rows = [[] for _ in range(s)]
    for idx, b in enumerate(intervals):
        if not 1 <= b.start <= b.end <= s or len(b.degrees) != b.end - b.start + 1:
            raise ValidationError(f"bad interval {b!r}")
        for k in range(b.start - 1, b.end):
            rows[k].append(idx)
    weights = [[intervals[idx].degrees[k - intervals[idx].start + 1] for idx in rows[k]] for k in range(s)]
    Mp, Mpp, dims = [], [], []
    for i in range(s - 1):
        top, bot = rows[i], rows[i + 1]
        cols = []
        for idx in top:
            cols.append((top.index(idx), bot.index(idx) if idx in bot else None))
        for idx in bot:
            if idx not in top:
                cols.append((None, bot.index(idx)))
        m = len(cols)
        A = [[field.zero] * m for _ in top]
        B = [[field.zero] * m for _ in bot]
        for q, (a, b) in enumerate(cols):
            if a is not None:
                A[a][q] = field.one
            if b is not None:
                B[b][q] = field.one
        Mp.append(A)
        Mpp.append(B)
        dims.append(m)
    return ChainData(s, [len(r) for r in rows], dims, weights, Mp, Mpp, field)


def random_intervals(s, count, rng, lo=-3, hi=3):
    out = []
    for _ in range(count):
        a = rng.randint(1, s)
        b = rng.randint(a, s)
        out.append(IntervalLineBundle(a, b, tuple(rng.randint(lo, hi) for _ in range(b - a + 1))))
    return sorted(out)
