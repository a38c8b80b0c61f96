"""Wildness gadgets: embedding modules over a finitely generated algebra
into pairs of matrices, brute-force Hom spaces, and explicit matrix
families whose invertibility can be checked exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from enum import Enum

from . import linalg
from .errors import (
    DuplicateLambda,
    GeneratorCountMismatch,
    MissingParameter,
    SizeMismatch,
    ValidationError,
)
from .field import QQ


def _freeze(M, field):
    return tuple(tuple(field(x) for x in row) for row in M)


def _check_square(M, n, what):
    if len(M) != n or any(len(row) != n for row in M):
        raise SizeMismatch(f"{what} must be {n}x{n}")


@dataclass(frozen=True)
class ModulePresentation:
    """An n-dimensional module given by the action of m generators."""

    n: int
    mats: tuple
    field: object = dc_field(default=QQ, compare=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValidationError("dimension must be a non-negative integer")
        for i, M in enumerate(self.mats):
            _check_square(M, self.n, f"generator {i + 1}")
        object.__setattr__(self, "mats", tuple(_freeze(M, self.field) for M in self.mats))

    @property
    def m(self) -> int:
        return len(self.mats)

    def to_json(self):
        f = self.field
        return {"n": self.n, "mats": [[[f.format(x) for x in row] for row in M] for M in self.mats]}

    @classmethod
    def from_json(cls, data, field=QQ):
        try:
            n, mats = data["n"], data["mats"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"module presentation needs 'n' and 'mats': {exc}") from exc
        return cls(n, tuple(_parse_matrix(M, field) for M in mats), field)


def _parse_matrix(M, field):
    if not isinstance(M, list) or any(not isinstance(row, list) for row in M):
        raise ValidationError("a matrix must be a list of rows")
    return [[field.parse(x) for x in row] for row in M]


@dataclass(frozen=True)
class Sigma2Module:
    dim: int
    A: tuple
    B: tuple
    field: object = dc_field(default=QQ, compare=False)

    def __post_init__(self):
        _check_square(self.A, self.dim, "A")
        _check_square(self.B, self.dim, "B")
        object.__setattr__(self, "A", _freeze(self.A, self.field))
        object.__setattr__(self, "B", _freeze(self.B, self.field))

    def as_presentation(self) -> ModulePresentation:
        return ModulePresentation(self.dim, (self.A, self.B), self.field)

    def to_json(self):
        f = self.field
        fmt = lambda M: [[f.format(x) for x in row] for row in M]
        return {"dim": self.dim, "A": fmt(self.A), "B": fmt(self.B)}


def embed_sigma2(M: ModulePresentation, lambdas=None) -> Sigma2Module:
    """A = diag(l_1 I, ..., l_m I); B has A_1..A_m on the diagonal and
    identity blocks just above it."""
    f = M.field
    m, n = M.m, M.n
    if lambdas is None:
        if f is not QQ and f.p < m:
            raise ValidationError(f"F_{f.p} has fewer than {m} distinct elements")
        lambdas = [f(i) for i in range(m)]
    lambdas = [f(x) for x in lambdas]
    if len(lambdas) != m:
        raise SizeMismatch(f"need {m} lambdas, got {len(lambdas)}")
    if len(set(lambdas)) != m:
        raise DuplicateLambda("lambdas must be pairwise distinct")
    N = m * n
    A = linalg.zeros(N, N, f)
    B = linalg.zeros(N, N, f)
    for k in range(m):
        for i in range(n):
            A[k * n + i][k * n + i] = lambdas[k]
            for j in range(n):
                B[k * n + i][k * n + j] = M.mats[k][i][j]
            if k + 1 < m:
                B[k * n + i][(k + 1) * n + i] = f.one
    return Sigma2Module(N, A, B, f)


def _intertwiner_system(src, dst, n_src, n_dst, field):
    """Rows of the linear system S * X = Y * S for all pairs (X, Y), with S
    an n_dst x n_src matrix flattened row-major.  Entries are raw ints mod p
    or Fractions, which keeps assembly cheap."""
    rows = []
    nv = n_dst * n_src
    for X, Y in zip(src, dst):
        X = linalg._lower(X, field)
        Y = linalg._lower(Y, field)
        for p in range(n_dst):
            for q in range(n_src):
                row = [0] * nv
                for k in range(n_src):
                    c = X[k][q]
                    if c:
                        row[p * n_src + k] += c
                for k in range(n_dst):
                    c = Y[p][k]
                    if c:
                        row[k * n_src + q] -= c
                rows.append(row)
    return rows, nv


def _hom_basis(src, dst, n_src, n_dst, field):
    rows, nv = _intertwiner_system(src, dst, n_src, n_dst, field)
    if nv == 0:
        return []
    return linalg.nullspace(rows, field, ncols=nv)


def _hom_dim(src, dst, n_src, n_dst, field):
    rows, nv = _intertwiner_system(src, dst, n_src, n_dst, field)
    if nv == 0:
        return 0
    return linalg.nullity(rows, field, ncols=nv)


def hom_dim(M: ModulePresentation, N: ModulePresentation) -> int:
    if M.m != N.m:
        raise GeneratorCountMismatch(f"{M.m} generators against {N.m}")
    return _hom_dim(M.mats, N.mats, M.n, N.n, M.field)


def hom_dim_sigma2(p: Sigma2Module, q: Sigma2Module) -> int:
    return _hom_dim((p.A, p.B), (q.A, q.B), p.dim, q.dim, p.field)


def is_isomorphic(M: ModulePresentation, N: ModulePresentation, seed: int = 0, samples: int = 20):
    """True, False, or None when no invertible intertwiner turned up in
    ``samples`` random draws (undetermined, not a proof of non-isomorphism)."""
    if M.m != N.m:
        raise GeneratorCountMismatch(f"{M.m} generators against {N.m}")
    if M.n != N.n:
        return False
    if M.n == 0:
        return True
    f = M.field
    basis = _hom_basis(M.mats, N.mats, M.n, N.n, f)
    if not basis:
        return False
    rng = random.Random(seed)
    n = M.n
    for _ in range(samples):
        coeffs = [f.random_element(rng) for _ in basis]
        v = [sum((c * b[i] for c, b in zip(coeffs, basis)), f.zero) for i in range(n * n)]
        S = [v[i * n:(i + 1) * n] for i in range(n)]
        if linalg.det(S, f) != 0:
            return True
    return None


class WitnessKind(str, Enum):
    GENUS = "GENUS"
    STEP71 = "STEP71"
    STEP72 = "STEP72"
    STEP73 = "STEP73"
    STEP74 = "STEP74"


@dataclass(frozen=True)
class WitnessMatrixSet:
    kind: WitnessKind
    parameters: tuple
    matrices: tuple
    invertible: tuple
    symbolic_labels: tuple = ()
    block_pattern: tuple = ()
    provenance: str = ""
    field: object = dc_field(default=QQ, compare=False)

    def matrix(self, name):
        return dict(self.matrices)[name]

    def to_json(self):
        f = self.field
        return {
            "kind": self.kind.value,
            "parameters": {k: f.format(v) for k, v in self.parameters},
            "matrices": {k: [[f.format(x) for x in row] for row in M] for k, M in self.matrices},
            "invertible": dict(self.invertible),
            "symbolic_labels": list(self.symbolic_labels),
            "block_pattern": [list(row) for row in self.block_pattern],
            "provenance": self.provenance,
        }


def _need(params, names, field):
    out = {}
    for name in names:
        if name not in params or params[name] is None:
            raise MissingParameter(f"missing value for {name}")
        out[name] = field(params[name])
    return out


def step71_matrix(z1, z2, field=QQ):
    o, z = field.one, field.zero
    return [[z, z, z, o], [z, z, o, o], [z, o, o, field(z1)], [o, z, o, field(z2)]]


def step72_matrix(z, alpha, field=QQ):
    """Unitriangular 7x7 matrix; z = (z1, ..., z5)."""
    f = field
    a = f(alpha)
    z1, z2, z3, z4, z5 = (f(x) for x in z)
    M = linalg.identity(7, f)
    M[0][4] = a
    M[1][2] = a
    M[2][3] = a * z1
    M[2][4] = a * z2
    M[3][5] = a * z3
    M[4][5] = a * z4
    M[5][6] = a * z5
    return M


def antidiagonal(n, field=QQ):
    M = linalg.zeros(n, n, field)
    for i in range(n):
        M[i][n - 1 - i] = field.one
    return M


def step73_matrices(z1, z2, field=QQ):
    o, z = field.one, field.zero
    second = [[o, o, field(z1), field(z2)], [z, o, o, o], [z, z, o, z], [z, z, z, o]]
    return antidiagonal(4, field), second


STEP74_ONES = (
    (5, 3), (6, 1), (7, 2), (9, 4), (10, 6), (10, 9), (11, 5),
    (11, 7), (11, 10), (12, 8), (13, 9), (13, 12), (14, 10), (14, 12),
)


def step74_matrices(z1, z2, field=QQ):
    """(u_24, u_34): the 14x14 reversal and the lower unitriangular t-matrix."""
    T = linalg.identity(14, field)
    for p, q in STEP74_ONES:
        T[p - 1][q - 1] = field.one
    T[12][10] = field(z1)
    T[13][10] = field(z2)
    return antidiagonal(14, field), T


GENUS_PATTERN = (("xi13*I", "xi14*I", "xi15*I"), ("xi23*I", "xi24*A", "xi25*B"))


def _is_invertible(M, field):
    return linalg.det(M, field) != 0


def witness(kind, params=None, field=QQ) -> WitnessMatrixSet:
    kind = WitnessKind(kind)
    params = dict(params or {})
    f = field
    if kind is WitnessKind.GENUS:
        mats = []
        used = []
        for name in ("A", "B"):
            if params.get(name) is not None:
                M = [[f(x) for x in row] for row in params[name]]
                mats.append((name, _freeze(M, f)))
        if len(mats) == 2 and len(mats[0][1]) != len(mats[1][1]):
            raise SizeMismatch("A and B must have the same size")
        if "n" in params:
            used.append(("n", f(params["n"])))
        labels = tuple(sorted({e.split("*")[0] for row in GENUS_PATTERN for e in row}))
        return WitnessMatrixSet(kind, tuple(used), tuple(mats), (), labels, GENUS_PATTERN, "genus > 1 extension pattern", f)

    if kind is WitnessKind.STEP71:
        p = _need(params, ("z1", "z2"), f)
        M = step71_matrix(p["z1"], p["z2"], f)
        mats = (("u_p1", _freeze(M, f)),)
        prov = "step 7.1, component at p_1"
    elif kind is WitnessKind.STEP72:
        p = _need(params, ("z1", "z2", "z3", "z4", "z5"), f)
        p["alpha"] = f(params.get("alpha", 1))
        M = step72_matrix([p[f"z{i}"] for i in range(1, 6)], p["alpha"], f)
        mats = (("u_p", _freeze(M, f)),)
        prov = "step 7.2, component at p"
    elif kind is WitnessKind.STEP73:
        p = _need(params, ("z1", "z2"), f)
        M1, M2 = step73_matrices(p["z1"], p["z2"], f)
        mats = (("u_p1", _freeze(M1, f)), ("u_p2", _freeze(M2, f)))
        prov = "step 7.3, components at p_1 and p_2"
    else:
        p = _need(params, ("z1", "z2"), f)
        U24, U34 = step74_matrices(p["z1"], p["z2"], f)
        mats = (("u_24", _freeze(U24, f)), ("u_34", _freeze(U34, f)))
        prov = "step 7.4, components u_24 and u_34"
    inv = tuple((name, _is_invertible(M, f)) for name, M in mats)
    return WitnessMatrixSet(kind, tuple(sorted(p.items())), mats, inv, (), (), prov, f)
