"""Indecomposable Cohen-Macaulay modules over simple elliptic, cusp and
Q-cusp surface singularities, listed as symbolic families.

A cusp singularity is given by the self-intersection numbers -b_i of the
cycle of exceptional curves.  Its non-free indecomposables come in
one-parameter families indexed by suitable sequences d (see
:func:`vbcm.cohom.is_suitable`) and a multiplicity m; the rank of a family
member is m * (r + n_d).  A Q-cusp is a quotient of a cusp by an
orientation-reversing involution sigma, which acts on band data by
d -> (d_1, d_rt, ..., d_2) and lambda -> 1/lambda.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd
import warnings

from .band import canonical_sequence, is_nonperiodic, rotate
from .cohom import is_suitable, pos_part, theta
from .errors import (
    LengthNotMultiple,
    NotCoprime,
    PreconditionError,
    RangeViolation,
    ValidationError,
    ZeroLambda,
)
from .field import QQ


class CuspAdvisoryWarning(UserWarning):
    """The self-intersection data may not come from an actual cusp."""


@dataclass(frozen=True)
class CuspSingularity:
    s: int
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(self.b))
        if self.s < 1 or len(self.b) != self.s:
            raise ValidationError(f"need {self.s} self-intersection numbers, got {len(self.b)}")
        if any(not isinstance(x, int) or x < 1 for x in self.b):
            raise ValidationError("every b_i must be a positive integer")
        if self.advisory:
            warnings.warn(self.advisory, CuspAdvisoryWarning, stacklevel=3)

    @property
    def advisory(self):
        """A note when b is outside the range known to come from a cusp."""
        if all(x >= 2 for x in self.b) and sum(x - 2 for x in self.b) > 0:
            return None
        return f"b={self.b}: expected all b_i >= 2 with sum(b_i - 2) > 0"


@dataclass(frozen=True)
class SimpleEllipticSingularity:
    b: int

    def __post_init__(self):
        if not isinstance(self.b, int) or self.b < 1:
            raise ValidationError("b must be a positive integer")


def sigma_sequence(d):
    d = tuple(d)
    return d[:1] + tuple(reversed(d[1:]))


@dataclass(frozen=True)
class QCuspData:
    t: int
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(self.b))
        if self.t < 1 or len(self.b) != self.t:
            raise ValidationError(f"need {self.t} self-intersection numbers")
        if any(not isinstance(x, int) or x < 1 for x in self.b):
            raise ValidationError("every b_i must be a positive integer")
        if sigma_sequence(self.b) != self.b:
            raise ValidationError(f"b={self.b} is not invariant under the reflection fixing the first component")

    def cover(self) -> CuspSingularity:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CuspAdvisoryWarning)
            return CuspSingularity(self.t, self.b)


@dataclass(frozen=True, order=True)
class CMModuleDescriptor:
    """One indecomposable module, or one family of them.

    ``variant`` is ``ring``, ``band``, ``special``, ``split`` (a summand of a
    restricted self-conjugate module) or ``elliptic_family``.
    ``lambda_excluded`` lists parameter values that are not allowed;
    ``lam`` is set when the parameter is fixed or sampled.
    """

    rank: int
    variant: str
    d: tuple = None
    m: int = None
    lambda_excluded: tuple = ()
    lam: str = None
    label: str = ""
    params: tuple = ()

    def to_json(self):
        out = {
            "variant": self.variant,
            "rank": self.rank,
            "d": list(self.d) if self.d is not None else None,
            "m": self.m,
            "lambda_excluded": list(self.lambda_excluded),
        }
        if self.lam is not None:
            out["lambda"] = self.lam
        if self.label:
            out["label"] = self.label
        for k, v in self.params:
            out[k] = v
        return out

    @classmethod
    def from_json(cls, data):
        known = {"variant", "rank", "d", "m", "lambda_excluded", "lambda", "label"}
        params = tuple(sorted((k, v) for k, v in data.items() if k not in known))
        d = data.get("d")
        return cls(
            rank=data["rank"],
            variant=data["variant"],
            d=tuple(d) if d is not None else None,
            m=data.get("m"),
            lambda_excluded=tuple(data.get("lambda_excluded", ())),
            lam=data.get("lambda"),
            label=data.get("label", ""),
            params=params,
        )


def _b_repeated(sing, n):
    return tuple(sing.b[i % sing.s] for i in range(n))


def n_d(d, sing: CuspSingularity) -> int:
    d = tuple(d)
    if not d or len(d) % sing.s:
        raise LengthNotMultiple(f"length {len(d)} is not a positive multiple of {sing.s}")
    B = _b_repeated(sing, len(d))
    return sum(pos_part(x - y + 1) for x, y in zip(d, B)) - theta(tuple(x - y for x, y in zip(d, B)))


def _candidate_sequences(sing: CuspSingularity, r: int, budget: int):
    """Non-negative sequences of length r*s that may have n_d <= budget.

    Entries with d_i - b_i > budget + 1 force n_d > budget, and a prefix is
    abandoned as soon as its runs of entries >= b_i already force too much
    (runs of d - B^r contribute at least sum - 1 each, and joining the first
    and last run around the cycle costs at most 1).
    """
    n = r * sing.s
    B = _b_repeated(sing, n)
    caps = [B[i] + budget + 1 for i in range(n)]
    d = [0] * n

    def rec(pos, closed, run_sum, in_run, last_zero_ones):
        if closed + (run_sum - 1 if run_sum > 0 else 0) - 1 > budget:
            return
        if pos == n:
            yield tuple(d)
            return
        for v in range(caps[pos] + 1):
            e = v - B[pos]
            # prune a linear occurrence of 0,1,...,1,0 early
            if v == 0 and last_zero_ones is not None and pos - last_zero_ones >= 1:
                continue
            if v == 0:
                lz = pos
            elif v == 1 and last_zero_ones is not None:
                lz = last_zero_ones
            else:
                lz = None
            d[pos] = v
            if e >= 0:
                yield from rec(pos + 1, closed, run_sum + e, True, lz)
            else:
                extra = (run_sum - 1 if run_sum > 0 else 0) if in_run else 0
                yield from rec(pos + 1, closed + extra, 0, False, lz)

    yield from rec(0, 0, 0, False, None)


def _band_families(sing: CuspSingularity, max_rank: int):
    """(d, r, n_d) for canonical suitable non-periodic d with r + n_d <= max_rank."""
    out = []
    for r in range(1, max_rank + 1):
        budget = max_rank - r
        for d in _candidate_sequences(sing, r, budget):
            if canonical_sequence(d, sing.s) != d:
                continue
            if not is_nonperiodic(d, sing.s) or not is_suitable(d):
                continue
            nd = n_d(d, sing)
            if r + nd <= max_rank:
                out.append((d, r, nd))
    return out


def _sample_lambda(excluded, field):
    if field is QQ:
        c = 2
        while str(c) + "/1" in excluded or str(c) in excluded:
            c += 1
        return field.format(field(c))
    for v in range(1, field.p):
        if field.format(field(v)) not in excluded:
            return field.format(field(v))
    return None


def _excluded(values, field):
    return tuple(field.format(field(v)) for v in values)


def enumerate_cm_cusp(sing: CuspSingularity, rank: int, sample_lambda: bool = False, field=QQ):
    if rank < 1:
        return []
    out = []
    if rank == 1:
        out.append(CMModuleDescriptor(rank=1, variant="ring", label="A"))
    for d, r, nd in _band_families(sing, rank):
        if rank % (r + nd):
            continue
        m = rank // (r + nd)
        excl = _excluded([0, 1] if d == sing.b else [0], field)
        lam = _sample_lambda(excl, field) if sample_lambda else None
        out.append(CMModuleDescriptor(rank=rank, variant="band", d=d, m=m, lambda_excluded=excl, lam=lam, label="M_d(m,lambda)"))
    if rank >= 2:
        out.append(
            CMModuleDescriptor(rank=rank, variant="special", d=sing.b, m=rank - 1, lam=field.format(field.one), label="M_B(m,1)")
        )
    return sorted(out, key=_sort_key)


def _sort_key(x: CMModuleDescriptor):
    order = {"ring": 0, "band": 1, "elliptic_family": 1, "split": 2, "special": 3}
    return (x.rank, order.get(x.variant, 9), x.d or (), x.m or 0, x.label, x.lam or "", x.params)


def rank_simple_elliptic(r: int, d: int, n: int, sing: SimpleEllipticSingularity) -> int:
    if r < 1 or n < 1:
        raise ValidationError("r and n must be positive")
    if gcd(r, d) != 1:
        raise NotCoprime(f"gcd({r}, {d}) != 1")
    if r > d:
        raise RangeViolation(f"need r <= d, got r={r}, d={d}")
    return n * (r + pos_part(d - sing.b * r))


def enumerate_cm_elliptic(sing: SimpleEllipticSingularity, rank: int):
    if rank < 1:
        return []
    b = sing.b
    out = []
    if rank == 1:
        out.append(CMModuleDescriptor(rank=1, variant="ring", label="A"))
    for n in range(1, rank + 1):
        if rank % n:
            continue
        k = rank // n
        for r in range(1, k + 1):
            if k == r:
                degrees = [d for d in range(r, b * r + 1) if gcd(r, d) == 1]
            else:
                d = b * r + (k - r)
                degrees = [d] if gcd(r, d) == 1 else []
            for d in degrees:
                excl = ("o",) if (r == 1 and d == b) else ()
                out.append(
                    CMModuleDescriptor(
                        rank=rank,
                        variant="elliptic_family",
                        m=n,
                        lambda_excluded=excl,
                        label="M_{r,d}(nx)",
                        params=(("degree", d), ("n", n), ("r", r)),
                    )
                )
    if rank >= 2:
        out.append(CMModuleDescriptor(rank=rank, variant="special", m=rank - 1, label="M_n"))
    return sorted(out, key=_sort_key)


def elliptic_family_count(sing: SimpleEllipticSingularity, m: int) -> int:
    """Number of (r, d) with r <= d, gcd(r, d) = 1 and r + (d - b r)^+ = m."""
    return sum(1 for x in enumerate_cm_elliptic(sing, m) if x.variant == "elliptic_family" and dict(x.params)["n"] == 1)


def sigma_act(d, m, lam, t: int, field=QQ):
    d = tuple(d)
    if lam == 0:
        raise ZeroLambda("lambda must be nonzero")
    if t < 1 or not d or len(d) % t:
        raise LengthNotMultiple(f"length {len(d)} is not a positive multiple of {t}")
    return sigma_sequence(d), m, field.one / field(lam)


def is_sigma_shift_symmetric(d, t: int) -> bool:
    d = tuple(d)
    if t < 1 or not d or len(d) % t:
        raise LengthNotMultiple(f"length {len(d)} is not a positive multiple of {t}")
    ds = sigma_sequence(d)
    return any(rotate(d, k) == ds for k in range(0, len(d), t))


def _orbit_representative(d, t):
    return min(canonical_sequence(d, t), canonical_sequence(sigma_sequence(d), t))


def enumerate_cm_qcusp(data: QCuspData, max_rank: int, sample_lambda: bool = False, field=QQ):
    """Families of indecomposables over the Q-cusp, up to cover rank ``max_rank``.

    ``rank`` in the descriptors is the rank over the cusp cover of the
    module being restricted; the split summands carry no finer rank data.
    """
    if field.characteristic == 2:
        raise PreconditionError("the Q-cusp description needs characteristic != 2")
    if max_rank < 1:
        return []
    sing = data.cover()
    t = data.t
    out = [
        CMModuleDescriptor(rank=1, variant="ring", label="A"),
        CMModuleDescriptor(rank=1, variant="ring", label="B^-"),
    ]
    seen = set()
    for d, r, nd in _band_families(sing, max_rank):
        rep = _orbit_representative(d, t)
        if rep in seen:
            continue
        seen.add(rep)
        symmetric = is_sigma_shift_symmetric(rep, t)
        width = r + nd
        for m in range(1, max_rank // width + 1):
            rank = m * width
            if symmetric:
                excl = _excluded([0, 1, -1], field)
                lam = _sample_lambda(excl, field) if sample_lambda else None
                out.append(CMModuleDescriptor(rank=rank, variant="band", d=rep, m=m, lambda_excluded=excl, lam=lam, label="N_d(m,lambda)"))
                for sign in (1, -1):
                    split_rank = m + 1 if (sign == 1 and rep == data.b) else rank
                    if split_rank > max_rank:
                        continue
                    for half in ("N'", "N''"):
                        out.append(
                            CMModuleDescriptor(
                                rank=split_rank,
                                variant="split",
                                d=rep,
                                m=m,
                                lam=field.format(field(sign)),
                                label=f"{half}_d(m,{'+1' if sign == 1 else '-1'})",
                            )
                        )
            else:
                excl = _excluded([0], field)
                lam = _sample_lambda(excl, field) if sample_lambda else None
                out.append(CMModuleDescriptor(rank=rank, variant="band", d=rep, m=m, lambda_excluded=excl, lam=lam, label="N_d(m,lambda)"))
    return sorted(out, key=_sort_key)
