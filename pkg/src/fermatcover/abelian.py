"""Exact algebra of the deck groups Z_k^L.

Elements are exponent vectors for the stored generators a_1..a_L; the derived
generator a_{L+1} = (a_1 ... a_L)^{-1} is never stored.  Subgroups carry a
canonical (Howell) generator matrix over Z/k, valid for composite k, which
makes equality, membership, cardinality and index exact integer computations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DimensionError, FermatCoverError


# ---------------------------------------------------------------------------
# elements

@dataclass(frozen=True)
class GroupElement:
    """Element a_1^{e_1} ... a_L^{e_L} of Z_k^L, exponents reduced mod k."""

    k: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.k < 2:
            raise DimensionError(f"modulus must be >= 2, got {self.k}")
        object.__setattr__(self, "exponents", tuple(e % self.k for e in self.exponents))

    @property
    def level(self) -> int:
        return len(self.exponents)

    def is_identity(self) -> bool:
        return not any(self.exponents)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.k, tuple(-e for e in self.exponents))

    def power(self, t: int) -> "GroupElement":
        return GroupElement(self.k, tuple(t * e for e in self.exponents))

    def order(self) -> int:
        return element_order(self)


def identity(k: int, level: int) -> GroupElement:
    return GroupElement(k, (0,) * level)


def generator(k: int, level: int, j: int) -> GroupElement:
    """a_j at the given level; j = level+1 yields the derived generator."""
    if not 1 <= j <= level + 1:
        raise DimensionError(f"generator index {j} out of range at level {level}")
    if j == level + 1:
        return GroupElement(k, (k - 1,) * level)
    return GroupElement(k, tuple(1 if c == j - 1 else 0 for c in range(level)))


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """Componentwise sum mod k; operands must share modulus and level."""
    if g.k != h.k:
        raise DimensionError(f"modulus mismatch: {g.k} vs {h.k}")
    if g.level != h.level:
        raise DimensionError(f"level mismatch: {g.level} vs {h.level}")
    return GroupElement(g.k, tuple(a + b for a, b in zip(g.exponents, h.exponents)))


def element_order(g: GroupElement) -> int:
    """Least t >= 1 with t*g = 0, i.e. lcm over coordinates of k/gcd(e, k)."""
    order = 1
    for e in g.exponents:
        if e:
            order = math.lcm(order, g.k // math.gcd(e, g.k))
    return order


# ---------------------------------------------------------------------------
# row reduction over Z/k (Howell form; correct for composite k)

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _unit_scaling(g: int, k: int) -> int:
    """Unit u mod k with u*g == gcd(g, k) mod k (pivot normalization)."""
    d = math.gcd(g, k)
    kd = k // d
    gp = (g // d) % kd if kd > 1 else 0
    u = pow(gp, -1, kd) if kd > 1 else 1
    while math.gcd(u, k) != 1:
        u += kd
    return u % k


def _pivot(row: Sequence[int]) -> int:
    for c, x in enumerate(row):
        if x:
            return c
    raise ValueError("zero row has no pivot")


def _howell(rows: Iterable[Sequence[int]], k: int, length: int) -> tuple[tuple[int, ...], ...]:
    pending = []
    for r in rows:
        if len(r) != length:
            raise DimensionError(f"row length {len(r)} != {length}")
        rr = [int(x) % k for x in r]
        if any(rr):
            pending.append(rr)
    result: list[list[int]] = []
    for col in range(length):
        nz = [r for r in pending if r[col]]
        rest = [r for r in pending if not r[col]]
        if nz:
            piv = nz[0]
            for r in nz[1:]:
                g, s, t = _xgcd(piv[col], r[col])
                u, v = piv[col] // g, r[col] // g
                comb = [(s * a + t * b) % k for a, b in zip(piv, r)]
                elim = [(u * b - v * a) % k for a, b in zip(piv, r)]
                piv = comb
                if any(elim):
                    rest.append(elim)
            piv = [(x * _unit_scaling(piv[col], k)) % k for x in piv]
            result.append(piv)
            d = piv[col]
            ann = [((k // d) * x) % k for x in piv]
            if any(ann):
                rest.append(ann)
        pending = rest
    # reduce entries above each pivot into [0, pivot)
    for i in range(1, len(result)):
        col = _pivot(result[i])
        d = result[i][col]
        for j in range(i):
            q = result[j][col] // d
            if q:
                result[j] = [(a - q * b) % k for a, b in zip(result[j], result[i])]
    return tuple(tuple(r) for r in result)


def _reduce_vector(vec: Sequence[int], rows: Sequence[Sequence[int]], k: int) -> tuple[int, ...]:
    v = [int(x) % k for x in vec]
    for r in rows:
        col = _pivot(r)
        d = r[col]
        if v[col] % d == 0:
            q = v[col] // d
            if q:
                v = [(a - q * b) % k for a, b in zip(v, r)]
    return tuple(v)


# ---------------------------------------------------------------------------
# subgroups

@dataclass(frozen=True)
class Subgroup:
    """Subgroup of Z_k^L given by generators plus a canonical Howell matrix."""

    k: int
    level: int
    generators: tuple[GroupElement, ...]
    canonical_form: tuple[tuple[int, ...], ...] = field(compare=True)

    def contains(self, g: GroupElement) -> bool:
        if g.k != self.k or g.level != self.level:
            raise DimensionError("element does not match subgroup modulus/level")
        return not any(_reduce_vector(g.exponents, self.canonical_form, self.k))

    def cardinality(self) -> int:
        size = 1
        for row in self.canonical_form:
            size *= self.k // row[_pivot(row)]
        return size

    def index(self) -> int:
        return self.k ** self.level // self.cardinality()

    def elements(self) -> list[GroupElement]:
        """Full enumeration; only sensible at desk scale."""
        out = []
        ranges = [range(self.k // row[_pivot(row)]) for row in self.canonical_form]
        for combo in itertools.product(*ranges):
            v = [0] * self.level
            for t, row in zip(combo, self.canonical_form):
                for c in range(self.level):
                    v[c] = (v[c] + t * row[c]) % self.k
            out.append(GroupElement(self.k, tuple(v)))
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.k == other.k
            and self.level == other.level
            and self.canonical_form == other.canonical_form
        )

    def __hash__(self) -> int:
        return hash((self.k, self.level, self.canonical_form))


def subgroup_span(gens: Sequence[GroupElement], *, k: int | None = None,
                  level: int | None = None) -> Subgroup:
    """Span of the given elements; pass k and level explicitly when empty."""
    if gens:
        k = gens[0].k if k is None else k
        level = gens[0].level if level is None else level
        for g in gens:
            if g.k != k or g.level != level:
                raise DimensionError("inconsistent modulus/level among generators")
    if k is None or level is None:
        raise DimensionError("empty generating set needs explicit k and level")
    rows = [g.exponents for g in gens]
    canon = _howell(rows, k, level)
    sub = Subgroup(k, level, tuple(gens), canon)
    for g in gens:
        if not sub.contains(g):
            raise FermatCoverError("canonical form lost a generator (internal bug)")
    return sub


def subgroup_index(sub: Subgroup) -> int:
    return sub.index()


def full_group(k: int, level: int) -> Subgroup:
    return subgroup_span([generator(k, level, j) for j in range(1, level + 1)],
                         k=k, level=level)


# ---------------------------------------------------------------------------
# order-two characters and their kernels

@dataclass(frozen=True)
class TwoGroupCharacter:
    """Homomorphism Z_2^L -> Z_2^m given by the image bit-vector of each a_j.

    ``torsion_indices`` lists the generator indices that must map to nontrivial
    targets (the fixed-point-bearing ones); the constructor enforces this and
    surjectivity.
    """

    level: int
    rank: int
    assignments: tuple[tuple[int, ...], ...]
    torsion_indices: frozenset[int] = frozenset()
    bits: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.assignments) != self.level:
            raise DimensionError("one assignment per stored generator required")
        for a in self.assignments:
            if len(a) != self.rank or any(b not in (0, 1) for b in a):
                raise DimensionError("assignments must be bit-vectors of length m")
        if not self.is_surjective():
            raise FermatCoverError("character is not surjective onto Z_2^m")
        for j in self.torsion_indices:
            if not any(self.assignments[j - 1]):
                raise FermatCoverError(f"torsion generator a_{j} maps to the identity")

    def is_surjective(self) -> bool:
        return _gf2_rank([list(a) for a in self.assignments]) == self.rank

    def apply(self, g: GroupElement) -> tuple[int, ...]:
        if g.k != 2 or g.level != self.level:
            raise DimensionError("character defined on Z_2^level only")
        img = [0] * self.rank
        for e, a in zip(g.exponents, self.assignments):
            if e:
                img = [(x + y) % 2 for x, y in zip(img, a)]
        return tuple(img)


def hyperelliptic_character(num_deleted: int, bits: Sequence[int], level: int) -> TwoGroupCharacter:
    """The rank-one character sending every fixed-bearing a_j to x and the
    deleted-set generator a_{3+i} to x^{bits[i]}."""
    if len(bits) != num_deleted:
        raise DimensionError(f"need {num_deleted} bits, got {len(bits)}")
    if level < num_deleted + 3:
        raise DimensionError("level too small to hold the deleted block")
    assignments = []
    torsion = []
    for j in range(1, level + 1):
        if 4 <= j <= num_deleted + 3:
            assignments.append((int(bits[j - 4]) % 2,))
        else:
            assignments.append((1,))
            torsion.append(j)
    return TwoGroupCharacter(level, 1, tuple(assignments), frozenset(torsion),
                             tuple(int(b) % 2 for b in bits))


def two_rank_character_from_parts(parts: Sequence[Iterable[int]], level: int) -> TwoGroupCharacter:
    """Z_2^2-valued character from a partition of {1..level} into three parts
    mapping to the three involutions (1,0), (0,1) and (1,1)."""
    if len(parts) != 3:
        raise DimensionError("exactly three parts required")
    targets = ((1, 0), (0, 1), (1, 1))
    assign: dict[int, tuple[int, int]] = {}
    for part, target in zip(parts, targets):
        for j in part:
            if j in assign:
                raise FermatCoverError(f"generator index {j} in two parts")
            assign[j] = target
    if set(assign) != set(range(1, level + 1)):
        raise FermatCoverError("parts must cover every generator index exactly once")
    assignments = tuple(assign[j] for j in range(1, level + 1))
    return TwoGroupCharacter(level, 2, assignments, frozenset(range(1, level + 1)))


def _gf2_rank(rows: list[list[int]]) -> int:
    rows = [r[:] for r in rows if any(r)]
    rank = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def kernel_of_character(theta: TwoGroupCharacter) -> Subgroup:
    """Kernel as a subgroup of Z_2^level; has index exactly 2^rank."""
    if not theta.is_surjective():
        raise FermatCoverError("kernel requested for a non-surjective character")
    # nullspace of the rank x level matrix over GF(2)
    matrix = [[theta.assignments[j][r] for j in range(theta.level)] for r in range(theta.rank)]
    rows = [r[:] for r in matrix]
    pivots: list[int] = []
    rank = 0
    for col in range(theta.level):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
    free_cols = [c for c in range(theta.level) if c not in pivots]
    basis = []
    for fc in free_cols:
        v = [0] * theta.level
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = rows[r][fc] % 2
        basis.append(GroupElement(2, tuple(v)))
    return subgroup_span(basis, k=2, level=theta.level)


# ---------------------------------------------------------------------------
# freeness criterion

def acts_freely(g: GroupElement, fixed_bearing_indices: Iterable[int]) -> bool:
    """True iff g is not a power of a single a_j with j fixed-bearing.

    The index set may include level+1, meaning the derived generator, whose
    powers are the constant nonzero exponent vectors.
    """
    if g.is_identity():
        raise FermatCoverError("freeness is undefined for the identity")
    fb = set(fixed_bearing_indices)
    support = [c for c, e in enumerate(g.exponents) if e]
    if len(support) == 1 and (support[0] + 1) in fb:
        return False
    if (g.level + 1) in fb and len(set(g.exponents)) == 1:
        return False  # constant nonzero vector = power of the derived generator
    return True
