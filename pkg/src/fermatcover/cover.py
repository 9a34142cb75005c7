"""Finite-level curve models of the generalized Fermat covers.

A level-n cover with deleted set M = {p_1..p_N} lives in P^{n+N} with the
defining rows

    x_1^k + x_2^k + x_3^k = 0
    p_i x_1^k + x_2^k + x_{3+i}^k = 0          (i = 1..N)
    lambda_j x_1^k + x_2^k + x_{3+N+j}^k = 0   (j = 1..n-2)

and projection u = -(x_2/x_1)^k.  The deck group is Z_k^{n+N} acting by
coordinate rotations; coordinate n+N+1 carries the derived generator.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

from .errors import ConfigError, DimensionError, DomainError

INF = complex(math.inf, 0.0)

DEFAULT_RESIDUAL_TOL = 1e-9


def is_infinite(u: complex) -> bool:
    return math.isinf(u.real) or math.isinf(u.imag)


def chordal(u: complex, v: complex) -> float:
    """Chordal distance on the Riemann sphere (diameter-1 normalization)."""
    if is_infinite(u) and is_infinite(v):
        return 0.0
    if is_infinite(u):
        return 1.0 / math.sqrt(1.0 + abs(v) ** 2)
    if is_infinite(v):
        return 1.0 / math.sqrt(1.0 + abs(u) ** 2)
    return abs(u - v) / math.sqrt((1.0 + abs(u) ** 2) * (1.0 + abs(v) ** 2))


def kth_roots(value: complex, k: int) -> list[complex]:
    """All k-th roots, principal first."""
    if value == 0:
        return [0j] * k
    principal = value ** (1.0 / k)
    w = cmath.exp(2j * cmath.pi / k)
    return [principal * w ** t for t in range(k)]


# ---------------------------------------------------------------------------
# projective points

@dataclass(frozen=True)
class ProjectivePoint:
    """Complex coordinate vector, normalized so the coordinate of largest
    modulus equals 1 (ties broken by lowest index)."""

    coords: tuple[complex, ...]

    def __post_init__(self):
        coords = tuple(complex(c) for c in self.coords)
        if not coords or not any(coords):
            raise DomainError("projective point needs a nonzero coordinate vector")
        best = max(range(len(coords)), key=lambda i: (abs(coords[i]), -i))
        scale = coords[best]
        object.__setattr__(self, "coords", tuple(c / scale for c in coords))

    def __len__(self) -> int:
        return len(self.coords)


def point_distance(p: ProjectivePoint, q: ProjectivePoint) -> float:
    """Scale-invariant sup distance: minimize over the residual unit scalar."""
    if len(p) != len(q):
        raise DimensionError("points live in different projective spaces")
    inner = sum(a * b.conjugate() for a, b in zip(p.coords, q.coords))
    phase = inner / abs(inner) if inner else 1.0
    return max(abs(a - phase * b) for a, b in zip(p.coords, q.coords))


# ---------------------------------------------------------------------------
# cover specifications

@dataclass(frozen=True)
class CoverSpec:
    """Validated description of a level-n truncation; build via make_cover."""

    k: int
    limit_points: tuple[complex, ...]
    deleted: tuple[complex, ...]
    branch_points: tuple[complex, ...]
    n: int
    residual_tol: float = DEFAULT_RESIDUAL_TOL

    @property
    def num_deleted(self) -> int:
        return len(self.deleted)

    @property
    def level(self) -> int:
        """Group level L = n + N; points have L+1 coordinates."""
        return self.n + self.num_deleted

    @property
    def num_coords(self) -> int:
        return self.level + 1

    @property
    def lambdas(self) -> tuple[complex, ...]:
        return self.branch_points[3:self.n + 1]

    @property
    def branch_prefix(self) -> tuple[complex, ...]:
        return self.branch_points[:self.n + 1]

    def fixed_bearing_indices(self) -> frozenset[int]:
        """Generator indices with fixed points: all but the deleted block."""
        deleted = set(range(4, self.num_deleted + 4))
        return frozenset(j for j in range(1, self.level + 2) if j not in deleted)

    def rows(self) -> list[tuple[complex, int]]:
        """(coefficient, free 0-based coordinate index) per defining row."""
        out = [(1 + 0j, 2)]
        for i, p in enumerate(self.deleted, start=1):
            out.append((p, 2 + i))
        for j, lam in enumerate(self.lambdas, start=1):
            out.append((lam, 2 + self.num_deleted + j))
        return out

    def radicands(self, u: complex) -> list[complex | None]:
        """Per-coordinate radicand of the fiber over u (None marks x_1 = 1)."""
        vals: list[complex | None] = [None, -u, u - 1]
        vals.extend(u - p for p in self.deleted)
        vals.extend(u - lam for lam in self.lambdas)
        return vals

    def generator_for_branch_index(self, bi: int) -> int:
        """Generator family whose fixed points project to branch_points[bi]."""
        if not 0 <= bi <= self.n:
            raise DimensionError(f"branch index {bi} out of range")
        if bi < 3:
            return bi + 1
        return self.num_deleted + bi + 1

    def branch_value_for_generator(self, j: int) -> complex:
        if j in (1, 2, 3):
            return (INF, 0j, 1 + 0j)[j - 1]
        if 4 <= j <= self.num_deleted + 3:
            return self.deleted[j - 4]
        if self.num_deleted + 4 <= j <= self.level + 1:
            return self.lambdas[j - self.num_deleted - 4]
        raise DimensionError(f"generator index {j} out of range")

    def special_points(self) -> tuple[complex, ...]:
        return self.branch_prefix + self.limit_points


def make_cover(k: int, limit_points, deleted, branch_points, n: int,
               residual_tol: float = DEFAULT_RESIDUAL_TOL) -> CoverSpec:
    """Validate raw inputs into a CoverSpec.

    branch_points must start with inf, 0, 1 and carry at least n-2 lambdas
    (longer lists are allowed; the prefix of length n+1 is the truncation).
    """
    if k < 2:
        raise ConfigError(f"degree k must be >= 2, got {k}")
    if n < 3:
        raise ConfigError(f"truncation level must be >= 3, got {n}")
    branch = tuple(complex(b) for b in branch_points)
    if len(branch) < n + 1:
        raise ConfigError(f"need at least {n + 1} branch points for level {n}")
    if not (is_infinite(branch[0]) and branch[1] == 0 and branch[2] == 1):
        raise ConfigError("branch list must begin with inf, 0, 1")
    limits = tuple(complex(q) for q in limit_points)
    for q in limits:
        if is_infinite(q):
            raise ConfigError("limit points must be finite once inf,0,1 are branch points")
    if len(set(limits)) != len(limits):
        raise ConfigError("limit points must be pairwise distinct")
    dels = tuple(complex(p) for p in deleted)
    for p in dels:
        if p not in limits:
            raise ConfigError(f"deleted point {p} is not a limit point")
    if len(set(dels)) != len(dels):
        raise ConfigError("deleted points must be pairwise distinct")
    prefix = branch[:n + 1]
    finite_prefix = prefix[1:]
    for i, b in enumerate(finite_prefix):
        if is_infinite(b):
            raise ConfigError("only the first branch point may be inf")
        for c in finite_prefix[i + 1:]:
            if b == c:
                raise ConfigError(f"repeated branch point {b}")
    for lam in branch[3:]:
        if lam in (0, 1):
            raise ConfigError("lambda values must avoid 0 and 1")
    for b in branch:
        if any(chordal(b, q) == 0.0 for q in limits):
            raise ConfigError(f"branch point {b} collides with a limit point")
    for b in prefix:
        for q in limits:
            if chordal(b, q) < 1e-12:
                raise ConfigError(f"branch prefix point {b} too close to limit point {q}")
    return CoverSpec(k, limits, dels, branch, n, residual_tol)


def truncate_spec(spec: CoverSpec, n: int) -> CoverSpec:
    if not 3 <= n <= spec.n:
        raise DimensionError(f"cannot truncate level {spec.n} to {n}")
    return CoverSpec(spec.k, spec.limit_points, spec.deleted, spec.branch_points,
                     n, spec.residual_tol)


# ---------------------------------------------------------------------------
# residuals, deck action, projection

@dataclass(frozen=True)
class CurveResidual:
    value: float
    rows: tuple[float, ...]


def residual(spec: CoverSpec, p: ProjectivePoint) -> CurveResidual:
    """Max over defining rows of |row| at the normalized coordinates."""
    if len(p) != spec.num_coords:
        raise DimensionError(f"point has {len(p)} coordinates, spec wants {spec.num_coords}")
    k = spec.k
    x1k = p.coords[0] ** k
    x2k = p.coords[1] ** k
    rows = tuple(abs(coef * x1k + x2k + p.coords[idx] ** k) for coef, idx in spec.rows())
    return CurveResidual(max(rows), rows)


def apply_generator(spec: CoverSpec, j: int, p: ProjectivePoint) -> ProjectivePoint:
    """Multiply coordinate j by the primitive k-th root of unity; j may be
    level+1 (the derived generator)."""
    if not 1 <= j <= spec.num_coords:
        raise DimensionError(f"generator index {j} out of range")
    if len(p) != spec.num_coords:
        raise DimensionError("point/spec coordinate mismatch")
    w = cmath.exp(2j * cmath.pi / spec.k)
    coords = list(p.coords)
    coords[j - 1] *= w
    return ProjectivePoint(tuple(coords))


def apply_element(spec: CoverSpec, g, p: ProjectivePoint) -> ProjectivePoint:
    """Apply a deck-group element (exponents act on coordinates 1..L)."""
    if g.k != spec.k or g.level != spec.level:
        raise DimensionError("element does not match the spec's deck group")
    w = cmath.exp(2j * cmath.pi / spec.k)
    coords = list(p.coords)
    for c, e in enumerate(g.exponents):
        if e:
            coords[c] *= w ** e
    return ProjectivePoint(tuple(coords))


def project(spec: CoverSpec, p: ProjectivePoint, tol: float | None = None) -> complex:
    """The covering map -(x_2/x_1)^k; points with x_1 = 0 go to inf."""
    tol = spec.residual_tol if tol is None else tol
    res = residual(spec, p)
    if res.value > tol:
        raise DomainError(f"residual {res.value:.3e} above tolerance {tol:.1e}")
    x1, x2 = p.coords[0], p.coords[1]
    if abs(x1) < 1e-13:
        return INF
    return -((x2 / x1) ** spec.k)


def fixed_points(spec: CoverSpec, j: int) -> list[ProjectivePoint]:
    """Closed-form fixed locus of the generator family a_j.

    Deleted-set indices 4..N+3 return the empty list (their fixed points lie
    over removed limit points).  Every other admissible j yields k^{L-1}
    points, enumerated over all root choices.
    """
    if not 1 <= j <= spec.num_coords:
        raise DimensionError(f"generator index {j} out of range")
    N = spec.num_deleted
    if 4 <= j <= N + 3:
        return []
    k = spec.k
    if j == 1:
        # x_1 = 0, x_2 = 1: every remaining coordinate is a k-th root of -1
        radicands: list[complex | None] = [0j, None] + [-1 + 0j] * (spec.num_coords - 2)
        anchor = 1
    else:
        b = spec.branch_value_for_generator(j)
        radicands = []
        for c, r in enumerate(spec.radicands(b)):
            radicands.append(None if c == 0 else r)
        radicands[j - 1] = 0j
        anchor = 0
    free = [c for c, r in enumerate(radicands) if r is not None and r != 0]
    choices = [kth_roots(radicands[c], k) for c in free]
    points = []
    for combo in itertools.product(*choices):
        coords = [0j] * spec.num_coords
        coords[anchor] = 1 + 0j
        for c, val in zip(free, combo):
            coords[c] = val
        points.append(ProjectivePoint(tuple(coords)))
    return points


# ---------------------------------------------------------------------------
# genus

def genus_formula(k: int, n: int) -> int:
    """Riemann-Hurwitz genus of the level-n cover: 1 + k^{n-1}((k-1)(n-1)-2)/2."""
    if k < 2 or n < 2:
        raise DimensionError("genus formula needs k >= 2 and n >= 2")
    num = k ** (n - 1) * ((k - 1) * (n - 1) - 2)
    if num % 2:
        raise DimensionError("non-integer genus (invalid input)")
    return 1 + num // 2


def is_hyperbolic(k: int, n: int) -> bool:
    return (k - 1) * (n - 1) > 2
