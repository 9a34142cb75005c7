"""Fibers, analytic continuation of lifts, loop monodromy and a genus oracle.

Lifts are tracked coordinate by coordinate: along a path u(t) each coordinate
stays the k-th root of its radicand nearest the previous value, with adaptive
bisection whenever the nearest-root choice gets ambiguous.  Loops are
counterclockwise circles of radius 0.4x the distance to the nearest other
special point, joined to the basepoint by a corridor; because the deck group
is abelian the corridor never changes the resulting element.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field

from .abelian import GroupElement, element_order
from .cover import (CoverSpec, ProjectivePoint, apply_element, is_infinite,
                    kth_roots, point_distance, project, residual)
from .errors import (BranchedFiberError, ContinuationError, DimensionError,
                     DomainError, FermatCoverError, NotInSameFiberError,
                     PathPlanningError, PrecisionError)

ROOT_MARGIN = 0.4          # accept a root only this much closer than siblings
LOOP_RADIUS_FACTOR = 0.4
MIN_STEP_FRACTION = 1e-12  # of the segment length
CIRCLE_SIDES = 24


# ---------------------------------------------------------------------------
# paths

@dataclass(frozen=True)
class PathSpec:
    """Polyline of finite complex points with recorded clearance delta."""

    vertices: tuple[complex, ...]
    delta: float

    def __post_init__(self):
        if len(self.vertices) < 1:
            raise DimensionError("a path needs at least one vertex")
        for a, b in zip(self.vertices, self.vertices[1:]):
            if a == b:
                raise DimensionError("consecutive path vertices must be distinct")
        if self.delta <= 0:
            raise PathPlanningError("path touches a special point (delta = 0)")

    def reversed(self) -> "PathSpec":
        return PathSpec(tuple(reversed(self.vertices)), self.delta)


def _segment_distance(z: complex, a: complex, b: complex) -> float:
    d = b - a
    L2 = abs(d) ** 2
    if L2 == 0:
        return abs(z - a)
    t = max(0.0, min(1.0, ((z - a) * d.conjugate()).real / L2))
    return abs(z - (a + t * d))


def path_clearance(vertices, special_points) -> float:
    finite = [s for s in special_points if not is_infinite(s)]
    if not finite:
        return math.inf
    return min(_segment_distance(s, a, b)
               for s in finite
               for a, b in zip(vertices, list(vertices)[1:] or [vertices[0]]))


def make_path(vertices, spec: CoverSpec) -> PathSpec:
    verts = tuple(complex(v) for v in vertices)
    return PathSpec(verts, path_clearance(verts, spec.special_points()))


# ---------------------------------------------------------------------------
# fibers

def fiber(spec: CoverSpec, u: complex, tol: float | None = None) -> list[ProjectivePoint]:
    """The k^L points over u: the principal lift plus its full deck orbit."""
    u = complex(u)
    for s in spec.special_points():
        if chord_eq(u, s):
            raise BranchedFiberError(
                f"{u} is a branch or limit point; use fixed_points for branch fibers")
    radicands = spec.radicands(u)
    principal = [1 + 0j] + [r ** (1.0 / spec.k) for r in radicands[1:]]
    w = cmath.exp(2j * cmath.pi / spec.k)
    points = []
    for expo in itertools.product(range(spec.k), repeat=spec.level):
        coords = [principal[0]]
        coords.extend(principal[c + 1] * w ** t for c, t in enumerate(expo))
        points.append(ProjectivePoint(tuple(coords)))
    tol = spec.residual_tol if tol is None else tol
    worst = max(residual(spec, p).value for p in points)
    if worst > tol:
        raise DomainError(f"fiber residual {worst:.3e} above tolerance")
    return points


def chord_eq(u: complex, v: complex, tol: float = 1e-12) -> bool:
    from .cover import chordal
    return chordal(u, v) < tol


def principal_lift(spec: CoverSpec, u: complex) -> ProjectivePoint:
    return fiber_start(spec, u)


def fiber_start(spec: CoverSpec, u: complex) -> ProjectivePoint:
    radicands = spec.radicands(complex(u))
    coords = [1 + 0j] + [r ** (1.0 / spec.k) for r in radicands[1:]]
    return ProjectivePoint(tuple(coords))


# ---------------------------------------------------------------------------
# continuation

def _affine(spec: CoverSpec, p: ProjectivePoint) -> list[complex]:
    x1 = p.coords[0]
    if abs(x1) < 1e-13:
        raise ContinuationError("cannot continue a lift lying over infinity")
    return [c / x1 for c in p.coords]


def _step_coordinate(prev: complex, radicand: complex, k: int) -> complex | None:
    """Nearest k-th root of the radicand, or None when the margin rule fails."""
    roots = kth_roots(radicand, k)
    dists = [abs(r - prev) for r in roots]
    best = min(range(k), key=dists.__getitem__)
    if k > 1:
        sibling = min(d for i, d in enumerate(dists) if i != best)
        if dists[best] >= ROOT_MARGIN * sibling:
            return None
    return roots[best]


def _track_segment(spec: CoverSpec, coords: list[complex], ua: complex, ub: complex) -> list[complex]:
    """Continue the affine lift from ua to ub, bisecting adaptively."""
    seg_len = abs(ub - ua)
    min_step = MIN_STEP_FRACTION * seg_len
    stack = [(ua, ub)]
    steps = 0
    while stack:
        a, b = stack.pop()
        steps += 1
        if steps > 200000:
            raise ContinuationError("continuation exceeded the step budget")
        radicands = spec.radicands(b)
        new = [1 + 0j]
        ok = True
        for c in range(1, spec.num_coords):
            nxt = _step_coordinate(coords[c], radicands[c], spec.k)
            if nxt is None:
                ok = False
                break
            new.append(nxt)
        if ok:
            coords = new
            continue
        if abs(b - a) <= min_step:
            raise ContinuationError(
                f"segment near {a} could not be subdivided further "
                "(path too close to a branch point)")
        mid = (a + b) / 2
        stack.append((mid, b))
        stack.append((a, mid))
    return coords


def continue_lift(spec: CoverSpec, path: PathSpec, start: ProjectivePoint,
                  tol: float | None = None) -> ProjectivePoint:
    """Endpoint of the unique continuation of ``start`` along the path."""
    tol = spec.residual_tol if tol is None else tol
    u0 = path.vertices[0]
    p0 = project(spec, start, tol=max(tol, spec.residual_tol))
    if not chord_eq(p0, u0, tol=1e-6):
        raise DomainError(f"start point projects to {p0}, path starts at {u0}")
    coords = _affine(spec, start)
    # re-anchor exactly on the tracked roots at the path start
    coords = [1 + 0j] + [
        _anchor_root(coords[c], spec.radicands(u0)[c], spec.k)
        for c in range(1, spec.num_coords)
    ]
    for a, b in zip(path.vertices, path.vertices[1:]):
        coords = _track_segment(spec, coords, a, b)
    out = ProjectivePoint(tuple(coords))
    res = residual(spec, out).value
    if res > tol:
        raise ContinuationError(f"endpoint residual {res:.3e} above tolerance")
    return out


def _anchor_root(value: complex, radicand: complex, k: int) -> complex:
    root = _step_coordinate(value, radicand, k)
    if root is None:
        raise DomainError("start point is not close enough to a lift of the path start")
    return root


# ---------------------------------------------------------------------------
# deck-element identification

def identify_deck_element(spec: CoverSpec, p: ProjectivePoint, q: ProjectivePoint,
                          tol: float = 1e-6) -> GroupElement:
    """The deck element h with h(p) = q, from coordinate ratios.

    Each ratio must sit within ``tol`` of a k-th root of unity; zero
    coordinates (branch-fiber points) contribute a free exponent fixed to the
    reference phase.
    """
    if len(p) != spec.num_coords or len(q) != spec.num_coords:
        raise DimensionError("points do not match the spec")
    k = spec.k
    w = cmath.exp(2j * cmath.pi / k)
    phases: list[int | None] = []
    for a, b in zip(p.coords, q.coords):
        if abs(a) < 1e-9 or abs(b) < 1e-9:
            if abs(a) > 1e-6 or abs(b) > 1e-6:
                raise NotInSameFiberError("zero pattern differs between the points")
            phases.append(None)
            continue
        ratio = b / a
        if abs(abs(ratio) - 1.0) > 0.1:
            raise NotInSameFiberError("coordinate ratio is far from the unit circle")
        t = min(range(k), key=lambda t: abs(ratio - w ** t))
        if abs(ratio - w ** t) > tol:
            runner = sorted(abs(ratio - w ** s) for s in range(k))
            if len(runner) > 1 and runner[1] - runner[0] < tol:
                raise PrecisionError("ambiguous coordinate ratio")
            raise NotInSameFiberError(
                f"ratio {ratio} not within {tol} of a k-th root of unity")
        phases.append(t)
    ref = phases[-1] if phases[-1] is not None else 0
    exponents = tuple((t - ref) % k if t is not None else 0 for t in phases[:-1])
    h = GroupElement(k, exponents)
    if point_distance(apply_element(spec, h, p), q) > max(1e-9, tol):
        raise NotInSameFiberError("identified element does not map p to q")
    return h


# ---------------------------------------------------------------------------
# basepoints, loops, monodromy representation

def default_basepoint(spec: CoverSpec, grid: int = 41) -> complex:
    """Finite point maximizing the minimum distance to the special points
    inside |u| <= 2 max|finite special|, by coarse grid search."""
    finite = [s for s in spec.special_points() if not is_infinite(s)]
    radius = 2.0 * max(1.0, max(abs(s) for s in finite))
    best, best_d = None, -1.0
    for ix in range(grid):
        for iy in range(grid):
            z = complex(-radius + 2 * radius * ix / (grid - 1),
                        -radius + 2 * radius * iy / (grid - 1))
            if abs(z) > radius:
                continue
            d = min(abs(z - s) for s in finite)
            if d > best_d:
                best, best_d = z, d
    assert best is not None
    return best


def _loop_radius(spec: CoverSpec, b: complex) -> float:
    others = [s for s in spec.special_points() if not is_infinite(s) and s != b]
    if not others:
        raise PathPlanningError("no other special point to scale the loop radius")
    return LOOP_RADIUS_FACTOR * min(abs(b - s) for s in others)


def _corridor(spec: CoverSpec, u0: complex, target: complex, avoid: complex) -> list[complex]:
    """Straight segment u0 -> target, detoured if it runs over a special point."""
    finite = [s for s in spec.special_points() if not is_infinite(s)]
    scale = min(abs(a - b) for a, b in itertools.combinations(finite, 2))
    clearance = 0.03 * scale

    def clear(verts) -> bool:
        for a, b in zip(verts, verts[1:]):
            for s in finite:
                if s in (u0,):
                    continue
                d = _segment_distance(s, a, b)
                if d < clearance and not (s == avoid and abs(target - s) <= d + 1e-12):
                    # the corridor endpoint legitimately sits on the loop circle
                    if abs(s - target) > 1e-12:
                        return False
        return True

    direct = [u0, target]
    if clear(direct):
        return direct
    mid = (u0 + target) / 2
    direction = (target - u0) / abs(target - u0)
    normal = direction * 1j
    for step in (0.5, -0.5, 1.0, -1.0, 1.5, -1.5, 2.5, -2.5):
        cand = [u0, mid + step * scale * normal, target]
        if clear(cand):
            return cand
    raise PathPlanningError(f"no corridor from {u0} to {target}")


def _loop_vertices(spec: CoverSpec, u0: complex, b: complex) -> list[complex]:
    r = _loop_radius(spec, b)
    start_dir = (u0 - b) / abs(u0 - b)
    s = b + r * start_dir
    corridor = _corridor(spec, u0, s, avoid=b)
    phi0 = cmath.phase(start_dir)
    circle = [b + r * cmath.exp(1j * (phi0 + 2 * math.pi * t / CIRCLE_SIDES))
              for t in range(1, CIRCLE_SIDES)]
    verts = corridor + circle + [s] + list(reversed(corridor[:-1]))
    out = [verts[0]]
    for v in verts[1:]:
        if v != out[-1]:
            out.append(v)
    return out


def loop_monodromy(spec: CoverSpec, u0: complex, branch_index: int,
                   tol: float = 1e-6) -> GroupElement:
    """Deck element of the counterclockwise loop around branch_points[branch_index].

    The index of infinity (0) is resolved through the sphere relation: the
    inverse of the composition of all finite-branch monodromies.
    """
    if not 0 <= branch_index <= spec.n:
        raise DimensionError(f"branch index {branch_index} out of range")
    if branch_index == 0:
        total = GroupElement(spec.k, (0,) * spec.level)
        for bi in range(1, spec.n + 1):
            total = total * loop_monodromy(spec, u0, bi, tol)
        return total.inverse()
    b = spec.branch_points[branch_index]
    verts = _loop_vertices(spec, u0, b)
    path = make_path(verts, spec)
    start = fiber_start(spec, u0)
    end = continue_lift(spec, path, start)
    return identify_deck_element(spec, start, end, tol=tol)


@dataclass(frozen=True)
class MonodromyRep:
    """Per-branch-point deck elements for counterclockwise loops at a basepoint."""

    basepoint: complex
    branch_points: tuple[complex, ...]
    elements: tuple[GroupElement, ...]
    orientation: str = "ccw"
    punctures: tuple[complex, ...] = ()
    puncture_elements: tuple[GroupElement, ...] = ()

    def __post_init__(self):
        if len(self.branch_points) != len(self.elements):
            raise DimensionError("one element per branch point required")
        if len(self.punctures) != len(self.puncture_elements):
            raise DimensionError("one element per puncture required")

    @property
    def k(self) -> int:
        return self.elements[0].k

    @property
    def level(self) -> int:
        return self.elements[0].level

    def element_for(self, branch_index: int) -> GroupElement:
        return self.elements[branch_index]

    def total(self) -> GroupElement:
        out = GroupElement(self.k, (0,) * self.level)
        for m in self.elements:
            out = out * m
        return out


def compute_monodromy_rep(spec: CoverSpec, u0: complex | None = None,
                          tol: float = 1e-6) -> MonodromyRep:
    """Monodromy around every branch point of the truncation; infinity via the
    sphere relation."""
    u0 = default_basepoint(spec) if u0 is None else complex(u0)
    finite = [loop_monodromy(spec, u0, bi, tol) for bi in range(1, spec.n + 1)]
    total = GroupElement(spec.k, (0,) * spec.level)
    for m in finite:
        total = total * m
    elements = (total.inverse(), *finite)
    return MonodromyRep(u0, spec.branch_prefix, elements)


def euler_genus_oracle(rep: MonodromyRep, k: int, n: int) -> int:
    """Genus from the Euler characteristic of the degree-k^n cover.

    chi = k^n (2 - (n+1)) + sum_j k^n / ord(m_j), the orders being read from
    the representation; each must equal k.
    """
    if len(rep.branch_points) != n + 1:
        raise DimensionError(f"representation covers {len(rep.branch_points)} "
                             f"branch points, expected {n + 1}")
    if rep.k != k or rep.level != n:
        raise DimensionError("representation level does not match (k, n)")
    degree = k ** n
    chi = degree * (2 - (n + 1))
    for bi, m in enumerate(rep.elements):
        order = element_order(m)
        if order != k:
            raise FermatCoverError(
                f"monodromy around branch point {bi} has order {order}, expected {k}")
        chi += degree // order
    if chi % 2:
        raise FermatCoverError("odd Euler characteristic (inconsistent representation)")
    return 1 - chi // 2
