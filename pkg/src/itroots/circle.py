"""Exact model of the circle S^1 and admissible piecewise-affine maps on it.

Points are angles: z = e^{2*pi*i*t} is stored as the rational t in [0,1).
Angles make every predicate here exact; the only transcendental quantity,
the chordal (straight-line) distance |e^{2*pi*i*t} - e^{2*pi*i*s}|, is
isolated behind exactreal.ComparableReal.

An admissible map is supported on a cyclically ordered partition and sends
each partition arc onto the *minor* arc between consecutive image points
(antipodal image pairs are rejected; equal image pairs give constant arcs,
which the density construction relies on).  Such maps are automatically
continuous, and their preimages of points and arcs are finite unions of
rational angles and closed arcs (CircleSet).
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Optional, Sequence, Union

from .certifier import CONTINUUM, Cardinal, FiberProfile
from .exactreal import ComparableReal

Rat = Union[Fraction, int]

HALF = Fraction(1, 2)
ONE = Fraction(1)


class CircleFormatError(ValueError):
    """Malformed circle-map JSON; ``field`` names the offending key."""

    def __init__(self, message: str, field_name: str):
        super().__init__(message)
        self.field = field_name


# ------------------------------------------------------------------ angles

def norm_angle(t: Rat) -> Fraction:
    """Canonical representative in [0, 1)."""
    return Fraction(t) % 1


def ang_diff(a: Rat, b: Rat) -> Fraction:
    """Counterclockwise angular travel from a to b, in [0, 1)."""
    return (Fraction(b) - Fraction(a)) % 1


def ang_dist(a: Rat, b: Rat) -> Fraction:
    """Angular distance: length of the shorter way round, in [0, 1/2]."""
    d = ang_diff(a, b)
    return d if d <= HALF else 1 - d


def signed_gap(a: Rat, b: Rat) -> Fraction:
    """Representative of b - a (mod 1) in (-1/2, 1/2]."""
    d = ang_diff(a, b)
    return d if d <= HALF else d - 1


def chordal_distance(z: Rat, w: Rat) -> ComparableReal:
    """|e^{2 pi i z} - e^{2 pi i w}| = 2 sin(pi * d) as a comparable real."""
    return ComparableReal(ang_dist(z, w))


def cyclic_order(z0: Rat, z1: Rat, z2: Rat) -> bool:
    """True iff z0, z1, z2 occur in counterclockwise order."""
    z0, z1, z2 = norm_angle(z0), norm_angle(z1), norm_angle(z2)
    if len({z0, z1, z2}) != 3:
        raise ValueError("cyclic order needs three distinct points")
    return ang_diff(z0, z1) < ang_diff(z0, z2)


# -------------------------------------------------------------------- arcs

@dataclass(frozen=True)
class Arc:
    """Closed arc traversed counterclockwise from start to end (start != end)."""

    start: Fraction
    end: Fraction

    def __post_init__(self):
        object.__setattr__(self, "start", norm_angle(self.start))
        object.__setattr__(self, "end", norm_angle(self.end))
        if self.start == self.end:
            raise ValueError("arc endpoints must differ")

    @property
    def length(self) -> Fraction:
        return ang_diff(self.start, self.end)

    def contains(self, x: Rat) -> bool:
        return ang_diff(self.start, norm_angle(x)) <= self.length

    def interior_contains(self, x: Rat) -> bool:
        off = ang_diff(self.start, norm_angle(x))
        return 0 < off < self.length

    def contains_arc(self, other: "Arc") -> bool:
        return ang_diff(self.start, other.start) + other.length <= self.length

    def interior_contains_arc(self, other: "Arc") -> bool:
        off = ang_diff(self.start, other.start)
        return 0 < off and off + other.length < self.length

    def point_at(self, alpha: Fraction) -> Fraction:
        """Affine parametrization: alpha = 0 -> start, alpha = 1 -> end."""
        return norm_angle(self.start + alpha * self.length)


def minor_arc(w1: Rat, w2: Rat) -> Arc:
    """The shorter arc joining two non-antipodal distinct points."""
    w1, w2 = norm_angle(w1), norm_angle(w2)
    d = ang_diff(w1, w2)
    if d == 0:
        raise ValueError("minor arc needs distinct endpoints")
    if d == HALF:
        raise ValueError("antipodal points have no minor arc")
    return Arc(w1, w2) if d < HALF else Arc(w2, w1)


def arc_intersections(a: Arc, b: Arc) -> list[tuple[str, object]]:
    """Components of a ∩ b: [("arc", Arc) | ("point", angle)], <= 2 of them."""
    a0, a1 = a.start, a.start + a.length
    comps: list[tuple[str, object]] = []
    seen: set = set()
    for k in (-1, 0, 1):
        b0 = b.start + k
        b1 = b0 + b.length
        lo, hi = max(a0, b0), min(a1, b1)
        if lo > hi:
            continue
        if lo == hi:
            item = ("point", norm_angle(lo))
        else:
            item = ("arc", Arc(norm_angle(lo), norm_angle(lo) + (hi - lo)))
        if item not in seen:
            seen.add(item)
            comps.append(item)
    # a point component duplicating an arc endpoint is already inside the arc
    arcs = [c[1] for c in comps if c[0] == "arc"]
    comps = [c for c in comps
             if c[0] == "arc" or not any(x.contains(c[1]) for x in arcs)]
    return comps


# --------------------------------------------------------------- CircleSet

@dataclass(frozen=True)
class CircleSet:
    """Finite union of isolated angles and closed arcs, kept normalized.

    Cardinality is Finite(#points) without arcs, Continuum otherwise.
    """

    points: tuple[Fraction, ...] = ()
    arcs: tuple[Arc, ...] = ()
    full: bool = False

    def __post_init__(self):
        if self.full:
            object.__setattr__(self, "points", ())
            object.__setattr__(self, "arcs", ())
            return
        # merge on a double cover of the circle: every closed item appears
        # lifted at s and s+1; components starting in [0,1) are canonical,
        # but one may still sit inside a wrapping component, so filter last
        items = [(norm_angle(p), norm_angle(p)) for p in self.points]
        items += [(a.start, a.start + a.length) for a in self.arcs]
        lifted = items + [(s + 1, e + 1) for s, e in items]
        lifted.sort()
        merged: list[list[Fraction]] = []
        for s, e in lifted:
            if merged and s <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], e)
            else:
                merged.append([s, e])
        canon = []
        for s, e in merged:
            if not 0 <= s < 1:
                continue
            if e - s >= 1:
                object.__setattr__(self, "points", ())
                object.__setattr__(self, "arcs", ())
                object.__setattr__(self, "full", True)
                return
            canon.append((s, e - s))

        def inside(c, o):
            return c is not o and (c[0] - o[0]) % 1 + c[1] <= o[1]

        canon = [c for c in canon if not any(inside(c, o) for o in canon)]
        pts = [s for s, ln in canon if ln == 0]
        arcs = [Arc(s, s + ln) for s, ln in canon if ln > 0]
        object.__setattr__(self, "points", tuple(sorted(pts)))
        object.__setattr__(self, "arcs", tuple(sorted(arcs, key=lambda a: a.start)))

    @staticmethod
    def empty() -> "CircleSet":
        return CircleSet()

    def union(self, other: "CircleSet") -> "CircleSet":
        if self.full or other.full:
            return CircleSet(full=True)
        return CircleSet(self.points + other.points, self.arcs + other.arcs)

    def contains(self, x: Rat) -> bool:
        if self.full:
            return True
        x = norm_angle(x)
        return x in self.points or any(a.contains(x) for a in self.arcs)

    def contains_arc(self, arc: Arc) -> bool:
        if self.full:
            return True
        return any(a.contains_arc(arc) for a in self.arcs)

    def interior_contains_arc(self, arc: Arc) -> bool:
        """arc inside the topological interior of the set."""
        if self.full:
            return True
        for a in self.arcs:
            if a.contains_arc(arc):
                return not arc.contains(a.start) and not arc.contains(a.end)
        return False

    def intersects_arc(self, arc: Arc) -> bool:
        if self.full:
            return True
        if any(arc.contains(p) for p in self.points):
            return True
        return any(arc_intersections(a, arc) for a in self.arcs)

    def is_empty(self) -> bool:
        return not self.full and not self.points and not self.arcs

    def cardinality(self) -> Cardinal:
        if self.full or self.arcs:
            return CONTINUUM
        return Cardinal.finite(len(self.points))


# ------------------------------------------------------- partitions & maps

@dataclass(frozen=True)
class CirclePartition:
    """k >= 2 distinct angles in strict cyclic order; arcs cover the circle."""

    points: tuple[Fraction, ...]

    def __post_init__(self):
        pts = tuple(sorted(norm_angle(t) for t in self.points))
        if len(pts) < 2:
            raise ValueError("partition needs at least two points")
        if len(set(pts)) != len(pts):
            raise ValueError("partition points must be distinct")
        object.__setattr__(self, "points", pts)

    @property
    def k(self) -> int:
        return len(self.points)

    def arc(self, j: int) -> Arc:
        return Arc(self.points[j], self.points[(j + 1) % self.k])

    def arcs(self) -> list[Arc]:
        return [self.arc(j) for j in range(self.k)]

    def refine(self, extra: Iterable[Rat]) -> "CirclePartition":
        return CirclePartition(tuple(set(self.points)
                                     | {norm_angle(t) for t in extra}))

    def index_of_arc_containing(self, t: Rat) -> int:
        """Index j of the arc [z_j, z_{j+1}) owning t (points own outgoing)."""
        t = norm_angle(t)
        idx = bisect_right(self.points, t) - 1
        return idx % self.k

    def owners_for_sorted(self, cuts: Sequence[Fraction]) -> list[int]:
        """Owning arc index for every cut, cuts sorted ascending in [0,1).

        One merge pass; avoids a log-factor of exact comparisons per cut.
        """
        pts, k = self.points, self.k
        owners = []
        j = -1
        for t in cuts:
            while j + 1 < k and pts[j + 1] <= t:
                j += 1
            owners.append(j % k)
        return owners


@dataclass(frozen=True)
class AdmissiblePLCircleMap:
    """Piecewise-affine circle map sending arc j onto the minor arc between
    the images of its endpoints.

    ``images[j]`` is the image angle of partition point j.  Consecutive
    images must never be antipodal; equal consecutive images give a constant
    arc.  Derived data: ``disps[j]`` is the signed angular displacement in
    (-1/2, 1/2) from images[j] to images[j+1] along the minor side.
    """

    partition: CirclePartition
    images: tuple[Fraction, ...]
    lens: tuple[Fraction, ...] = field(init=False, compare=False, repr=False)
    disps: tuple[Fraction, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        k = self.partition.k
        imgs = tuple(norm_angle(w) for w in self.images)
        if len(imgs) != k:
            raise ValueError("one image per partition point required")
        object.__setattr__(self, "images", imgs)
        lens, disps = [], []
        for j in range(k):
            nxt = (j + 1) % k
            lens.append(ang_diff(self.partition.points[j],
                                 self.partition.points[nxt]))
            if ang_dist(imgs[j], imgs[nxt]) == HALF:
                raise ValueError(
                    f"consecutive images at arcs {j},{nxt} are antipodal; "
                    "the minor arc is ambiguous")
            disps.append(signed_gap(imgs[j], imgs[nxt]))
        object.__setattr__(self, "lens", tuple(lens))
        object.__setattr__(self, "disps", tuple(disps))

    @property
    def k(self) -> int:
        return self.partition.k

    def arc_index(self, t: Rat) -> int:
        return self.partition.index_of_arc_containing(t)

    def slope(self, j: int) -> Fraction:
        return self.disps[j] / self.lens[j]

    def is_constant_arc(self, j: int) -> bool:
        return self.disps[j] == 0

    def constant_arcs(self) -> list[tuple[Arc, Fraction]]:
        return [(self.partition.arc(j), self.images[j])
                for j in range(self.k) if self.is_constant_arc(j)]

    def image_arc(self, j: int):
        """("arc", minor image arc) or ("point", value) for a constant arc."""
        if self.is_constant_arc(j):
            return ("point", self.images[j])
        w0 = self.images[j]
        d = self.disps[j]
        return ("arc", Arc(w0, w0 + d) if d > 0 else Arc(w0 + d, w0))


def eval_circle(f: AdmissiblePLCircleMap, z: Rat) -> Fraction:
    """Image angle of z; boundary points belong to their outgoing arc."""
    t = norm_angle(z)
    j = f.arc_index(t)
    alpha = ang_diff(f.partition.points[j], t) / f.lens[j]
    return norm_angle(f.images[j] + alpha * f.disps[j])


def map_subarc(f: AdmissiblePLCircleMap, arc: Arc):
    """Exact image of a subarc lying inside one partition arc.

    Returns ("arc", Arc) or ("point", value).  Raises if the subarc
    straddles a partition point strictly.
    """
    j = f.arc_index(arc.start)
    pj = f.partition.arc(j)
    if not pj.contains_arc(arc):
        raise ValueError("subarc straddles a partition point")
    v0, v1 = eval_circle(f, arc.start), eval_circle(f, arc.end)
    if f.is_constant_arc(j):
        return ("point", v0)
    return ("arc", Arc(v0, v1) if f.disps[j] > 0 else Arc(v1, v0))


class ArcMap:
    """Affine map of one arc, in the two explicit orientation conventions.

    ``preserve`` interpolates the image angle from s1 up to s2;
    ``reverse`` interpolates from s1 down to s2 - 1.  Endpoints map to
    s1 and s2 exactly in both conventions.
    """

    def __init__(self, arc: Arc, s1: Rat, s2: Rat,
                 orientation: Literal["preserve", "reverse"]):
        if orientation not in ("preserve", "reverse"):
            raise ValueError(f"unknown orientation {orientation!r}")
        self.arc = arc
        self.s1 = norm_angle(s1)
        self.s2 = norm_angle(s2)
        self.orientation = orientation

    def at_alpha(self, alpha: Rat) -> Fraction:
        alpha = Fraction(alpha)
        if not 0 <= alpha <= 1:
            raise ValueError("alpha outside [0,1]")
        target = self.s2 if self.orientation == "preserve" else self.s2 - 1
        return norm_angle(alpha * target + (1 - alpha) * self.s1)

    def at_angle(self, t: Rat) -> Fraction:
        t = norm_angle(t)
        if not self.arc.contains(t):
            raise ValueError(f"angle {t} outside the arc")
        return self.at_alpha(ang_diff(self.arc.start, t) / self.arc.length)


def affine_on_arc(arc: Arc, s1: Rat, s2: Rat,
                  orientation: Literal["preserve", "reverse"]) -> ArcMap:
    """Evaluable affine map of ``arc`` with endpoint images s1, s2."""
    return ArcMap(arc, s1, s2, orientation)


# --------------------------------------------------------------- preimages

def preimage_circle(f: AdmissiblePLCircleMap, y: Rat) -> CircleSet:
    """Exact f^-1({y}): isolated angles plus whole constant arcs."""
    y = norm_angle(y)
    pts: list[Fraction] = []
    arcs: list[Arc] = []
    for j in range(f.k):
        if f.is_constant_arc(j):
            if f.images[j] == y:
                arcs.append(f.partition.arc(j))
            continue
        d = f.disps[j]
        off = ang_diff(f.images[j], y) if d > 0 else ang_diff(y, f.images[j])
        if off <= abs(d):
            alpha = off / abs(d)
            pts.append(norm_angle(f.partition.points[j] + alpha * f.lens[j]))
    return CircleSet(tuple(pts), tuple(arcs))


def preimage_arc(f: AdmissiblePLCircleMap, target: Arc) -> CircleSet:
    """Exact f^-1(target) for a closed arc target."""
    pts: list[Fraction] = []
    arcs: list[Arc] = []
    for j in range(f.k):
        d = f.disps[j]
        w0 = f.images[j]
        if d == 0:
            if target.contains(w0):
                arcs.append(f.partition.arc(j))
            continue
        # exact quick reject: image arc and target overlap iff the start of
        # one lies in the other
        istart = w0 if d > 0 else (w0 + d) % 1
        ilen = abs(d)
        off = (target.start - istart) % 1
        if off > ilen and off + target.length < 1:
            continue
        pj = f.partition.arc(j)
        kind, img = f.image_arc(j)
        for ckind, comp in arc_intersections(img, target):
            if ckind == "point":
                g1 = g2 = comp
            else:
                g1, g2 = comp.start, comp.end
            if d > 0:
                a1 = ang_diff(w0, g1) / d
                a2 = ang_diff(w0, g2) / d
            else:
                a1 = ang_diff(g2, w0) / -d
                a2 = ang_diff(g1, w0) / -d
            lo, hi = min(a1, a2), max(a1, a2)
            t1 = norm_angle(pj.start + lo * f.lens[j])
            t2 = norm_angle(pj.start + hi * f.lens[j])
            if t1 == t2:
                pts.append(t1)
            else:
                arcs.append(Arc(t1, t2))
    return CircleSet(tuple(pts), tuple(arcs))


def preimage_circle_set(f: AdmissiblePLCircleMap, s: CircleSet) -> CircleSet:
    if s.full:
        return CircleSet(full=True)
    pts: list[Fraction] = []
    arcs: list[Arc] = []
    for part in [preimage_circle(f, p) for p in s.points] + \
                [preimage_arc(f, a) for a in s.arcs]:
        pts.extend(part.points)
        arcs.extend(part.arcs)
    return CircleSet(tuple(pts), tuple(arcs))


def preimage2_circle(f: AdmissiblePLCircleMap, y: Rat) -> CircleSet:
    """Exact f^-2({y})."""
    return preimage_circle_set(f, preimage_circle(f, y))


def range_set(f: AdmissiblePLCircleMap) -> CircleSet:
    """Exact range: union of the per-arc image arcs/points."""
    pts: list[Fraction] = []
    arcs: list[Arc] = []
    for j in range(f.k):
        kind, img = f.image_arc(j)
        if kind == "point":
            pts.append(img)
        else:
            arcs.append(img)
    return CircleSet(tuple(pts), tuple(arcs))


# ------------------------------------------------------------ fiber counts

def max_other_fiber_circle(f: AdmissiblePLCircleMap, x0: Rat) -> Cardinal:
    """sup over y != x0 of #f^-1(y), exact.

    A constant arc with value != x0 forces Continuum.  Otherwise each arc j
    contributes the half-open image of [z_j, z_{j+1}) and the fiber count of
    y is the number of covering images; the count is piecewise constant
    between image endpoints, so an event sweep over endpoint keys
    (angle, at/after) is exhaustive.
    """
    x0 = norm_angle(x0)
    halfopen: list[tuple[Fraction, Fraction, bool]] = []  # (a, b, closed_at_a)
    for j in range(f.k):
        if f.is_constant_arc(j):
            if f.images[j] != x0:
                return CONTINUUM
            continue
        d = f.disps[j]
        w0 = f.images[j]
        if d > 0:
            halfopen.append((w0, norm_angle(w0 + d), True))    # [w0, w1)
        else:
            halfopen.append((norm_angle(w0 + d), w0, False))   # (w1, w0]
    if not halfopen:
        return Cardinal.finite(0)
    bounds = sorted({a for a, b, c in halfopen} | {b for a, b, c in halfopen}
                    | {x0})
    key_index = {th: 2 * i for i, th in enumerate(bounds)}
    nkeys = 2 * len(bounds)
    diff = [0] * (nkeys + 1)

    def cover(start_key: int, end_key_excl: int):
        # circular index range [start, end) over the key ring
        if start_key < end_key_excl:
            diff[start_key] += 1
            diff[end_key_excl] -= 1
        else:
            diff[start_key] += 1
            diff[nkeys] -= 1
            diff[0] += 1
            diff[end_key_excl] -= 1

    for a, b, closed_at_a in halfopen:
        ka = key_index[a] + (0 if closed_at_a else 1)
        kb = key_index[b] + (0 if closed_at_a else 1)
        cover(ka, kb)

    coverage = []
    acc = 0
    for i in range(nkeys):
        acc += diff[i]
        coverage.append(acc)
    best = 0
    for i, c in enumerate(coverage):
        if i % 2 == 0 and bounds[i // 2] == x0:
            continue  # the key "exactly at x0" is excluded
        best = max(best, c)
    return Cardinal.finite(best)


def fiber_profile_circle(f: AdmissiblePLCircleMap, x0: Rat) -> FiberProfile:
    """Exact cardinal fiber data at the angle x0, ready for the certifier."""
    x0 = norm_angle(x0)
    return FiberProfile(
        point=x0,
        fiber1=preimage_circle(f, x0).cardinality(),
        fiber2=preimage2_circle(f, x0).cardinality(),
        max_other_fiber=max_other_fiber_circle(f, x0),
        not_fixed=eval_circle(f, x0) != x0,
    )


# ------------------------------------------------------------ sup distance

def _wrap_dist(delta: Fraction) -> Fraction:
    r = delta % 1
    return r if r <= HALF else 1 - r


def _crosses_half_integer(lo: Fraction, hi: Fraction) -> bool:
    """Does [lo, hi] (or [hi, lo]) contain some m + 1/2 with m an integer?"""
    if lo > hi:
        lo, hi = hi, lo
    return math.ceil(lo - HALF) + HALF <= hi


def _refined_sweep(f: AdmissiblePLCircleMap, g: AdmissiblePLCircleMap,
                   extra: Iterable[Fraction] = ()):
    """Yield (start, length, value_f, value_g, slope_f, slope_g) per refined arc.

    One merge pass over the sorted union of both partitions; values at the
    arc start are computed from the owning-arc data directly.
    """
    cuts = sorted(set(f.partition.points) | set(g.partition.points)
                  | set(extra))
    own_f = f.partition.owners_for_sorted(cuts)
    own_g = g.partition.owners_for_sorted(cuts)
    fp, gp = f.partition.points, g.partition.points
    n = len(cuts)
    for i in range(n):
        start = cuts[i]
        length = (cuts[i + 1] - start) if i + 1 < n else (cuts[0] - start) % 1
        jf, jg = own_f[i], own_g[i]
        vf = (f.images[jf] + (start - fp[jf]) % 1 / f.lens[jf] * f.disps[jf]) % 1
        vg = (g.images[jg] + (start - gp[jg]) % 1 / g.lens[jg] * g.disps[jg]) % 1
        yield (start, length, vf, vg,
               f.disps[jf] / f.lens[jf], g.disps[jg] / g.lens[jg])


def sup_distance_circle(f: AdmissiblePLCircleMap,
                        h: AdmissiblePLCircleMap) -> ComparableReal:
    """sup over z of the chordal distance |f(z) - h(z)|, exact.

    On the common partition refinement the angular difference is affine, so
    the chordal distance peaks either at refined-arc endpoints or where the
    difference crosses half a turn (chordal 2).  The chord is monotone in
    angular distance, so the supremum is the chord of the largest distance.
    """
    best = Fraction(0)
    for start, length, vf, vh, sf, sh in _refined_sweep(f, h):
        d0 = (vf - vh) % 1
        d1 = d0 + (sf - sh) * length
        if _crosses_half_integer(d0, d1):
            return ComparableReal(HALF)
        best = max(best, _wrap_dist(d0), _wrap_dist(d1))
    return ComparableReal(best)


def maps_equal_off_arc(f: AdmissiblePLCircleMap, g: AdmissiblePLCircleMap,
                       excluded: Optional[Arc] = None) -> bool:
    """Exact equality of f and g outside the interior of ``excluded``.

    Checked on the common refinement (plus the excluded arc's endpoints):
    equal start values and equal slopes pin down equal affine data, since
    both maps move by less than half a turn per refined arc.
    """
    extra = (excluded.start, excluded.end) if excluded is not None else ()
    for start, length, vf, vg, sf, sg in _refined_sweep(f, g, extra):
        mid = (start + length / 2) % 1
        if excluded is not None and excluded.interior_contains(mid):
            # the refinement contains the excluded endpoints, so this whole
            # refined arc lies inside the excluded arc; its start still needs
            # to agree when it is one of the excluded boundary points
            if not excluded.interior_contains(start) and vf != vg:
                return False
            continue
        if vf != vg or sf != sg:
            return False
    return True


# ---------------------------------------------------------------- builders

def identity_map(partition: CirclePartition) -> AdmissiblePLCircleMap:
    return AdmissiblePLCircleMap(partition, partition.points)


def rotation_map(partition: CirclePartition, angle: Rat) -> AdmissiblePLCircleMap:
    a = Fraction(angle)
    return AdmissiblePLCircleMap(
        partition, tuple(norm_angle(t + a) for t in partition.points))


# --------------------------------------------------------------------- JSON

def to_json_dict(f: AdmissiblePLCircleMap) -> dict:
    doc = {
        "partition": [str(t) for t in f.partition.points],
        "images": [str(w) for w in f.images],
    }
    consts = f.constant_arcs()
    if consts:
        doc["constant_arcs"] = [{"start": str(a.start), "end": str(a.end),
                                 "value": str(v)} for a, v in consts]
    return doc


def _parse_angle(s, field_name: str) -> Fraction:
    try:
        v = Fraction(s) if isinstance(s, str) else Fraction(int(s))
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise CircleFormatError(f"bad angle {s!r}: {exc}", field_name) from exc
    if not 0 <= v < 1:
        raise CircleFormatError(f"angle {v} outside [0,1)", field_name)
    return v


def from_json_dict(doc: dict) -> AdmissiblePLCircleMap:
    if not isinstance(doc, dict):
        raise CircleFormatError("circle map document must be an object", "<root>")
    for key in ("partition", "images"):
        if key not in doc or not isinstance(doc[key], list):
            raise CircleFormatError(f"missing or invalid '{key}' list", key)
    pts = [_parse_angle(s, f"partition[{i}]")
           for i, s in enumerate(doc["partition"])]
    imgs = [_parse_angle(s, f"images[{i}]") for i, s in enumerate(doc["images"])]
    if len(pts) != len(imgs):
        raise CircleFormatError("'images' must match 'partition' in length",
                                "images")
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    try:
        part = CirclePartition(tuple(pts[i] for i in order))
        f = AdmissiblePLCircleMap(part, tuple(imgs[i] for i in order))
    except ValueError as exc:
        raise CircleFormatError(str(exc), "images") from exc
    declared = doc.get("constant_arcs")
    if declared is not None:
        actual = {(str(a.start), str(a.end), str(v))
                  for a, v in f.constant_arcs()}
        for i, item in enumerate(declared):
            key = (str(Fraction(item["start"])), str(Fraction(item["end"])),
                   str(Fraction(item["value"])))
            if key not in actual:
                raise CircleFormatError(
                    f"constant_arcs[{i}] does not match the map",
                    f"constant_arcs[{i}]")
    return f


def load(path) -> AdmissiblePLCircleMap:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CircleFormatError(f"not valid JSON: {exc}", "<document>") from exc
    return from_json_dict(doc)
