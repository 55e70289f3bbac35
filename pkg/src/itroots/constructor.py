"""Construct, near any admissible circle map, a map with no iterative roots.

Given an admissible piecewise-affine h and a rational eps in (0,1), the
pipeline produces f with sup-distance rho(f, h) < eps such that f is constant
on a small arc K whose value x0 is not fixed by f.  Then f^-2(x0) contains a
whole arc while every other fiber is finite, so the certifier issues a C3
certificate: f has no iterative roots of any order n >= 2.  Running the
pipeline over a grid of (h, eps) is the desk-scale content of "maps without
iterative roots are dense".

Every intermediate object is recorded in a ConstructionTrace and every
inequality the argument needs is re-checked exactly (rational arithmetic for
angular data, adaptive-precision comparable reals for chordal data).  All
searches run over deterministic dyadic grids, coarsest first, so a trace is
reproducible bit for bit.

The interval-domain analogue (construct_non_iterate_interval) follows the
same flatten-a-small-interval recipe on [0,1]; it is certified post hoc
rather than by a traced argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .certifier import Abstention, NonRootCertificate, certify_profiled
from .circle import (AdmissiblePLCircleMap, Arc, CirclePartition, CircleSet,
                     ang_dist, arc_intersections, chordal_distance,
                     eval_circle, map_subarc, maps_equal_off_arc, norm_angle,
                     preimage_arc, range_set, fiber_profile_circle,
                     sup_distance_circle, to_json_dict as circle_to_json)
from .pl_interval import (CardinalSet, Interval, PLMapInterval, Piece,
                          eval_at, fiber_profile, preimage_interval,
                          sup_distance)

Rat = Union[Fraction, int]

HALF = Fraction(1, 2)


class ConstructionFailure(Exception):
    """A deterministic search grid was exhausted; ``step`` names where."""

    def __init__(self, step: str, message: str):
        super().__init__(f"[{step}] {message}")
        self.step = step


# ------------------------------------------------------------ dyadic grids

def dyadic_at(i: int) -> Fraction:
    """i-th element of 0, 1/2, -1/2, 1/4, -1/4, 3/4, -3/4, 1/8, ..."""
    if i == 0:
        return Fraction(0)
    m, neg = divmod(i - 1, 2)
    depth = (m + 1).bit_length()
    offset = m - (2 ** (depth - 1) - 1)
    val = Fraction(2 * offset + 1, 2 ** depth)
    return -val if neg else val


def unit_dyadics(max_depth: int) -> Iterator[Fraction]:
    """1/2, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, ... down to max_depth."""
    for depth in range(1, max_depth + 1):
        den = 2 ** depth
        for num in range(1, den, 2):
            yield Fraction(num, den)


# -------------------------------------------------------- continuity bound

def angular_slope_bound(h: AdmissiblePLCircleMap) -> Fraction:
    """Max angular expansion rate of h, floored at 1."""
    lam = Fraction(1)
    for j in range(h.k):
        lam = max(lam, abs(h.disps[j]) / h.lens[j])
    return lam


def continuity_delta(h: AdmissiblePLCircleMap, eps: Rat) -> Fraction:
    """A rational delta in (0, 1/4) with the modulus-of-continuity property:
    chordal |z - z'| < delta implies chordal |h(z) - h(z')| < eps/10.

    Conservative derivation: chordal >= 4 * angular pins the angular gap
    below delta/4; the image angular gap grows by at most the slope bound;
    chordal <= 2*pi*angular < (710/113)*angular converts back.  The 2/35
    factor leaves the strict inequality a clear margin.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0,1)")
    return 2 * eps / (35 * angular_slope_bound(h))


# ------------------------------------------------------------------- trace

@dataclass(frozen=True)
class ConstructionTrace:
    """Every intermediate object of the circle construction, replayable."""

    epsilon: Fraction
    delta: Fraction
    partition: CirclePartition          # P, the mesh supporting f0
    images: tuple[Fraction, ...]        # W, the perturbed image points
    f0: AdmissiblePLCircleMap
    J: Arc                              # [u0, u1], the modification arc
    a: Fraction                         # witness point with f0(a) != a
    K: Arc                              # [y0, y1] inside J, flattened by f
    x0: Fraction                        # constant value of f on K
    x1: Fraction                        # other endpoint of f0(K)
    r: int                              # J sits inside partition arc r
    r_prime: int                        # f0(J) sits inside partition arc r'
    Q: CirclePartition                  # refinement of P by u0,y0,y1,u1
    f: AdmissiblePLCircleMap            # the final map, constant x0 on K
    swapped: bool                       # endpoint swap branch taken for x0


@dataclass(frozen=True)
class TraceCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ConstructionResult:
    f: AdmissiblePLCircleMap
    trace: ConstructionTrace
    cert: NonRootCertificate


def validate_trace(trace: ConstructionTrace,
                   h: AdmissiblePLCircleMap) -> list[TraceCheck]:
    """Re-check every invariant of the construction independently."""
    eps, delta = trace.epsilon, trace.delta
    P, W, f0, f = trace.partition, trace.images, trace.f0, trace.f
    J, K = trace.J, trace.K
    checks: list[TraceCheck] = []

    def add(name: str, ok: bool, detail: str = ""):
        checks.append(TraceCheck(name, bool(ok), detail))

    add("delta-range", 0 < delta < Fraction(1, 4))
    k = P.k
    # chordal comparisons depend only on the angular distance, so compare
    # each distinct distance once
    mesh_dists = {ang_dist(P.points[j], P.points[(j + 1) % k])
                  for j in range(k)}
    add("mesh-below-half-delta",
        all(chordal_distance(0, d) < delta / 2 for d in mesh_dists))
    image_dists = {ang_dist(eval_circle(h, P.points[j]), W[j])
                   for j in range(k)}
    add("images-near-h",
        all(chordal_distance(0, d) < eps / 20 for d in image_dists))
    add("images-distinct", len(set(W)) == k)
    add("images-moved", all(W[j] != P.points[j] for j in range(k)))
    spacing_dists = {ang_dist(W[j], W[(j + 1) % k]) for j in range(k)}
    add("image-spacing",
        all(chordal_distance(0, d) < eps / 5 for d in spacing_dists))
    add("eps-chain", (eps / 20 + eps / 10 + eps / 20 == eps / 5)
        and (eps / 5 + eps / 20 + eps / 10 < eps / 2)
        and (eps / 5 + eps / 2 < 4 * eps / 5))
    add("f0-supported-on-P", f0.partition == P and f0.images == W)
    add("f0-arcs-injective", all(not f0.is_constant_arc(j) for j in range(k)))
    add("f0-arcs-not-identity", all(
        W[j] != P.points[j] or W[(j + 1) % k] != P.points[(j + 1) % k]
        for j in range(k)))
    add("cond-a-J-inside-range-interior",
        range_set(f0).interior_contains_arc(J))
    add("cond-b-J-inside-arc-r", P.arc(trace.r).interior_contains_arc(J))
    kind, f0J = map_subarc(f0, J)
    if kind != "arc":
        add("cond-c-f0J-inside-arc-rprime", False, "f0(J) degenerate")
    else:
        add("cond-c-f0J-inside-arc-rprime",
            P.arc(trace.r_prime).interior_contains_arc(f0J))
        add("cond-d-f0J-disjoint-J", not arc_intersections(f0J, J))
    add("cond-e-preimage-disjoint-J",
        not preimage_arc(f0, J).intersects_arc(J))
    add("witness-a", J.contains(trace.a) and eval_circle(f0, trace.a) != trace.a)
    add("K-inside-J-interior", J.interior_contains_arc(K))
    kindK, f0K = map_subarc(f0, K)
    ends_ok = (kindK == "arc" and
               {f0K.start, f0K.end} == {trace.x0, trace.x1})
    add("f0K-endpoints-are-x0-x1", ends_ok and trace.x0 != trace.x1)
    add("x0-not-fixed-under-f0", eval_circle(f0, trace.x0) != trace.x0)
    add("Q-refines-P", set(trace.Q.points) ==
        set(P.points) | {J.start, J.end, K.start, K.end})
    vals_ok = all(eval_circle(f, P.points[j]) == W[j] for j in range(k))
    vals_ok = vals_ok and eval_circle(f, J.start) == eval_circle(f0, J.start)
    vals_ok = vals_ok and eval_circle(f, J.end) == eval_circle(f0, J.end)
    vals_ok = vals_ok and eval_circle(f, K.start) == trace.x0
    vals_ok = vals_ok and eval_circle(f, K.end) == trace.x0
    add("f-prescribed-values", vals_ok)
    add("cond-f-equal-off-J", maps_equal_off_arc(f, f0, excluded=J))
    add("f-constant-on-K", eval_circle(f, K.point_at(HALF)) == trace.x0
        and eval_circle(f, K.start) == trace.x0
        and eval_circle(f, K.end) == trace.x0)
    add("x0-not-fixed-under-f", eval_circle(f, trace.x0) != trace.x0)
    add("sup-f0-h-below-half-eps", sup_distance_circle(f0, h) < eps / 2)
    add("sup-f-f0-below-fifth-eps", sup_distance_circle(f, f0) < eps / 5)
    add("sup-f-h-below-four-fifths-eps",
        sup_distance_circle(f, h) < 4 * eps / 5)
    return checks


# --------------------------------------------------------- circle pipeline

def _choose_images(h: AdmissiblePLCircleMap, P: CirclePartition,
                   eps: Fraction) -> tuple[Fraction, ...]:
    """Distinct image points w_j != z_j within eps/20 chordally of h(z_j).

    Offsets come from the dyadic ladder scaled to eps/140 (angular), which
    keeps the chordal gap strictly under eps/20.  Point j first tries ladder
    entry j; collisions fall through to a shared overflow counter.
    """
    m = P.k
    scale = eps / 140
    used: set[Fraction] = set()
    images: list[Fraction] = []
    overflow = m
    for j in range(m):
        base = eval_circle(h, P.points[j])
        cand = norm_angle(base + dyadic_at(j) * scale)
        tries = 0
        while cand in used or cand == P.points[j]:
            cand = norm_angle(base + dyadic_at(overflow) * scale)
            overflow += 1
            tries += 1
            if tries > 4 * m + 64:
                raise ConstructionFailure(
                    "choose-images",
                    f"no admissible image for partition point {j}")
        used.add(cand)
        images.append(cand)
    return tuple(images)


def _interior_point_of_range(rs: CircleSet, t: Fraction) -> bool:
    if rs.full:
        return True
    return any(a.interior_contains(t) for a in rs.arcs)


def _choose_modification_arc(f0: AdmissiblePLCircleMap,
                             rs: CircleSet) -> tuple[Arc, Fraction, int, int, Fraction]:
    """Find (J, a, r, r', eta) satisfying conditions (a)-(e).

    Scans partition arcs in index order; inside each, candidate centres run
    over the unit dyadic grid coarsest-first, then the half-width eta shrinks
    dyadically until the exact predicates hold.
    """
    P = f0.partition
    pset = set(P.points)
    for r in range(P.k):
        arc_r = P.arc(r)
        for frac in unit_dyadics(6):
            a = arc_r.point_at(frac)
            fa = eval_circle(f0, a)
            if fa == a or fa in pset or a in pset:
                continue
            if not _interior_point_of_range(rs, a):
                continue
            r_prime = f0.arc_index(fa)
            for mexp in range(3, 64):
                eta = f0.lens[r] * Fraction(1, 2 ** mexp)
                J = Arc(a - eta, a + eta)
                if not arc_r.interior_contains_arc(J):
                    continue
                if not rs.interior_contains_arc(J):
                    continue
                kind, img = map_subarc(f0, J)
                if kind != "arc":
                    break  # constant arc cannot happen: f0 has none
                if not P.arc(r_prime).interior_contains_arc(img):
                    continue
                if arc_intersections(img, J):
                    continue
                if preimage_arc(f0, J).intersects_arc(J):
                    continue
                return J, a, r, r_prime, eta
    raise ConstructionFailure(
        "choose-J", "no modification arc satisfies conditions (a)-(e)")


def pick_moving_endpoint(value_of, e0, e1, step: str = "choose-x0"):
    """Choose, among the two endpoints of the flattened image, the one the
    map moves; the first endpoint is preferred and swapped out only when it
    is a fixed point.  Affine non-identity pieces fix at most one point, so
    both being fixed means the construction state is corrupt.
    """
    swapped = value_of(e0) == e0
    x0, x1 = (e1, e0) if swapped else (e0, e1)
    if value_of(x0) == x0:
        raise ConstructionFailure(step, "both candidate flat values are fixed")
    return x0, x1, swapped


def construct_non_iterate(h: AdmissiblePLCircleMap,
                          eps: Rat) -> ConstructionResult:
    """Produce f with rho(f, h) < eps, certified to have no iterative roots.

    Deterministic; raises ConstructionFailure naming the exhausted step if a
    grid runs out (not observed on admissible inputs), and ValueError for
    eps outside (0,1).
    """
    eps = Fraction(eps)
    delta = continuity_delta(h, eps)  # validates eps
    m = max(3, math.ceil(13 / delta))
    P = CirclePartition(tuple(Fraction(j, m) for j in range(m)))
    W = _choose_images(h, P, eps)
    f0 = AdmissiblePLCircleMap(P, W)
    rs = range_set(f0)
    J, a, r, r_prime, eta = _choose_modification_arc(f0, rs)

    y0 = norm_angle(a - eta / 2)
    y1 = norm_angle(a + eta / 2)
    K = Arc(y0, y1)
    e0, e1 = eval_circle(f0, y0), eval_circle(f0, y1)
    x0, x1, swapped = pick_moving_endpoint(lambda t: eval_circle(f0, t),
                                           e0, e1)

    Q = P.refine([J.start, y0, y1, J.end])
    image_of = {t: eval_circle(f0, t) for t in Q.points}
    image_of[y0] = x0
    image_of[y1] = x0
    f = AdmissiblePLCircleMap(Q, tuple(image_of[t] for t in Q.points))

    trace = ConstructionTrace(
        epsilon=eps, delta=delta, partition=P, images=W, f0=f0, J=J, a=a,
        K=K, x0=x0, x1=x1, r=r, r_prime=r_prime, Q=Q, f=f, swapped=swapped)
    failed = [c for c in validate_trace(trace, h) if not c.passed]
    if failed:
        raise ConstructionFailure(
            "validate-trace",
            "invariants failed: " + ", ".join(c.name for c in failed))
    if not sup_distance_circle(f, h) < eps:
        raise ConstructionFailure("final-distance", "rho(f, h) !< eps")

    outcome = certify_profiled([fiber_profile_circle(f, x0)])
    if isinstance(outcome, Abstention) or outcome.case != "C3":
        raise ConstructionFailure(
            "certify", f"expected a C3 certificate, got {outcome!r}")
    return ConstructionResult(f, trace, outcome)


# ------------------------------------------------------- interval pipeline

@dataclass(frozen=True)
class IntervalConstructionResult:
    f: PLMapInterval
    cert: NonRootCertificate


def _require_continuous(h: PLMapInterval):
    for p, q in zip(h.pieces, h.pieces[1:]):
        if p.value(p.hi) != q.value(q.lo):
            raise ValueError(
                f"input map is discontinuous at {p.hi}; the interval "
                "construction needs a continuous map")


def _tent_pieces(s: Fraction, e: Fraction, lc: bool, hc: bool,
                 base_a: Fraction, base_b: Fraction,
                 tau: Fraction, up: bool) -> list[Piece]:
    """Replace x -> base_a*x + base_b on [s,e] by base +- tent of height tau."""
    mdt = (s + e) / 2
    sign = 1 if up else -1
    rise = sign * tau / (mdt - s)
    left = Piece(s, mdt, lc, True, base_a + rise, base_b - rise * s)
    right = Piece(mdt, e, False, hc, base_a - rise, base_b + rise * e)
    return [left, right]


def _degenerate_free(h: PLMapInterval, tau: Fraction) -> PLMapInterval:
    """Tilt constant pieces and bump identity pieces; sup change <= tau.

    The tent height is capped at an eighth of the piece length so the new
    slopes stay in (0, 1/4] away from 0 (tilts) and in [3/4, 5/4] away from
    1 (bumps): the output has no constant and no identity piece.
    """
    out: list[Piece] = []
    for p in h.pieces:
        if p.is_degenerate() or (p.a != 0 and not (p.a == 1 and p.b == 0)):
            out.append(p)
            continue
        tau_p = min(tau, (p.hi - p.lo) / 8)
        if p.a == 0:
            up = p.b <= HALF
        else:
            up = (p.lo + p.hi) / 2 <= HALF
        out.extend(_tent_pieces(p.lo, p.hi, p.lo_closed, p.hi_closed,
                                p.a, p.b, tau_p, up))
    return PLMapInterval(tuple(out))


def _range_components(f: PLMapInterval) -> list[tuple[Fraction, Fraction]]:
    """Closed hulls of the connected components of the range."""
    spans = sorted((min(im[0], im[1]), max(im[0], im[1]))
                   for im in (p.image() for p in f.pieces))
    merged: list[list[Fraction]] = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged if lo < hi]


def _set_disjoint_from_closed(s: CardinalSet, lo: Fraction, hi: Fraction) -> bool:
    for p in s.points:
        if lo <= p <= hi:
            return False
    for iv in s.intervals:
        if iv.hi < lo or iv.lo > hi:
            continue
        if iv.hi == lo and not iv.hi_closed:
            continue
        if iv.lo == hi and not iv.lo_closed:
            continue
        return False
    return True


def construct_non_iterate_interval(h: PLMapInterval,
                                   eps: Rat) -> IntervalConstructionResult:
    """Interval-domain analogue: flatten a small subinterval to a constant.

    Best-effort construction, certified post hoc: the returned certificate is
    produced by the exact fiber machinery, never assumed.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0,1)")
    _require_continuous(h)
    f0 = _degenerate_free(h, eps / 4)
    bps = set(f0.breakpoints())
    for comp_lo, comp_hi in _range_components(f0):
        for frac in unit_dyadics(8):
            xi = comp_lo + (comp_hi - comp_lo) * frac
            if xi in bps or not 0 < xi < 1:
                continue
            fxi = eval_at(f0, xi)
            if fxi == xi or fxi in bps:
                continue
            piece = f0.piece_at(xi)
            img_piece = f0.piece_at(fxi)
            for mexp in range(3, 64):
                eta = eps / Fraction(2 ** mexp)
                u0, u1 = xi - eta, xi + eta
                if not (piece.lo < u0 and u1 < piece.hi):
                    continue
                if not (comp_lo < u0 and u1 < comp_hi):
                    continue
                if not 2 * eta * abs(piece.a) < eps / 4:
                    continue  # keep the flattened patch well inside eps
                v0, v1 = eval_at(f0, u0), eval_at(f0, u1)
                if not (img_piece.lo < min(v0, v1)
                        and max(v0, v1) < img_piece.hi):
                    continue
                if not (max(v0, v1) < u0 or u1 < min(v0, v1)):
                    continue  # (d) fails
                pre = preimage_interval(f0, Interval(u0, u1, True, True))
                if not _set_disjoint_from_closed(pre, u0, u1):
                    continue  # (e) fails
                return _flatten_interval(h, f0, piece, xi, eta, eps)
    raise ConstructionFailure(
        "choose-flat-interval",
        "no interval satisfies the separation conditions")


def _flatten_interval(h: PLMapInterval, f0: PLMapInterval, piece: Piece,
                      xi: Fraction, eta: Fraction,
                      eps: Fraction) -> IntervalConstructionResult:
    u0, u1 = xi - eta, xi + eta
    y0, y1 = xi - eta / 2, xi + eta / 2
    e0, e1 = eval_at(f0, y0), eval_at(f0, y1)
    x0, _, _ = pick_moving_endpoint(lambda t: eval_at(f0, t), e0, e1,
                                    step="choose-x0-interval")
    vu0, vu1 = eval_at(f0, u0), eval_at(f0, u1)
    pieces: list[Piece] = []
    for p in f0.pieces:
        if p is not piece:
            pieces.append(p)
            continue
        a_in = (x0 - vu0) / (y0 - u0)
        a_out = (vu1 - x0) / (u1 - y1)
        pieces.extend([
            Piece(p.lo, u0, p.lo_closed, True, p.a, p.b),
            Piece(u0, y0, False, True, a_in, x0 - a_in * y0),
            Piece(y0, y1, False, True, Fraction(0), x0),
            Piece(y1, u1, False, True, a_out, x0 - a_out * y1),
            Piece(u1, p.hi, False, p.hi_closed, p.a, p.b),
        ])
    f = PLMapInterval(tuple(pieces))
    if not sup_distance(f, h) < eps:
        raise ConstructionFailure("final-distance-interval", "sup |f-h| !< eps")
    outcome = certify_profiled([fiber_profile(f, x0)])
    if isinstance(outcome, Abstention) or outcome.case != "C3":
        raise ConstructionFailure(
            "certify-interval", f"expected a C3 certificate, got {outcome!r}")
    return IntervalConstructionResult(f, outcome)


# --------------------------------------------------------------------- JSON

def trace_to_json_dict(trace: ConstructionTrace) -> dict:
    return {
        "epsilon": str(trace.epsilon),
        "delta": str(trace.delta),
        "partition": [str(t) for t in trace.partition.points],
        "images": [str(w) for w in trace.images],
        "f0": circle_to_json(trace.f0),
        "J": {"start": str(trace.J.start), "end": str(trace.J.end)},
        "a": str(trace.a),
        "K": {"start": str(trace.K.start), "end": str(trace.K.end)},
        "x0": str(trace.x0),
        "x1": str(trace.x1),
        "r": trace.r,
        "r_prime": trace.r_prime,
        "Q": [str(t) for t in trace.Q.points],
        "f": circle_to_json(trace.f),
        "swapped": trace.swapped,
    }
