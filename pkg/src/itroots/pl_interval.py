"""Exact piecewise-affine self-maps of [0,1], possibly discontinuous.

A map is a finite ordered list of affine pieces whose half-open/closed
domains partition [0,1] exactly; endpoints carry explicit closed/open flags
rather than a convention, because the discontinuous corpus maps need genuine
half-open pieces.  All arithmetic is rational (fractions.Fraction); there is
no floating point anywhere in this module.

Preimages are exact: the solution set of f(x) = y is a finite union of
rational points and rational intervals (a CardinalSet), whose cardinality is
Finite(k) or Continuum.  That feeds the certifier: a point x0 whose
second-order preimage is uncountable while every other fiber stays countable
certifies that the map has no iterative roots of any order.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .certifier import (CONTINUUM, Cardinal, CertifyOutcome, FiberProfile,
                        certify_profiled)

Rat = Union[Fraction, int]

ZERO = Fraction(0)
ONE = Fraction(1)


class PLFormatError(ValueError):
    """Malformed piecewise-linear JSON; ``field`` names the offending key."""

    def __init__(self, message: str, field_name: str):
        super().__init__(message)
        self.field = field_name


def parse_rational(s, field_name: str = "<value>") -> Fraction:
    if isinstance(s, bool):
        raise PLFormatError(f"expected rational, got boolean", field_name)
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise PLFormatError(f"bad rational {s!r}: {exc}", field_name) from exc
    raise PLFormatError(f"expected rational string, got {type(s).__name__}",
                        field_name)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


# --------------------------------------------------------------- intervals

@dataclass(frozen=True)
class Interval:
    """A nondegenerate rational subinterval of [0,1] with endpoint flags."""

    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("interval needs lo < hi")

    def contains(self, x: Fraction) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def intersect(self, other: "Interval"):
        """Intersection: an Interval, a single point (Fraction), or None."""
        if (self.lo, not self.lo_closed) >= (other.lo, not other.lo_closed):
            lo, lo_closed = self.lo, self.lo_closed
            if self.lo == other.lo:
                lo_closed = self.lo_closed and other.lo_closed
        else:
            lo, lo_closed = other.lo, other.lo_closed
        if (self.hi, self.hi_closed) <= (other.hi, other.hi_closed):
            hi, hi_closed = self.hi, self.hi_closed
            if self.hi == other.hi:
                hi_closed = self.hi_closed and other.hi_closed
        else:
            hi, hi_closed = other.hi, other.hi_closed
        if lo < hi:
            return Interval(lo, hi, lo_closed, hi_closed)
        if lo == hi and lo_closed and hi_closed:
            return lo
        return None


def _merge_items(items: list[tuple[Fraction, Fraction, bool, bool]]):
    """Union of (possibly degenerate) flagged intervals, as disjoint pieces."""
    items.sort(key=lambda t: (t[0], not t[2], t[1]))
    out: list[list] = []
    for lo, hi, lc, hc in items:
        if out:
            plo, phi, plc, phc = out[-1]
            touches = lo < phi or (lo == phi and (phc or lc))
            if touches:
                if (hi, hc) > (phi, phc):
                    out[-1][1], out[-1][3] = hi, hc
                elif hi == phi:
                    out[-1][3] = phc or hc
                continue
        out.append([lo, hi, lc, hc])
    return out


@dataclass(frozen=True)
class CardinalSet:
    """A finite union of isolated rational points and rational intervals.

    Always kept normalized: intervals pairwise disjoint and non-touching,
    isolated points outside every interval.  Cardinality is Finite(#points)
    when no interval is present, Continuum otherwise.
    """

    points: tuple[Fraction, ...] = ()
    intervals: tuple[Interval, ...] = ()

    def __post_init__(self):
        items = [(p, p, True, True) for p in self.points]
        items += [(i.lo, i.hi, i.lo_closed, i.hi_closed) for i in self.intervals]
        merged = _merge_items(items)
        pts = tuple(lo for lo, hi, lc, hc in merged if lo == hi)
        ivs = tuple(Interval(lo, hi, lc, hc)
                    for lo, hi, lc, hc in merged if lo < hi)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "intervals", ivs)

    @staticmethod
    def empty() -> "CardinalSet":
        return CardinalSet()

    def union(self, other: "CardinalSet") -> "CardinalSet":
        return CardinalSet(self.points + other.points,
                           self.intervals + other.intervals)

    def contains(self, x: Fraction) -> bool:
        return x in self.points or any(i.contains(x) for i in self.intervals)

    def cardinality(self) -> Cardinal:
        if self.intervals:
            return CONTINUUM
        return Cardinal.finite(len(self.points))

    def is_empty(self) -> bool:
        return not self.points and not self.intervals


# ------------------------------------------------------------------ pieces

@dataclass(frozen=True)
class Piece:
    """One affine piece x -> a*x + b on a flagged subinterval of [0,1].

    Degenerate point pieces (lo == hi, both ends closed) are allowed; they
    arise naturally at discontinuity points.
    """

    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool
    a: Fraction
    b: Fraction

    def __post_init__(self):
        for name in ("lo", "hi", "a", "b"):
            v = getattr(self, name)
            if isinstance(v, int):
                object.__setattr__(self, name, Fraction(v))
            elif not isinstance(v, Fraction):
                raise ValueError(f"piece field {name} must be rational")
        if self.lo > self.hi:
            raise ValueError("piece needs lo <= hi")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("degenerate piece must be closed at both ends")
        for x in (self.lo, self.hi):
            v = self.a * x + self.b
            if v < 0 or v > 1:
                raise ValueError(f"piece leaves [0,1]: value {v} at x={x}")

    def contains(self, x: Fraction) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def value(self, x: Fraction) -> Fraction:
        return self.a * x + self.b

    def is_constant(self) -> bool:
        return self.a == 0

    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def image(self) -> tuple[Fraction, Fraction, bool, bool]:
        """Image as (lo, hi, lo_closed, hi_closed); degenerate when a == 0."""
        vlo, vhi = self.value(self.lo), self.value(self.hi)
        if self.a >= 0:
            return (vlo, vhi, self.lo_closed, self.hi_closed)
        return (vhi, vlo, self.hi_closed, self.lo_closed)


@dataclass(frozen=True)
class PLMapInterval:
    """A piecewise-affine self-map of [0,1]; pieces partition [0,1] exactly."""

    pieces: tuple[Piece, ...]

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("map needs at least one piece")
        pos = ZERO
        need_closed = True
        for i, p in enumerate(self.pieces):
            if p.lo != pos:
                raise ValueError(f"piece {i} starts at {p.lo}, expected {pos}")
            if p.lo_closed != need_closed:
                raise ValueError(f"piece {i} boundary flag clashes at {p.lo}")
            pos = p.hi
            need_closed = not p.hi_closed
        last = self.pieces[-1]
        if last.hi != ONE or not last.hi_closed:
            raise ValueError("pieces must cover [0,1] up to a closed 1")
        if self.pieces[0].lo != ZERO:
            raise ValueError("pieces must start at 0")

    @property
    def _los(self) -> list[Fraction]:
        return [p.lo for p in self.pieces]

    def piece_at(self, x: Fraction) -> Piece:
        if x < 0 or x > 1:
            raise ValueError(f"point {x} outside [0,1]")
        los = self._los
        idx = bisect_right(los, x) - 1
        for j in (idx, idx - 1, idx - 2):
            if j >= 0 and self.pieces[j].contains(x):
                return self.pieces[j]
        raise AssertionError(f"partition invariant violated at {x}")

    def breakpoints(self) -> list[Fraction]:
        pts = {p.lo for p in self.pieces} | {p.hi for p in self.pieces}
        return sorted(pts)

    @staticmethod
    def identity() -> "PLMapInterval":
        return PLMapInterval((Piece(ZERO, ONE, True, True, ONE, ZERO),))

    @staticmethod
    def constant(c: Rat) -> "PLMapInterval":
        return PLMapInterval((Piece(ZERO, ONE, True, True, ZERO, Fraction(c)),))


def eval_at(f: PLMapInterval, x: Rat) -> Fraction:
    """f(x) via the unique piece containing x."""
    x = Fraction(x)
    return f.piece_at(x).value(x)


def _normalize_pieces(pieces: list[Piece]) -> tuple[Piece, ...]:
    """Absorb degenerate pieces and fuse equal-affine neighbours."""
    out: list[Piece] = []
    for pc in pieces:
        while out:
            prev = out[-1]
            # degenerate pc glued onto prev whose affine already matches
            if (pc.is_degenerate() and prev.hi == pc.lo and not prev.hi_closed
                    and prev.value(pc.lo) == pc.value(pc.lo)):
                out[-1] = Piece(prev.lo, prev.hi, prev.lo_closed, True,
                                prev.a, prev.b)
                pc = None
                break
            # degenerate prev absorbed by pc
            if (prev.is_degenerate() and prev.hi == pc.lo and not pc.lo_closed
                    and pc.value(prev.lo) == prev.value(prev.lo)):
                out.pop()
                pc = Piece(pc.lo, pc.hi, True, pc.hi_closed, pc.a, pc.b)
                continue
            # same affine on adjacent domains
            if (prev.hi == pc.lo and prev.hi_closed != pc.lo_closed
                    and prev.a == pc.a and prev.b == pc.b):
                out.pop()
                pc = Piece(prev.lo, pc.hi, prev.lo_closed, pc.hi_closed,
                           pc.a, pc.b)
                continue
            break
        if pc is not None:
            out.append(pc)
    return tuple(out)


def compose(f: PLMapInterval, g: PLMapInterval) -> PLMapInterval:
    """f after g, refined so every output piece is affine."""
    fbps = set(f.breakpoints())
    new_pieces: list[Piece] = []

    def composite(atom_lo, atom_hi, lc, hc, gp: Piece, rep: Fraction):
        q = f.piece_at(gp.value(rep))
        a = q.a * gp.a
        b = q.a * gp.b + q.b
        new_pieces.append(Piece(atom_lo, atom_hi, lc, hc, a, b))

    for gp in g.pieces:
        if gp.is_degenerate():
            composite(gp.lo, gp.hi, True, True, gp, gp.lo)
            continue
        cuts: set[Fraction] = set()
        if gp.a != 0:
            for beta in fbps:
                x = (beta - gp.b) / gp.a
                if gp.lo < x < gp.hi:
                    cuts.add(x)
        positions = [gp.lo] + sorted(cuts) + [gp.hi]
        if gp.lo_closed:
            composite(gp.lo, gp.lo, True, True, gp, gp.lo)
        for u, v in zip(positions, positions[1:]):
            mid = (u + v) / 2
            composite(u, v, False, False, gp, mid)
            if v != gp.hi:
                composite(v, v, True, True, gp, v)
        if gp.hi_closed:
            composite(gp.hi, gp.hi, True, True, gp, gp.hi)
    return PLMapInterval(_normalize_pieces(new_pieces))


def pl_equal(f: PLMapInterval, g: PLMapInterval) -> bool:
    """Pointwise equality, decided on the common refinement."""
    bps = sorted(set(f.breakpoints()) | set(g.breakpoints()))
    for p in bps:
        if eval_at(f, p) != eval_at(g, p):
            return False
    for u, v in zip(bps, bps[1:]):
        mid = (u + v) / 2
        pf, pg = f.piece_at(mid), g.piece_at(mid)
        if pf.a != pg.a or pf.b != pg.b:
            return False
    return True


# ---------------------------------------------------------------- preimages

def preimage_point(f: PLMapInterval, y: Rat) -> CardinalSet:
    """Exact solution set of f(x) = y."""
    y = Fraction(y)
    if y < 0 or y > 1:
        raise ValueError(f"target {y} outside [0,1]")
    pts: list[Fraction] = []
    ivs: list[Interval] = []
    for p in f.pieces:
        if p.a == 0:
            if p.b == y:
                if p.is_degenerate():
                    pts.append(p.lo)
                else:
                    ivs.append(Interval(p.lo, p.hi, p.lo_closed, p.hi_closed))
        else:
            x = (y - p.b) / p.a
            if p.contains(x):
                pts.append(x)
    return CardinalSet(tuple(pts), tuple(ivs))


def preimage_interval(f: PLMapInterval, target: Interval) -> CardinalSet:
    """Exact solution set of f(x) in target."""
    pts: list[Fraction] = []
    ivs: list[Interval] = []
    for p in f.pieces:
        if p.a == 0:
            if target.contains(p.b):
                if p.is_degenerate():
                    pts.append(p.lo)
                else:
                    ivs.append(Interval(p.lo, p.hi, p.lo_closed, p.hi_closed))
            continue
        vlo, vhi, lc, hc = p.image()
        if p.is_degenerate():
            if target.contains(vlo):
                pts.append(p.lo)
            continue
        hit = Interval(vlo, vhi, lc, hc).intersect(target)
        if hit is None:
            continue
        if isinstance(hit, Fraction):
            pts.append((hit - p.b) / p.a)
            continue
        x1 = (hit.lo - p.b) / p.a
        x2 = (hit.hi - p.b) / p.a
        if p.a > 0:
            ivs.append(Interval(x1, x2, hit.lo_closed, hit.hi_closed))
        else:
            ivs.append(Interval(x2, x1, hit.hi_closed, hit.lo_closed))
    return CardinalSet(tuple(pts), tuple(ivs))


def preimage_set(f: PLMapInterval, s: CardinalSet) -> CardinalSet:
    out = CardinalSet.empty()
    for p in s.points:
        out = out.union(preimage_point(f, p))
    for iv in s.intervals:
        out = out.union(preimage_interval(f, iv))
    return out


def preimage2_point(f: PLMapInterval, y: Rat) -> CardinalSet:
    """Exact f^-2({y}), assembled as the preimage of the preimage."""
    return preimage_set(f, preimage_point(f, Fraction(y)))


# ------------------------------------------------------------ fiber profile

def max_other_fiber(f: PLMapInterval, x0: Fraction) -> Cardinal:
    """sup over y != x0 of #f^-1(y), exact.

    A nondegenerate constant piece with value != x0 makes some other fiber a
    continuum.  Otherwise every fiber y != x0 is finite and the count of
    per-piece hits is piecewise constant in y, so scanning image endpoints
    and gap midpoints is exhaustive.
    """
    images: list[tuple[Fraction, Fraction, bool, bool]] = []
    for p in f.pieces:
        if p.a == 0 and not p.is_degenerate():
            if p.b != x0:
                return CONTINUUM
            continue  # flat at x0: contributes to fiber(x0) only
        images.append(p.image())
    values = sorted({v for im in images for v in (im[0], im[1])})
    candidates: list[Fraction] = [v for v in values if v != x0]
    for u, v in zip(values, values[1:]):
        mid = (u + v) / 2
        if mid == x0:
            candidates.extend(((u + x0) / 2, (x0 + v) / 2))
        else:
            candidates.append(mid)
    best = 0
    for y in candidates:
        cnt = 0
        for vlo, vhi, lc, hc in images:
            if vlo == vhi:
                cnt += 1 if y == vlo else 0
            else:
                cnt += 1 if Interval(vlo, vhi, lc, hc).contains(y) else 0
        best = max(best, cnt)
    return Cardinal.finite(best)


def fiber_profile(f: PLMapInterval, x0: Rat) -> FiberProfile:
    """Exact cardinal fiber data of f at x0, ready for the certifier."""
    x0 = Fraction(x0)
    if x0 < 0 or x0 > 1:
        raise ValueError(f"point {x0} outside [0,1]")
    return FiberProfile(
        point=x0,
        fiber1=preimage_point(f, x0).cardinality(),
        fiber2=preimage2_point(f, x0).cardinality(),
        max_other_fiber=max_other_fiber(f, x0),
        not_fixed=eval_at(f, x0) != x0,
    )


def certification_candidates(f: PLMapInterval) -> list[Fraction]:
    """Deterministic candidate points for certification.

    Values of constant pieces come first, then their images (an uncountable
    second-order fiber must be reachable through a constant piece's value
    chain, and f^-2 needs chains of length two), then all breakpoint images.
    """
    cands: list[Fraction] = []

    def push(v: Fraction):
        if v not in cands:
            cands.append(v)

    flats = [p.b for p in f.pieces if p.a == 0 and not p.is_degenerate()]
    for v in flats:
        push(v)
    for v in flats:
        push(eval_at(f, v))
    for bp in f.breakpoints():
        push(eval_at(f, bp))
    return cands


def certify_map(f: PLMapInterval) -> CertifyOutcome:
    """Run the certifier over the map's deterministic candidate points."""
    return certify_profiled(fiber_profile(f, c)
                            for c in certification_candidates(f))


# ------------------------------------------------------------- sup distance

def sup_distance(f: PLMapInterval, g: PLMapInterval) -> Fraction:
    """sup |f - g| over [0,1], exact; returned even when not attained.

    On each cell of the common refinement the difference is affine, so the
    supremum is a maximum over cell-endpoint limit values plus the actual
    values at breakpoints (where piece ownership matters).
    """
    bps = sorted(set(f.breakpoints()) | set(g.breakpoints()))
    best = ZERO
    for p in bps:
        best = max(best, abs(eval_at(f, p) - eval_at(g, p)))
    for u, v in zip(bps, bps[1:]):
        mid = (u + v) / 2
        pf, pg = f.piece_at(mid), g.piece_at(mid)
        da, db = pf.a - pg.a, pf.b - pg.b
        best = max(best, abs(da * u + db), abs(da * v + db))
    return best


# --------------------------------------------------------------------- JSON

def to_json_dict(f: PLMapInterval) -> dict:
    return {"pieces": [{
        "lo": format_rational(p.lo), "hi": format_rational(p.hi),
        "lo_closed": p.lo_closed, "hi_closed": p.hi_closed,
        "a": format_rational(p.a), "b": format_rational(p.b),
    } for p in f.pieces]}


def from_json_dict(doc: dict) -> PLMapInterval:
    if not isinstance(doc, dict) or "pieces" not in doc:
        raise PLFormatError("expected an object with a 'pieces' list", "pieces")
    raw = doc["pieces"]
    if not isinstance(raw, list) or not raw:
        raise PLFormatError("'pieces' must be a non-empty list", "pieces")
    pieces = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise PLFormatError(f"pieces[{i}] must be an object", "pieces")
        try:
            piece = Piece(
                parse_rational(item["lo"], f"pieces[{i}].lo"),
                parse_rational(item["hi"], f"pieces[{i}].hi"),
                bool(item["lo_closed"]), bool(item["hi_closed"]),
                parse_rational(item["a"], f"pieces[{i}].a"),
                parse_rational(item["b"], f"pieces[{i}].b"),
            )
        except KeyError as exc:
            raise PLFormatError(f"pieces[{i}] missing key {exc.args[0]!r}",
                                f"pieces[{i}].{exc.args[0]}") from exc
        except ValueError as exc:
            if isinstance(exc, PLFormatError):
                raise
            raise PLFormatError(f"pieces[{i}]: {exc}", f"pieces[{i}]") from exc
        pieces.append(piece)
    try:
        return PLMapInterval(tuple(pieces))
    except ValueError as exc:
        raise PLFormatError(str(exc), "pieces") from exc


def load(path) -> PLMapInterval:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise PLFormatError(f"not valid JSON: {exc}", "<document>") from exc
    return from_json_dict(doc)
