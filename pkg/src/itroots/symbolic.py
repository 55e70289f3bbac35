"""Symbolic self-maps on infinite index-ray domains and measured block systems.

Two small exact calculi:

* RayMap: maps on disjoint unions of integer rays {j >= a} and finite integer
  intervals, with rules guarded by index ranges and actions restricted to
  index shifts (j -> j + c into a target family) and constants.  Composition
  and pointwise equality are decidable by guard splitting, and fibers have
  exact cardinalities (Finite(k) or Aleph0).  This is enough to verify
  square-root identities g o g = f on infinite domains and to show the N^3
  bound of the finite criterion is attained exactly.

* BlockSystem: opaque blocks (Cantor-type or single points) with two-valued
  measure tags and arrows that are either bijections or constant onto a
  point.  The built-in demonstration composes a measurable square root with
  itself and exhibits a map f = g^2 whose second-order fiber at a moving
  point has positive measure while all other fibers have measure zero: the
  measure-theoretic analogue of the cardinality criterion is unsound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Union

from .certifier import ALEPH0, Cardinal

INF = None  # hi bound of a ray


class RayFormatError(ValueError):
    """Malformed ray-map JSON; ``field`` names the offending key."""

    def __init__(self, message: str, field_name: str):
        super().__init__(message)
        self.field = field_name


# ------------------------------------------------------------------ guards

@dataclass(frozen=True)
class Guard:
    """An integer index range: [lo, hi], or the ray {j : j >= lo} (hi None)."""

    lo: int
    hi: Optional[int]

    def __post_init__(self):
        if self.hi is not None and self.hi < self.lo:
            raise ValueError(f"empty guard [{self.lo}, {self.hi}]")

    @property
    def is_ray(self) -> bool:
        return self.hi is None

    def contains(self, j: int) -> bool:
        return j >= self.lo and (self.hi is None or j <= self.hi)

    def cardinality(self) -> Cardinal:
        if self.is_ray:
            return ALEPH0
        return Cardinal.finite(self.hi - self.lo + 1)

    def shift(self, c: int) -> "Guard":
        return Guard(self.lo + c, None if self.hi is None else self.hi + c)

    def intersect(self, other: "Guard") -> Optional["Guard"]:
        lo = max(self.lo, other.lo)
        his = [h for h in (self.hi, other.hi) if h is not None]
        hi = min(his) if his else None
        if hi is not None and hi < lo:
            return None
        return Guard(lo, hi)

    def is_singleton(self) -> bool:
        return self.hi == self.lo

    def subset_of(self, other: "Guard") -> bool:
        if self.lo < other.lo:
            return False
        if other.hi is None:
            return True
        return self.hi is not None and self.hi <= other.hi


# ----------------------------------------------------------------- actions

@dataclass(frozen=True)
class Shift:
    dst: str
    c: int


@dataclass(frozen=True)
class Const:
    dst: str
    j: int


Action = Union[Shift, Const]


@dataclass(frozen=True)
class Rule:
    src: str
    guard: Guard
    action: Action

    def apply(self, j: int) -> tuple[str, int]:
        if isinstance(self.action, Shift):
            return (self.action.dst, j + self.action.c)
        return (self.action.dst, self.action.j)


# ------------------------------------------------------------------ domain

@dataclass(frozen=True)
class RayDomain:
    """Disjoint labelled families of indices, each a ray or finite interval."""

    families: tuple[tuple[str, Guard], ...]

    def __post_init__(self):
        labels = [lab for lab, _ in self.families]
        if len(set(labels)) != len(labels):
            raise ValueError("family labels must be distinct")
        object.__setattr__(self, "families",
                           tuple(sorted(self.families, key=lambda t: t[0])))

    def family(self, label: str) -> Guard:
        for lab, g in self.families:
            if lab == label:
                return g
        raise KeyError(f"unknown family {label!r}")

    def labels(self) -> list[str]:
        return [lab for lab, _ in self.families]

    def contains(self, point: tuple[str, int]) -> bool:
        lab, j = point
        try:
            return self.family(lab).contains(j)
        except KeyError:
            return False


@dataclass(frozen=True)
class RayMap:
    """A total map on a RayDomain given by guarded shift/const rules.

    Guards within one source family must partition its index set exactly;
    every action must land inside its target family (checked symbolically).
    """

    domain: RayDomain
    rules: tuple[Rule, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "rules",
            tuple(sorted(self.rules, key=lambda r: (r.src, r.guard.lo))))
        by_src: dict[str, list[Rule]] = {lab: [] for lab in self.domain.labels()}
        for rule in self.rules:
            if rule.src not in by_src:
                raise ValueError(f"rule source {rule.src!r} not in domain")
            by_src[rule.src].append(rule)
            self._check_action(rule)
        for lab, rules in by_src.items():
            fam = self.domain.family(lab)
            pos = fam.lo
            for i, rule in enumerate(rules):
                if rule.guard.lo != pos:
                    raise ValueError(
                        f"guards for {lab!r} leave a gap or overlap at {pos}")
                if rule.guard.is_ray:
                    if not fam.is_ray or i != len(rules) - 1:
                        raise ValueError(
                            f"ray guard for {lab!r} must be final on a ray family")
                    pos = None
                else:
                    pos = rule.guard.hi + 1
            if fam.is_ray:
                if pos is not None:
                    raise ValueError(f"guards for {lab!r} do not cover the ray")
            elif pos != fam.hi + 1:
                raise ValueError(f"guards for {lab!r} stop at {pos}, "
                                 f"family ends at {fam.hi}")

    def _check_action(self, rule: Rule):
        if isinstance(rule.action, Shift):
            target = self.domain.family(rule.action.dst)
            if not rule.guard.shift(rule.action.c).subset_of(target):
                raise ValueError(
                    f"shift rule {rule} leaves the target family")
        else:
            if not self.domain.contains((rule.action.dst, rule.action.j)):
                raise ValueError(f"const rule {rule} targets a missing point")

    def rules_for(self, label: str) -> list[Rule]:
        return [r for r in self.rules if r.src == label]

    def rule_at(self, point: tuple[str, int]) -> Rule:
        lab, j = point
        if not self.domain.contains(point):
            raise ValueError(f"point {point} outside the domain")
        for rule in self.rules_for(lab):
            if rule.guard.contains(j):
                return rule
        raise AssertionError(f"coverage invariant violated at {point}")

    def apply(self, point: tuple[str, int]) -> tuple[str, int]:
        return self.rule_at(point).apply(point[1])


def _merge_rules(rules: list[Rule]) -> list[Rule]:
    rules = sorted(rules, key=lambda r: (r.src, r.guard.lo))
    out: list[Rule] = []
    for rule in rules:
        if out:
            prev = out[-1]
            contiguous = (prev.src == rule.src and prev.guard.hi is not None
                          and prev.guard.hi + 1 == rule.guard.lo)
            if contiguous and prev.action == rule.action:
                out[-1] = Rule(prev.src, Guard(prev.guard.lo, rule.guard.hi),
                               rule.action)
                continue
        out.append(rule)
    return out


def ray_compose(g: RayMap, f: RayMap) -> RayMap:
    """The composition g o f, with guards split so every rule stays atomic."""
    if g.domain != f.domain:
        raise ValueError("composition needs a common domain")
    new_rules: list[Rule] = []
    for rule in f.rules:
        if isinstance(rule.action, Const):
            target = (rule.action.dst, rule.action.j)
            outer = g.rule_at(target).action
            if isinstance(outer, Shift):
                composed: Action = Const(outer.dst, rule.action.j + outer.c)
            else:
                composed = Const(outer.dst, outer.j)
            new_rules.append(Rule(rule.src, rule.guard, composed))
            continue
        c = rule.action.c
        for outer_rule in g.rules_for(rule.action.dst):
            pulled = outer_rule.guard.shift(-c).intersect(rule.guard)
            if pulled is None:
                continue
            outer = outer_rule.action
            if isinstance(outer, Shift):
                composed = Shift(outer.dst, c + outer.c)
            else:
                composed = Const(outer.dst, outer.j)
            new_rules.append(Rule(rule.src, pulled, composed))
    return RayMap(f.domain, tuple(_merge_rules(new_rules)))


def _atoms_for_label(maps: list[RayMap], label: str) -> list[Guard]:
    """Common guard refinement of several maps on one family."""
    fam = maps[0].domain.family(label)
    cuts = {fam.lo}
    for m in maps:
        for rule in m.rules_for(label):
            cuts.add(rule.guard.lo)
            if rule.guard.hi is not None:
                cuts.add(rule.guard.hi + 1)
    ordered = sorted(cuts)
    atoms = []
    for lo, nxt in zip(ordered, ordered[1:]):
        atoms.append(Guard(lo, nxt - 1))
    last = ordered[-1]
    if fam.is_ray:
        atoms.append(Guard(last, None))
    elif last <= fam.hi:
        atoms.append(Guard(last, fam.hi))
    return atoms


def ray_equal(f: RayMap, g: RayMap) -> bool:
    """Pointwise equality, decided on the common guard refinement.

    Two shifts agree iff their targets and offsets agree; a shift and a
    constant can only agree on a single index, which guard splitting exposes
    as a singleton atom.
    """
    if f.domain != g.domain:
        return False
    for label in f.domain.labels():
        for atom in _atoms_for_label([f, g], label):
            rf = f.rule_at((label, atom.lo))
            rg = g.rule_at((label, atom.lo))
            if atom.is_singleton():
                if rf.apply(atom.lo) != rg.apply(atom.lo):
                    return False
            elif rf.action != rg.action:
                return False
    return True


def ray_fiber_cardinal(f: RayMap, point: tuple[str, int]) -> Cardinal:
    """Exact #f^-1(point): shifts contribute <= 1, constants their guard."""
    if not f.domain.contains(point):
        raise ValueError(f"point {point} outside the domain")
    label, idx = point
    total = Cardinal.finite(0)
    for rule in f.rules:
        if isinstance(rule.action, Shift):
            if rule.action.dst == label and rule.guard.contains(idx - rule.action.c):
                total = total.add(Cardinal.finite(1))
        else:
            if rule.action.dst == label and rule.action.j == idx:
                total = total.add(rule.guard.cardinality())
    return total


def max_fiber_cardinal_excluding(f: RayMap,
                                 x0: tuple[str, int]) -> Cardinal:
    """sup over points != x0 of #f^-1, exact.

    Fiber counts are piecewise constant between shifted-guard boundaries, so
    boundaries, their neighbours, and constant targets exhaust the maxima.
    """
    candidates: set[tuple[str, int]] = set()
    for rule in f.rules:
        if isinstance(rule.action, Shift):
            shifted = rule.guard.shift(rule.action.c)
            marks = [shifted.lo]
            if shifted.hi is not None:
                marks.append(shifted.hi)
            for m in marks:
                for d in (-1, 0, 1):
                    candidates.add((rule.action.dst, m + d))
        else:
            for d in (-1, 0, 1):
                candidates.add((rule.action.dst, rule.action.j + d))
    best = Cardinal.finite(0)
    for cand in sorted(candidates):
        if cand == tuple(x0) or not f.domain.contains(cand):
            continue
        card = ray_fiber_cardinal(f, cand)
        if card > best:
            best = card
    return best


def materialize_truncated(f: RayMap,
                          tops: dict[str, int]) -> dict[tuple[str, int],
                                                        Optional[tuple[str, int]]]:
    """Finite restriction: keep indices up to tops[label] per family.

    Points whose image leaves the kept window map to None; callers check
    identities only along orbits that stay inside.
    """
    table: dict[tuple[str, int], Optional[tuple[str, int]]] = {}
    for label, fam in f.domain.families:
        top = tops[label]
        if fam.hi is not None:
            top = min(top, fam.hi)
        for j in range(fam.lo, top + 1):
            image = f.apply((label, j))
            ilabel, ij = image
            ifam = f.domain.family(ilabel)
            keep = ifam.lo <= ij <= min(tops[ilabel],
                                        ifam.hi if ifam.hi is not None else ij)
            table[(label, j)] = image if keep else None
    return table


# ---------------------------------------------------------- JSON for rays

def to_json_dict(f: RayMap) -> dict:
    fams = []
    for label, g in f.domain.families:
        if g.is_ray:
            fams.append({"label": label, "ray_from": g.lo})
        else:
            fams.append({"label": label, "lo": g.lo, "hi": g.hi})
    rules = []
    for rule in f.rules:
        if rule.guard.is_ray:
            guard = {"ray_from": rule.guard.lo}
        else:
            guard = {"lo": rule.guard.lo, "hi": rule.guard.hi}
        if isinstance(rule.action, Shift):
            action = {"shift": {"dst": rule.action.dst, "c": rule.action.c}}
        else:
            action = {"const": {"dst": rule.action.dst, "j": rule.action.j}}
        rules.append({"src": rule.src, "guard": guard, "action": action})
    return {"families": fams, "rules": rules}


def _parse_guard(doc, field_name: str) -> Guard:
    if not isinstance(doc, dict):
        raise RayFormatError("guard must be an object", field_name)
    try:
        if "ray_from" in doc:
            return Guard(int(doc["ray_from"]), None)
        return Guard(int(doc["lo"]), int(doc["hi"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise RayFormatError(f"bad guard: {exc}", field_name) from exc


def from_json_dict(doc: dict) -> RayMap:
    if not isinstance(doc, dict):
        raise RayFormatError("ray map document must be an object", "<root>")
    for key in ("families", "rules"):
        if key not in doc or not isinstance(doc[key], list):
            raise RayFormatError(f"missing or invalid '{key}' list", key)
    families = []
    for i, fam in enumerate(doc["families"]):
        if not isinstance(fam, dict) or "label" not in fam:
            raise RayFormatError("family needs a 'label'", f"families[{i}]")
        families.append((str(fam["label"]), _parse_guard(fam, f"families[{i}]")))
    rules = []
    for i, r in enumerate(doc["rules"]):
        if not isinstance(r, dict):
            raise RayFormatError("rule must be an object", f"rules[{i}]")
        try:
            guard = _parse_guard(r["guard"], f"rules[{i}].guard")
            act = r["action"]
            if "shift" in act:
                action: Action = Shift(str(act["shift"]["dst"]),
                                       int(act["shift"]["c"]))
            elif "const" in act:
                action = Const(str(act["const"]["dst"]),
                               int(act["const"]["j"]))
            else:
                raise RayFormatError("action needs 'shift' or 'const'",
                                     f"rules[{i}].action")
            rules.append(Rule(str(r["src"]), guard, action))
        except RayFormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise RayFormatError(f"bad rule: {exc}", f"rules[{i}]") from exc
    try:
        return RayMap(RayDomain(tuple(families)), tuple(rules))
    except ValueError as exc:
        raise RayFormatError(str(exc), "rules") from exc


def load(path) -> RayMap:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise RayFormatError(f"not valid JSON: {exc}", "<document>") from exc
    return from_json_dict(doc)


# ------------------------------------------------ built-in reference maps

def double_ray_domain() -> RayDomain:
    return RayDomain((("x", Guard(-12, None)), ("y", Guard(-6, None))))


def double_ray_map() -> RayMap:
    """The two-ray map with #f^-2(x_0) = 8 and all other fibers <= 2."""
    d = double_ray_domain()
    return RayMap(d, (
        Rule("x", Guard(-12, -11), Const("x", -4)),
        Rule("x", Guard(-10, -9), Const("x", -3)),
        Rule("x", Guard(-8, -7), Const("x", -2)),
        Rule("x", Guard(-6, -5), Const("x", -1)),
        Rule("x", Guard(-4, -1), Const("x", 0)),
        Rule("x", Guard(0, None), Shift("x", 1)),
        Rule("y", Guard(-6, -5), Const("y", -2)),
        Rule("y", Guard(-4, -3), Const("y", -1)),
        Rule("y", Guard(-2, -1), Const("y", 0)),
        Rule("y", Guard(0, None), Shift("y", 1)),
    ))


def double_ray_root() -> RayMap:
    """A square root of double_ray_map, crossing between the two rays."""
    d = double_ray_domain()
    return RayMap(d, (
        Rule("x", Guard(-12, -11), Const("y", -6)),
        Rule("x", Guard(-10, -9), Const("y", -5)),
        Rule("x", Guard(-8, -7), Const("y", -4)),
        Rule("x", Guard(-6, -5), Const("y", -3)),
        Rule("x", Guard(-4, -3), Const("y", -2)),
        Rule("x", Guard(-2, -1), Const("y", -1)),
        Rule("x", Guard(0, None), Shift("y", 0)),
        Rule("y", Guard(-6, -3), Shift("x", 2)),
        Rule("y", Guard(-2, -1), Const("x", 0)),
        Rule("y", Guard(0, None), Shift("x", 1)),
    ))


def constant_nine_domain() -> RayDomain:
    return RayDomain((("x", Guard(-8, 0)),))


def constant_nine_map() -> RayMap:
    d = constant_nine_domain()
    return RayMap(d, (Rule("x", Guard(-8, 0), Const("x", 0)),))


def constant_nine_root() -> RayMap:
    d = constant_nine_domain()
    return RayMap(d, (
        Rule("x", Guard(-8, -5), Shift("x", 4)),
        Rule("x", Guard(-4, 0), Const("x", 0)),
    ))


def tower_nineteen_domain() -> RayDomain:
    return RayDomain((("x", Guard(-16, 2)),))


def tower_nineteen_map() -> RayMap:
    d = tower_nineteen_domain()
    return RayMap(d, (
        Rule("x", Guard(-16, -9), Const("x", 2)),
        Rule("x", Guard(-8, -1), Const("x", 0)),
        Rule("x", Guard(0, 0), Const("x", 1)),
        Rule("x", Guard(1, 1), Const("x", 2)),
        Rule("x", Guard(2, 2), Const("x", 0)),
    ))


def tower_nineteen_root() -> RayMap:
    d = tower_nineteen_domain()
    return RayMap(d, (
        Rule("x", Guard(-16, -9), Const("x", 0)),
        Rule("x", Guard(-8, -1), Shift("x", -8)),
        Rule("x", Guard(0, 0), Const("x", 2)),
        Rule("x", Guard(1, 1), Const("x", 0)),
        Rule("x", Guard(2, 2), Const("x", 1)),
    ))


# ------------------------------------------------------------ block system

@dataclass(frozen=True)
class Block:
    label: str
    kind: str     # "cantor" | "point"
    measure: str  # "zero" | "positive"

    def __post_init__(self):
        if self.kind not in ("cantor", "point"):
            raise ValueError(f"unknown block kind {self.kind!r}")
        if self.measure not in ("zero", "positive"):
            raise ValueError(f"unknown measure tag {self.measure!r}")
        if self.kind == "point" and self.measure != "zero":
            raise ValueError("a single point cannot have positive measure")


@dataclass(frozen=True)
class BlockArrow:
    src: str
    dst: str
    kind: str            # "bijection" | "constant"
    tag: str = ""        # homeomorphism name(s), bijections only

    def __post_init__(self):
        if self.kind not in ("bijection", "constant"):
            raise ValueError(f"unknown arrow kind {self.kind!r}")


@dataclass(frozen=True)
class BlockSystem:
    blocks: tuple[Block, ...]
    arrows: tuple[BlockArrow, ...]

    def __post_init__(self):
        labels = {b.label for b in self.blocks}
        if len(labels) != len(self.blocks):
            raise ValueError("block labels must be distinct")
        srcs = [a.src for a in self.arrows]
        if sorted(srcs) != sorted(labels):
            raise ValueError("arrows must be total: one per block")
        for a in self.arrows:
            if a.dst not in labels:
                raise ValueError(f"arrow target {a.dst!r} missing")
            if self.block(a.src).kind == "cantor" \
                    and self.block(a.dst).kind == "cantor" \
                    and a.kind != "bijection":
                raise ValueError("cantor-to-cantor arrows must be bijections")
            if a.kind == "constant" and self.block(a.dst).kind != "point":
                raise ValueError("constant arrows must target point blocks")

    def block(self, label: str) -> Block:
        for b in self.blocks:
            if b.label == label:
                return b
        raise KeyError(label)

    def arrow(self, label: str) -> BlockArrow:
        for a in self.arrows:
            if a.src == label:
                return a
        raise KeyError(label)


def compose_blocks(sys_: BlockSystem) -> BlockSystem:
    """Arrows of the squared map; bijection tags compose right-to-left."""
    arrows = []
    for a in sys_.arrows:
        b = sys_.arrow(a.dst)
        if a.kind == "bijection" and b.kind == "bijection":
            kind = "bijection"
            tag = f"{b.tag}*{a.tag}" if a.tag or b.tag else ""
        else:
            if sys_.block(b.dst).kind != "point":
                raise ValueError(
                    "composite collapses a block onto one point inside a "
                    "non-point block; not representable at block granularity")
            kind, tag = "constant", ""
        arrows.append(BlockArrow(a.src, b.dst, kind, tag))
    return BlockSystem(sys_.blocks, tuple(arrows))


def build_ex4_system() -> BlockSystem:
    """Four Cantor-type blocks (one fat) feeding into a 4-cycle of points."""
    blocks = (
        Block("C_hat", "cantor", "positive"),
        Block("C1", "cantor", "zero"),
        Block("C2", "cantor", "zero"),
        Block("C3", "cantor", "zero"),
        Block("x0", "point", "zero"),
        Block("x1", "point", "zero"),
        Block("x2", "point", "zero"),
        Block("x3", "point", "zero"),
    )
    arrows = (
        BlockArrow("C_hat", "C1", "bijection", "phi1"),
        BlockArrow("C1", "C2", "bijection", "phi2"),
        BlockArrow("C2", "C3", "bijection", "phi3"),
        BlockArrow("C3", "x0", "constant"),
        BlockArrow("x0", "x1", "constant"),
        BlockArrow("x1", "x2", "constant"),
        BlockArrow("x2", "x3", "constant"),
        BlockArrow("x3", "x0", "constant"),
    )
    return BlockSystem(blocks, arrows)


@dataclass(frozen=True)
class BlockAssertion:
    key: str
    description: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class BlockReport:
    assertions: tuple[BlockAssertion, ...]

    @property
    def all_passed(self) -> bool:
        return all(a.passed for a in self.assertions)


def _point_fiber_measure(sys_: BlockSystem, target: str) -> str:
    """Measure tag of the fiber of a point block under the system's map."""
    positive = any(
        a.kind == "constant" and a.dst == target
        and sys_.block(a.src).measure == "positive"
        for a in sys_.arrows)
    return "positive" if positive else "zero"


def block_verify(g_system: BlockSystem, x0: str = "x0") -> BlockReport:
    """Verify the square of the given block map against the unsoundness claims."""
    f = compose_blocks(g_system)
    f2 = compose_blocks(f)
    checks: list[BlockAssertion] = []

    expected_f = {
        "C_hat": ("C2", "bijection", "phi2*phi1"),
        "C1": ("C3", "bijection", "phi3*phi2"),
        "C2": ("x0", "constant", ""),
        "C3": ("x1", "constant", ""),
        "x0": ("x2", "constant", ""),
        "x1": ("x3", "constant", ""),
        "x2": ("x0", "constant", ""),
        "x3": ("x1", "constant", ""),
    }
    got_f = {a.src: (a.dst, a.kind, a.tag) for a in f.arrows}
    checks.append(BlockAssertion(
        "square-sequences",
        "the squared map realizes the two expected block sequences",
        got_f == expected_f, f"got {got_f}"))

    fx0 = f.arrow(x0).dst
    checks.append(BlockAssertion(
        "x0-moves", "f(x0) differs from x0",
        f.arrow(x0).kind == "constant" and fx0 != x0, f"f({x0}) = {fx0}"))

    second_fiber = sorted(a.src for a in f2.arrows
                          if a.kind == "constant" and a.dst == x0)
    positive_part = [lab for lab in second_fiber
                     if g_system.block(lab).measure == "positive"]
    checks.append(BlockAssertion(
        "second-fiber-positive",
        "f^-2(x0) has positive measure, carried exactly by the fat block",
        positive_part == ["C_hat"],
        f"f^-2({x0}) = {second_fiber}, positive part {positive_part}"))

    other_fibers = {
        lab: _point_fiber_measure(f, lab)
        for lab in (b.label for b in g_system.blocks if b.kind == "point")
        if lab != x0}
    # points inside cantor blocks have singleton (measure-zero) fibers:
    # every cantor-to-cantor arrow of f is a bijection by construction
    checks.append(BlockAssertion(
        "other-fibers-null",
        "every fiber of a point other than x0 has measure zero",
        all(m == "zero" for m in other_fibers.values()), f"{other_fibers}"))

    checks.append(BlockAssertion(
        "measure-analogue-unsound",
        "the measure-criterion hypotheses hold although the map is a square",
        all(c.passed for c in checks),
        "a positive-measure second fiber with null other fibers coexists "
        "with the explicit square root the map was composed from"))
    return BlockReport(tuple(checks))


def block_verify_ex4() -> BlockReport:
    return block_verify(build_ex4_system())
