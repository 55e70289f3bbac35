"""Certificates that a self-map has no iterative roots of any order n >= 2.

The criterion keys on one distinguished non-fixed point x0 and compares the
size of the second-order fiber f^-2(x0) against the sizes of all other
first-order fibers.  Three cases, checked strongest first:

* C3: f^-2(x0) uncountable, every other fiber countable;
* C2: f^-2(x0) infinite, every other fiber finite;
* C1: #f^-2(x0) > N^3 where N bounds every other fiber.

Fiber sizes live in a three-level cardinality lattice
Finite(k) < Aleph0 < Continuum; that is all the piecewise-affine and symbolic
front ends can produce.  A certificate covers every order n >= 2 at once.
The converse direction is out of scope: absence of a certificate never means
roots exist.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Optional, Union

from .endo import Endofunction, fiber_sizes

SCOPE = "no roots of any order n >= 2"

_FINITE, _ALEPH0, _CONTINUUM = 0, 1, 2


@dataclass(frozen=True, order=False)
class Cardinal:
    """A point on the lattice Finite(k) < Aleph0 < Continuum."""

    level: int
    k: int = 0

    def __post_init__(self):
        if self.level not in (_FINITE, _ALEPH0, _CONTINUUM):
            raise ValueError(f"bad cardinal level {self.level}")
        if self.level == _FINITE:
            if self.k < 0:
                raise ValueError("finite cardinal must be nonnegative")
        elif self.k != 0:
            raise ValueError("infinite cardinals carry no finite count")

    @staticmethod
    def finite(k: int) -> "Cardinal":
        return Cardinal(_FINITE, k)

    @property
    def is_finite(self) -> bool:
        return self.level == _FINITE

    def _key(self) -> tuple[int, int]:
        return (self.level, self.k)

    def __lt__(self, other: "Cardinal") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "Cardinal") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "Cardinal") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "Cardinal") -> bool:
        return self._key() >= other._key()

    def mul(self, other: "Cardinal") -> "Cardinal":
        """Cardinal product: finite*finite multiplies, infinities absorb."""
        if self.is_finite and other.is_finite:
            return Cardinal.finite(self.k * other.k)
        if (self.is_finite and self.k == 0) or (other.is_finite and other.k == 0):
            return Cardinal.finite(0)
        return self if self >= other else other

    def add(self, other: "Cardinal") -> "Cardinal":
        """Cardinal sum (= union bound): infinities absorb."""
        if self.is_finite and other.is_finite:
            return Cardinal.finite(self.k + other.k)
        return self if self >= other else other

    def __repr__(self) -> str:
        if self.level == _FINITE:
            return f"Finite({self.k})"
        return "Aleph0" if self.level == _ALEPH0 else "Continuum"

    def to_json(self):
        if self.level == _FINITE:
            return {"kind": "finite", "value": self.k}
        return {"kind": "aleph0" if self.level == _ALEPH0 else "continuum"}

    @staticmethod
    def from_json(doc) -> "Cardinal":
        kind = doc.get("kind")
        if kind == "finite":
            return Cardinal.finite(int(doc["value"]))
        if kind == "aleph0":
            return ALEPH0
        if kind == "continuum":
            return CONTINUUM
        raise ValueError(f"unknown cardinal kind {kind!r}")


ALEPH0 = Cardinal(_ALEPH0)
CONTINUUM = Cardinal(_CONTINUUM)


@dataclass(frozen=True)
class FiberProfile:
    """Exact fiber-size data for one candidate point.

    fiber1 = #f^-1(x0), fiber2 = #f^-2(x0), max_other_fiber = sup over
    x != x0 of #f^-1(x), not_fixed = (f(x0) != x0).
    """

    point: Hashable
    fiber1: Cardinal
    fiber2: Cardinal
    max_other_fiber: Cardinal
    not_fixed: bool

    def __post_init__(self):
        for name in ("fiber1", "fiber2", "max_other_fiber"):
            if not isinstance(getattr(self, name), Cardinal):
                raise MalformedProfile(f"{name} must be a Cardinal")

    def to_json(self) -> dict:
        return {
            "point": str(self.point),
            "fiber1": self.fiber1.to_json(),
            "fiber2": self.fiber2.to_json(),
            "max_other_fiber": self.max_other_fiber.to_json(),
            "not_fixed": self.not_fixed,
        }


class MalformedProfile(ValueError):
    pass


@dataclass(frozen=True)
class NonRootCertificate:
    """Witness that f has no iterative roots of any order n >= 2."""

    x0: Hashable
    case: str  # "C1" | "C2" | "C3"
    evidence: FiberProfile
    scope: str = SCOPE

    def __post_init__(self):
        ev = self.evidence
        if not ev.not_fixed:
            raise ValueError("certificate requires a non-fixed point")
        if self.case == "C1":
            if not ev.max_other_fiber.is_finite:
                raise ValueError("C1 needs a finite bound on other fibers")
            n_cubed = Cardinal.finite(ev.max_other_fiber.k ** 3)
            if not ev.fiber2 > n_cubed:
                raise ValueError("C1 needs #f^-2(x0) > N^3")
        elif self.case == "C2":
            if ev.fiber2 < ALEPH0 or not ev.max_other_fiber.is_finite:
                raise ValueError("C2 needs infinite f^-2(x0), finite others")
        elif self.case == "C3":
            if ev.fiber2 != CONTINUUM or ev.max_other_fiber > ALEPH0:
                raise ValueError("C3 needs uncountable f^-2(x0), countable others")
        else:
            raise ValueError(f"unknown case {self.case!r}")

    def to_json(self) -> dict:
        return {
            "x0": str(self.x0),
            "case": self.case,
            "evidence": self.evidence.to_json(),
            "scope": self.scope,
        }


# Machine-readable abstention reasons.
REASON_NO_NON_FIXED = "no-non-fixed-point"
REASON_INEQUALITY = "inequality-fails"
REASON_FIBERS_TOO_LARGE = "fibers-too-large"
REASON_NO_CANDIDATES = "no-candidates"


@dataclass(frozen=True)
class Abstention:
    """Criterion inapplicable.  Never evidence that roots exist."""

    reason: str
    detail: str = ""

    def to_json(self) -> dict:
        return {"certificate": None, "reason": self.reason,
                "detail": self.detail}


CertifyOutcome = Union[NonRootCertificate, Abstention]


def _match_profile(p: FiberProfile) -> Optional[str]:
    """Strongest applicable case for one profile, or None."""
    if not p.not_fixed:
        return None
    if p.fiber2 == CONTINUUM and p.max_other_fiber <= ALEPH0:
        return "C3"
    if p.fiber2 >= ALEPH0 and p.max_other_fiber.is_finite:
        return "C2"
    if p.max_other_fiber.is_finite:
        n_cubed = Cardinal.finite(p.max_other_fiber.k ** 3)
        if p.fiber2 > n_cubed:
            return "C1"
    return None


def _failure_kind(p: FiberProfile) -> str:
    """Why a non-fixed profile missed every case."""
    if p.max_other_fiber.is_finite:
        return REASON_INEQUALITY
    return REASON_FIBERS_TOO_LARGE


def certify_profiled(profiles: Iterable[FiberProfile]) -> CertifyOutcome:
    """First profile matching a case wins (C3 checked before C2 before C1).

    Candidate order is the supplied order, so callers control determinism.
    """
    saw_any = False
    saw_non_fixed = False
    kinds: list[str] = []
    for p in profiles:
        if not isinstance(p, FiberProfile):
            raise MalformedProfile(f"not a FiberProfile: {p!r}")
        saw_any = True
        case = _match_profile(p)
        if case is not None:
            return NonRootCertificate(p.point, case, p)
        if p.not_fixed:
            saw_non_fixed = True
            kind = _failure_kind(p)
            if kind not in kinds:
                kinds.append(kind)
    if not saw_any:
        return Abstention(REASON_NO_CANDIDATES, "no candidate profiles supplied")
    if not saw_non_fixed:
        return Abstention(REASON_NO_NON_FIXED,
                          "every candidate point is fixed by the map")
    return Abstention("/".join(sorted(kinds)),
                      "no candidate satisfies C1, C2 or C3")


def finite_profile(f: Endofunction, x0: int,
                   counts: Optional[list[int]] = None) -> FiberProfile:
    """Exact FiberProfile of a finite endofunction at the point x0."""
    if counts is None:
        counts = fiber_sizes(f)
    t = f.table
    n = f.size
    fiber1 = counts[x0]
    fiber2 = sum(counts[y] for y in range(n) if t[y] == x0)
    max_other = max((counts[x] for x in range(n) if x != x0), default=0)
    return FiberProfile(
        point=x0,
        fiber1=Cardinal.finite(fiber1),
        fiber2=Cardinal.finite(fiber2),
        max_other_fiber=Cardinal.finite(max_other),
        not_fixed=t[x0] != x0,
    )


def _scan_candidates(f: Endofunction,
                     enforce_fiber2: bool) -> tuple[Optional[FiberProfile], str]:
    """First candidate profile passing C1, else (None, reason code).

    ``enforce_fiber2=False`` drops the #f^-2(x0) > N^3 requirement, leaving a
    condition that keys on first-order fibers alone.  That variant is
    deliberately unsound; the fuzz suite's negative control calls it to prove
    the second-order fiber is what carries the criterion.
    """
    counts = fiber_sizes(f)
    t = f.table
    saw_non_fixed = False
    for x0 in range(f.size):
        if t[x0] == x0:
            continue
        saw_non_fixed = True
        profile = finite_profile(f, x0, counts)
        if not enforce_fiber2:
            return profile, ""
        if profile.fiber2 > Cardinal.finite(profile.max_other_fiber.k ** 3):
            return profile, ""
    return None, (REASON_NO_NON_FIXED if not saw_non_fixed else REASON_INEQUALITY)


def certify_finite(f: Endofunction) -> CertifyOutcome:
    """Scan candidate points in index order; first C1 hit wins.

    For finite maps only C1 can apply.  Absence means "criterion
    inapplicable", never "roots exist".
    """
    profile, reason = _scan_candidates(f, enforce_fiber2=True)
    if profile is not None:
        return NonRootCertificate(profile.point, "C1", profile)
    if reason == REASON_NO_NON_FIXED:
        return Abstention(reason,
                          "every point is fixed; the criterion needs f(x0) != x0")
    return Abstention(reason, "no non-fixed point has #f^-2(x0) > N^3")
