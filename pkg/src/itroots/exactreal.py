"""Guaranteed-correct comparison of chord lengths against rationals.

The only transcendental quantity in the whole library is the chordal
distance 2*sin(pi*d) between circle points at angular distance d (a rational
in [0, 1/2]).  ComparableReal wraps that value lazily and decides strict
comparisons against rationals by, in order:

1. exact shortcuts: d in {0, 1/6, 1/2} where the chord is rational
   (0, 1 and 2 -- the only rational chord values at rational angles);
2. the rational sandwich 4*d < 2*sin(pi*d) < (710/113)*d, strict for
   d in (0, 1/2), which settles every comparison with a safety margin;
3. directed-rounding interval evaluation at doubling precision
   (64 bits up to a 4096-bit cap), sound via mpmath's interval context.

If the cap is reached the comparison could only have been against the exact
value itself, which step 1 already resolved, so Indeterminate is raised as a
guard rather than an expected outcome.  Comparisons between two chords never
need refinement at all: the chord is strictly monotone in d on [0, 1/2].

Refinement results are memoized per instance; writes are idempotent, so
concurrent readers are safe under CPython.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Union

from mpmath import iv

_START_PREC = 64
_MAX_PREC = 4096

# chord(d) <= 2*pi*d < (710/113)*d  (and >= 4*d) on [0, 1/2]
_UPPER_SLOPE = Fraction(710, 113)
_LOWER_SLOPE = Fraction(4)

_EXACT_CHORDS = {
    Fraction(0): Fraction(0),
    Fraction(1, 6): Fraction(1),
    Fraction(1, 2): Fraction(2),
}


class Indeterminate(Exception):
    """Comparison undecided at maximum precision.

    Unreachable in the shipped pipelines (all their comparisons are strict
    inequalities against rationals, settled well before the cap); kept as a
    hard failure rather than a silent wrong answer.
    """


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    man = int(man)
    if man == 0:
        return Fraction(0)
    v = Fraction(man) * Fraction(2) ** exp
    return -v if sign else v


def _chord_enclosure(d: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    """Sound enclosure of 2*sin(pi*d) at the given working precision."""
    old = iv.prec
    try:
        iv.prec = prec
        x = iv.mpf(d.numerator) / iv.mpf(d.denominator)
        val = 2 * iv.sin(iv.pi * x)
        lo_raw, hi_raw = val._mpi_
    finally:
        iv.prec = old
    return _raw_to_fraction(lo_raw), _raw_to_fraction(hi_raw)


class ComparableReal:
    """The chord length 2*sin(pi*d) for a rational angular distance d."""

    __slots__ = ("d", "_prec", "_lo", "_hi")

    def __init__(self, d: Union[Fraction, int]):
        d = Fraction(d)
        if d < 0 or d > Fraction(1, 2):
            raise ValueError(f"angular distance {d} outside [0, 1/2]")
        self.d = d
        self._prec = 0
        self._lo: Optional[Fraction] = None
        self._hi: Optional[Fraction] = None

    # -- exact structure ---------------------------------------------------

    def exact_value(self) -> Optional[Fraction]:
        """The chord when it is rational (d in {0, 1/6, 1/2}), else None."""
        return _EXACT_CHORDS.get(self.d)

    def _refine(self, prec: int) -> tuple[Fraction, Fraction]:
        if self._prec < prec:
            lo, hi = _chord_enclosure(self.d, prec)
            self._lo, self._hi, self._prec = lo, hi, prec
        return self._lo, self._hi

    def compare(self, q: Union[Fraction, int]) -> int:
        """-1, 0 or +1 against a rational; 0 only for exact equality."""
        q = Fraction(q)
        exact = self.exact_value()
        if exact is not None:
            return -1 if exact < q else (1 if exact > q else 0)
        d = self.d
        if q <= 0:
            return 1  # chord > 0 for d > 0
        if q >= 2:
            return -1  # chord < 2 for d < 1/2
        if q <= _LOWER_SLOPE * d:
            return 1
        if q >= _UPPER_SLOPE * d:
            return -1
        prec = _START_PREC
        while prec <= _MAX_PREC:
            lo, hi = self._refine(prec)
            if hi < q:
                return -1
            if lo > q:
                return 1
            prec *= 2
        raise Indeterminate(f"2*sin(pi*{d}) vs {q} undecided at {_MAX_PREC} bits")

    def compare_real(self, other: "ComparableReal") -> int:
        """Chord lengths order exactly like their angular distances."""
        return (self.d > other.d) - (self.d < other.d)

    # -- operators ---------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, ComparableReal):
            return self.compare_real(other)
        return self.compare(other)

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __eq__(self, other) -> bool:
        if isinstance(other, ComparableReal):
            return self.d == other.d
        if isinstance(other, (int, Fraction)):
            return self._cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash(("chord", self.d))

    def __float__(self) -> float:
        lo, hi = self._refine(_START_PREC)
        return float((lo + hi) / 2)

    def __repr__(self) -> str:
        return f"ComparableReal(2*sin(pi*{self.d}))"
