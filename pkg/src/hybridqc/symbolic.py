"""Finite-window symbolic dynamics diagnostics.

Everything here inspects a single one-sided window of a sequence, so the
results are evidence about the underlying shift orbit, never proof; each
result carries the window length it was computed from.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import InsufficientDataError, ValidationError
from .sources import SequenceSource

INDEPENDENCE_BOUND = 64
INDEPENDENCE_TOL = 1e-9
# an independent verdict whose best residual is below tol * this factor is
# flagged as a near-dependence
NEAR_DEPENDENCE_FACTOR = 1e3

WITNESS_MAX_WORD_LEN = 12


@dataclass(frozen=True)
class OccurrenceSet:
    """Positions in a window where a word occurs as a prefix of the shift."""

    word: str
    positions: tuple[int, ...]
    window_len: int


@dataclass(frozen=True)
class PeriodSet:
    """Positions n where the length-``radius`` block at n repeats the one at 0."""

    radius: int
    positions: tuple[int, ...]
    window_len: int


def occurrences(source: SequenceSource, w: str, window_len: int) -> OccurrenceSet:
    """All match positions of w in the first window_len letters (overlaps included)."""
    if len(w) > window_len:
        raise ValidationError("word longer than the window")
    text = source.window(0, window_len)
    if not w:
        return OccurrenceSet(w, tuple(range(window_len + 1)), window_len)
    hits = []
    i = text.find(w)
    while i != -1:
        hits.append(i)
        i = text.find(w, i + 1)
    return OccurrenceSet(w, tuple(hits), window_len)


def max_gap(occ: OccurrenceSet | PeriodSet | Sequence[int]) -> int:
    """Largest difference between successive positions."""
    pos = getattr(occ, "positions", occ)
    if len(pos) < 2:
        raise InsufficientDataError("need at least 2 positions to measure gaps")
    return max(b - a for a, b in zip(pos, pos[1:]))


def epsilon_periods(source: SequenceSource, radius: int, window_len: int) -> PeriodSet:
    """Shifts n >= 1 under which the leading length-``radius`` block recurs.

    These are the return times of the window's start to within 2^-radius in
    the one-sided sequence metric; their max gap is a syndeticity diagnostic.
    """
    if radius < 1:
        raise ValidationError("radius must be >= 1")
    if radius > window_len:
        raise ValidationError("radius exceeds the window")
    text = source.window(0, window_len)
    base = text[:radius]
    hits = [n for n in range(1, window_len - radius + 1) if text[n:n + radius] == base]
    return PeriodSet(radius, tuple(hits), window_len)


def _factor_counts(text: str, n: int) -> Counter:
    return Counter(text[i:i + n] for i in range(len(text) - n + 1))


def complexity(source: SequenceSource, n: int, window_len: int) -> int:
    """Distinct length-n factors seen in the window (a lower bound for the
    sequence's true count)."""
    if n < 0:
        raise ValidationError("factor length must be >= 0")
    if n > window_len:
        raise ValidationError("factor length exceeds the window")
    if n == 0:
        return 1
    text = source.window(0, window_len)
    return len({text[i:i + n] for i in range(window_len - n + 1)})


@dataclass(frozen=True)
class ComplexityProfile:
    n_values: tuple[int, ...]
    counts: tuple[int, ...]
    window_len: int


def complexity_profile(
    source: SequenceSource, n_values: Sequence[int], window_len: int
) -> ComplexityProfile:
    counts = tuple(complexity(source, n, window_len) for n in n_values)
    return ComplexityProfile(tuple(n_values), counts, window_len)


def boshernitzan_score(source: SequenceSource, n: int, window_len: int) -> float:
    """n times the smallest observed length-n factor frequency.

    Frequencies are occurrence counts over the window_len - n + 1 factor
    slots, an empirical stand-in for cylinder measures.  Requires a window
    at least 1000x the factor length.
    """
    if n < 1:
        raise ValidationError("factor length must be >= 1")
    if window_len < 1000 * n:
        raise ValidationError(
            f"window of {window_len} too small for length {n}; need >= {1000 * n}"
        )
    counts = _factor_counts(source.window(0, window_len), n)
    eta = min(counts.values()) / (window_len - n + 1)
    return n * eta


class FactorStats(NamedTuple):
    """Per-length row of the diagnostics table."""

    n: int
    p_n: int
    eta_hat: float
    score: float


def factor_statistics(
    source: SequenceSource, n_values: Sequence[int], window_len: int
) -> list[FactorStats]:
    """Complexity, minimum factor frequency, and score for each length."""
    rows = []
    for n in n_values:
        if n < 1:
            raise ValidationError("factor length must be >= 1")
        if window_len < 1000 * n:
            raise ValidationError(
                f"window of {window_len} too small for length {n}; need >= {1000 * n}"
            )
        counts = _factor_counts(source.window(0, window_len), n)
        eta = min(counts.values()) / (window_len - n + 1)
        rows.append(FactorStats(n=n, p_n=len(counts), eta_hat=eta, score=n * eta))
    return rows


def pair_factor_occurs(
    a: SequenceSource,
    b: SequenceSource,
    r: str,
    s: str,
    rel_shift: int,
    window_len: int,
) -> tuple[int, ...]:
    """Positions p with r at p in a and s at p + rel_shift in b.

    These are the aligned occurrences of the pair (r, s) along the joint
    orbit of a with b shifted by rel_shift.
    """
    if len(r) != len(s):
        raise ValidationError("pair factors must have equal length")
    occ_a = set(occurrences(a, r, window_len).positions)
    occ_b = occurrences(b, s, window_len).positions
    hits = sorted(occ_a & {q - rel_shift for q in occ_b if q - rel_shift >= 0})
    return tuple(hits)


class Witness(NamedTuple):
    """A factor pair present in both languages but never aligned."""

    r: str
    s: str
    shift_range: tuple[int, int]


def witness_search(
    a: SequenceSource,
    b: SequenceSource,
    max_word_len: int,
    window_len: int,
    shift_range: int = 0,
) -> list[Witness]:
    """Equal-length factor pairs of (a, b) with no aligned occurrence.

    Each returned pair occurs in a's window and in b's window separately but
    never at a common position (for any relative shift in
    [-shift_range, shift_range]), which is finite-window evidence that the
    joint orbit closure omits the pair.  An empty list is consistent with a
    minimal product.
    """
    if max_word_len < 1:
        raise ValidationError("max_word_len must be >= 1")
    if max_word_len > WITNESS_MAX_WORD_LEN:
        raise ValidationError(f"max_word_len capped at {WITNESS_MAX_WORD_LEN}")
    if shift_range < 0:
        raise ValidationError("shift_range must be >= 0")
    ta = a.window(0, window_len)
    tb = b.window(0, window_len)
    out: list[Witness] = []
    for m in range(1, max_word_len + 1):
        fa = {ta[i:i + m] for i in range(len(ta) - m + 1)}
        fb = {tb[i:i + m] for i in range(len(tb) - m + 1)}
        aligned = set()
        for shift in range(-shift_range, shift_range + 1):
            lo = max(0, -shift)
            hi = min(len(ta) - m, len(tb) - m - shift)
            aligned.update((ta[i:i + m], tb[i + shift:i + shift + m]) for i in range(lo, hi + 1))
        for r in sorted(fa):
            for s in sorted(fb):
                if (r, s) not in aligned:
                    out.append(Witness(r, s, (-shift_range, shift_range)))
    return out


@dataclass(frozen=True)
class IndependenceVerdict:
    """Bounded search for a multiplicative relation theta^l = vartheta^k.

    ``dependent`` holds the first (l, k) with |l log theta - k log vartheta|
    within tolerance; otherwise the verdict is independence up to the bound.
    ``best`` is the closest near-miss either way, and ``near_dependence``
    flags independent verdicts whose best residual is suspiciously small.
    """

    theta: float
    vartheta: float
    bound: int
    tol: float
    dependent: tuple[int, int] | None
    best: tuple[int, int, float]

    @property
    def independent(self) -> bool:
        return self.dependent is None

    @property
    def near_dependence(self) -> bool:
        return self.independent and self.best[2] <= self.tol * NEAR_DEPENDENCE_FACTOR

    def describe(self) -> str:
        if self.dependent is not None:
            l, k = self.dependent
            return (
                f"dependent: {self.theta:.12g}^{l} = {self.vartheta:.12g}^{k} "
                f"within tol {self.tol:g}"
            )
        text = f"independent up to exponent bound {self.bound} (tol {self.tol:g})"
        if self.near_dependence:
            l, k, r = self.best
            text += f"; near-dependence at (l={l}, k={k}), residual {r:.3e}"
        return text


def multiplicative_independence(
    theta: float,
    vartheta: float,
    bound: int = INDEPENDENCE_BOUND,
    tol: float = INDEPENDENCE_TOL,
) -> IndependenceVerdict:
    """Scan exponents 1..bound for a log-linear relation between two growth rates."""
    if not (theta > 1.0 and vartheta > 1.0):
        raise ValidationError("growth rates must both exceed 1")
    if bound < 1:
        raise ValidationError("bound must be >= 1")
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    lt, lv = math.log(theta), math.log(vartheta)
    dependent = None
    best = (0, 0, math.inf)
    for l in range(1, bound + 1):
        for k in range(1, bound + 1):
            resid = abs(l * lt - k * lv)
            if resid < best[2]:
                best = (l, k, resid)
            if resid <= tol and dependent is None:
                dependent = (l, k)
        if dependent is not None:
            break
    return IndependenceVerdict(
        theta=theta, vartheta=vartheta, bound=bound, tol=tol, dependent=dependent, best=best
    )
