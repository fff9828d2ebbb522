"""Substitution rules on finite alphabets and their matrix invariants.

Letters are single characters and words are plain Python strings, so the
alphabet of a rule is just the tuple of its letters.  Iterating a rule by
concatenation grows the familiar aperiodic sequences; the occurrence-count
matrix of a rule decides primitivity and carries the expansion eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError, ValidationError

# iterate() refuses to build words longer than this
WORD_GROWTH_CAP = 1 << 26

# moduli closer than this to 1 make the Pisot verdict a boundary call
UNIT_MODULUS_MARGIN = 1e-9


@dataclass(frozen=True)
class Substitution:
    """A letter -> word rewriting rule over single-character letters."""

    images: dict[str, str]
    name: str = ""

    def __post_init__(self) -> None:
        if not self.images:
            raise ValidationError("substitution needs at least one letter")
        for a in self.images:
            if not (isinstance(a, str) and len(a) == 1):
                raise ValidationError(f"letters must be single characters, got {a!r}")
        letters = set(self.images)
        for a, img in self.images.items():
            if not img:
                raise ValidationError(f"image of {a!r} is empty")
            extra = set(img) - letters
            if extra:
                raise ValidationError(
                    f"image of {a!r} uses letters outside the alphabet: {sorted(extra)}"
                )
        object.__setattr__(self, "images", dict(self.images))

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(self.images)

    @property
    def constant_length(self) -> int | None:
        """Common image length if all images share one, else None."""
        lengths = {len(img) for img in self.images.values()}
        return lengths.pop() if len(lengths) == 1 else None

    def _check_word(self, w: str) -> None:
        extra = set(w) - set(self.images)
        if extra:
            raise ValidationError(f"word uses letters outside the alphabet: {sorted(extra)}")

    def apply(self, w: str) -> str:
        """Image of a word: images of its letters concatenated in order."""
        self._check_word(w)
        return "".join(self.images[c] for c in w)

    def iterate(self, seed: str, k: int, cap: int = WORD_GROWTH_CAP) -> str:
        """k-fold application to a seed word; k = 0 returns the seed."""
        if k < 0:
            raise ValidationError("iteration count must be >= 0")
        self._check_word(seed)
        w = seed
        for _ in range(k):
            nxt = sum(len(self.images[c]) for c in w)
            if nxt > cap:
                raise ResourceLimitError(
                    f"iterate would produce {nxt} letters, above the cap of {cap}"
                )
            w = "".join(self.images[c] for c in w)
        return w

    def fixed_point_prefix(self, seed: str, min_len: int, cap: int = WORD_GROWTH_CAP) -> str:
        """First min_len letters of the one-sided fixed point grown from seed.

        Requires the image of the seed to start with the seed, so repeated
        application extends the word in place.
        """
        if min_len < 1:
            raise ValidationError("min_len must be >= 1")
        self._check_word(seed)
        if len(seed) != 1:
            raise ValidationError("seed must be a single letter")
        if not self.images[seed].startswith(seed):
            raise ValidationError(
                f"no fixed point from {seed!r}: image {self.images[seed]!r} "
                f"does not start with it"
            )
        w = seed
        while len(w) < min_len:
            grown = self.iterate(w, 1, cap=cap)
            if len(grown) == len(w):
                raise ValidationError(f"fixed point from {seed!r} does not grow")
            w = grown
        return w[:min_len]

    def matrix(self) -> SubstitutionMatrix:
        """Occurrence-count matrix: row w counts each letter in the image of w."""
        letters = self.alphabet
        rows = tuple(
            tuple(self.images[a].count(b) for b in letters) for a in letters
        )
        return SubstitutionMatrix(letters, rows)


@dataclass(frozen=True)
class SubstitutionMatrix:
    """Nonnegative integer matrix with exact (arbitrary-precision) arithmetic."""

    alphabet: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        k = len(self.alphabet)
        if len(self.entries) != k or any(len(row) != k for row in self.entries):
            raise ValidationError("matrix must be square over the alphabet")
        for row in self.entries:
            for e in row:
                if not isinstance(e, int) or e < 0:
                    raise ValidationError("entries must be nonnegative integers")

    @property
    def size(self) -> int:
        return len(self.alphabet)

    def __matmul__(self, other: "SubstitutionMatrix") -> "SubstitutionMatrix":
        if other.size != self.size:
            raise ValidationError("matrix sizes differ")
        k = self.size
        a, b = self.entries, other.entries
        rows = tuple(
            tuple(sum(a[i][m] * b[m][j] for m in range(k)) for j in range(k))
            for i in range(k)
        )
        return SubstitutionMatrix(self.alphabet, rows)

    def power(self, k: int) -> "SubstitutionMatrix":
        if k < 1:
            raise ValidationError("power must be >= 1")
        out = self
        for _ in range(k - 1):
            out = out @ self
        return out

    def entrywise_positive(self) -> bool:
        return all(e > 0 for row in self.entries for e in row)

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.entries)


@dataclass(frozen=True)
class SpectralInfo:
    """Dominant eigenvalue and the moduli of the rest.

    ``pisot`` is True only when the dominant eigenvalue exceeds 1 and every
    other modulus is strictly below 1, both by more than the unit-modulus
    margin.  ``indeterminate`` flags verdicts that rest on a modulus within
    the margin of 1, where floating point cannot resolve strictness.
    """

    dominant: float
    others: tuple[float, ...]
    pisot: bool
    indeterminate: bool


def spectral_info(m: SubstitutionMatrix, margin: float = UNIT_MODULUS_MARGIN) -> SpectralInfo:
    """Eigenvalue summary of an occurrence-count matrix (size <= 16)."""
    if m.size > 16:
        raise ValidationError("eigenvalue summary supports matrices up to size 16")
    vals = np.linalg.eigvals(np.array(m.entries, dtype=float))
    moduli = np.abs(vals)
    order = np.argsort(moduli)[::-1]
    dominant = float(moduli[order[0]])
    others = tuple(float(moduli[i]) for i in order[1:])
    near_unit = any(abs(x - 1.0) <= margin for x in (dominant, *others))
    pisot = dominant > 1.0 + margin and all(x < 1.0 - margin for x in others)
    return SpectralInfo(dominant=dominant, others=others, pisot=pisot, indeterminate=near_unit)


def primitivity_power(sub: Substitution, max_k: int = 16) -> int | None:
    """Smallest k <= max_k with the k-th matrix power entrywise positive."""
    if max_k < 1:
        raise ValidationError("max_k must be >= 1")
    m = sub.matrix()
    p = m
    for k in range(1, max_k + 1):
        if p.entrywise_positive():
            return k
        p = p @ m
    return None


def apply_literal_map(w: str, mapping: dict[str, str]) -> str:
    """Letterwise image of a word under a letter -> letter map."""
    for src, dst in mapping.items():
        if len(src) != 1 or len(dst) != 1:
            raise ValidationError(f"literal map must send letters to letters, got {src!r} -> {dst!r}")
    missing = set(w) - set(mapping)
    if missing:
        raise ValidationError(f"literal map does not cover: {sorted(missing)}")
    return "".join(mapping[c] for c in w)


# pool of single-character names for product-alphabet letters
_PAIR_LETTER_POOL = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class ProductSubstitution:
    """Coordinatewise product of two equal-constant-length rules.

    The product alphabet is the set of letter pairs; each pair is stored
    under a generated single-character name so the product is an ordinary
    Substitution, with lookup tables in both directions.
    """

    sub: Substitution
    letter_of: dict[tuple[str, str], str]
    pair_of: dict[str, tuple[str, str]]

    def image_pairs(self, pair: tuple[str, str]) -> tuple[tuple[str, str], ...]:
        """Image of a pair letter, spelled out as letter pairs."""
        if pair not in self.letter_of:
            raise ValidationError(f"{pair!r} is not a product-alphabet letter")
        word = self.sub.images[self.letter_of[pair]]
        return tuple(self.pair_of[c] for c in word)


def product_substitution(xi: Substitution, eta: Substitution) -> ProductSubstitution:
    """Pair two constant-length rules positionwise on the product alphabet."""
    la, lb = xi.constant_length, eta.constant_length
    if la is None or lb is None:
        raise ValidationError("product needs constant-length substitutions")
    if la != lb:
        raise ValidationError(f"image lengths differ: {la} vs {lb}")
    pairs = [(x, y) for x in xi.alphabet for y in eta.alphabet]
    if len(pairs) > len(_PAIR_LETTER_POOL):
        raise ValidationError("product alphabet too large to name")
    letter_of = {p: _PAIR_LETTER_POOL[i] for i, p in enumerate(pairs)}
    images = {}
    for x, y in pairs:
        wx, wy = xi.images[x], eta.images[y]
        images[letter_of[(x, y)]] = "".join(letter_of[(wx[i], wy[i])] for i in range(la))
    name = f"{xi.name or 'xi'}*{eta.name or 'eta'}"
    sub = Substitution(images, name=name)
    pair_of = {v: k for k, v in letter_of.items()}
    return ProductSubstitution(sub=sub, letter_of=letter_of, pair_of=pair_of)


# Built-in rules.  The four-letter paper-folding rule generates its sequence
# over {a, b} through the literal map below; Rudin-Shapiro uses the common
# four-letter construction with its own projection.
FCC = Substitution({"a": "ab", "b": "a"}, name="fcc")
TM = Substitution({"a": "ab", "b": "ba"}, name="tm")
PD = Substitution({"a": "ab", "b": "aa"}, name="pd")
PF = Substitution({"1": "12", "2": "32", "3": "14", "4": "34"}, name="pf")
PF_LITERAL_MAP = {"1": "a", "2": "a", "3": "b", "4": "b"}
RS = Substitution({"a": "ab", "b": "ac", "c": "db", "d": "dc"}, name="rs")
RS_LITERAL_MAP = {"a": "a", "b": "a", "c": "b", "d": "b"}
