"""Letter-sequence sources and the catalogue of named generators.

A source produces arbitrarily long windows of a one-sided sequence:
a substitution fixed point (optionally projected through a literal map),
a repeated periodic pattern, or an explicit finite word.
"""

from __future__ import annotations

from pathlib import Path

from .errors import InsufficientDataError, ValidationError
from .substitution import (
    FCC,
    PD,
    PF,
    PF_LITERAL_MAP,
    RS,
    RS_LITERAL_MAP,
    TM,
    Substitution,
    apply_literal_map,
)


class SequenceSource:
    """Base: a named producer of one-sided letter windows."""

    name: str

    def prefix(self, n: int) -> str:
        raise NotImplementedError

    def window(self, start: int, length: int) -> str:
        """Letters at positions start .. start+length-1."""
        if start < 0 or length < 0:
            raise ValidationError("window start and length must be >= 0")
        return self.prefix(start + length)[start:]


class SubstitutionSource(SequenceSource):
    """Fixed point of a substitution grown from a seed letter.

    The grown prefix is cached and extended on demand; a literal map, when
    present, projects every letter before it is handed out.
    """

    def __init__(
        self,
        sub: Substitution,
        seed: str,
        literal_map: dict[str, str] | None = None,
        name: str | None = None,
    ):
        if not sub.images.get(seed, "").startswith(seed):
            raise ValidationError(
                f"no fixed point from seed {seed!r}: its image must start with it"
            )
        self.sub = sub
        self.seed = seed
        self.literal_map = dict(literal_map) if literal_map else None
        self.name = name if name is not None else (sub.name or "substitution")
        self._raw = seed
        self._mapped = apply_literal_map(seed, self.literal_map) if self.literal_map else None

    def prefix(self, n: int) -> str:
        if n < 0:
            raise ValidationError("prefix length must be >= 0")
        while len(self._raw) < n:
            grown = self.sub.iterate(self._raw, 1)
            if self.literal_map:
                self._mapped = (self._mapped or "") + apply_literal_map(
                    grown[len(self._raw):], self.literal_map
                )
            self._raw = grown
        text = self._mapped if self.literal_map else self._raw
        return text[:n]


class PeriodicSource(SequenceSource):
    """Infinite repetition of a finite pattern."""

    def __init__(self, pattern: str, name: str | None = None):
        if not pattern:
            raise ValidationError("periodic pattern must be nonempty")
        self.pattern = pattern
        self.name = name if name is not None else f"periodic:{pattern}"

    @property
    def period(self) -> int:
        return len(self.pattern)

    def prefix(self, n: int) -> str:
        if n < 0:
            raise ValidationError("prefix length must be >= 0")
        reps = n // len(self.pattern) + 1
        return (self.pattern * reps)[:n]


class ExplicitSource(SequenceSource):
    """A fixed finite word; windows past its end are unavailable."""

    def __init__(self, word: str, name: str = "explicit"):
        self.word = word
        self.name = name

    def __len__(self) -> int:
        return len(self.word)

    def prefix(self, n: int) -> str:
        if n < 0:
            raise ValidationError("prefix length must be >= 0")
        if n > len(self.word):
            raise InsufficientDataError(
                f"source {self.name!r} holds {len(self.word)} letters, {n} requested"
            )
        return self.word[:n]


# name -> (substitution, seed, literal map)
BUILTINS: dict[str, tuple[Substitution, str, dict[str, str] | None]] = {
    "fcc": (FCC, "a", None),
    "tm": (TM, "a", None),
    "pd": (PD, "a", None),
    "pf": (PF, "1", PF_LITERAL_MAP),
    "rs": (RS, "a", RS_LITERAL_MAP),
}


def load_substitution_file(path: str | Path) -> tuple[Substitution, str, dict[str, str] | None]:
    """Read a rule from a text file of ``letter -> image`` lines.

    Optional directives: ``seed: <letter>`` (default: first letter listed)
    and ``map: <letter> -> <letter>`` lines building a literal map.
    ``#`` starts a comment.
    """
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"substitution file not found: {path}")
    images: dict[str, str] = {}
    literal: dict[str, str] = {}
    seed: str | None = None
    for lineno, rawline in enumerate(path.read_text().splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("seed:"):
            seed = line.split(":", 1)[1].strip()
            continue
        if line.lower().startswith("map:"):
            body = line.split(":", 1)[1]
            if "->" not in body:
                raise ValidationError(f"{path}:{lineno}: map line needs '->'")
            src, dst = (part.strip() for part in body.split("->", 1))
            literal[src] = dst
            continue
        if "->" not in line:
            raise ValidationError(f"{path}:{lineno}: expected 'letter -> image'")
        letter, image = (part.strip() for part in line.split("->", 1))
        if letter in images:
            raise ValidationError(f"{path}:{lineno}: duplicate letter {letter!r}")
        images[letter] = image
    if not images:
        raise ValidationError(f"{path}: no rules found")
    sub = Substitution(images, name=path.stem)
    if seed is None:
        seed = next(iter(images))
    return sub, seed, (literal or None)


def resolve_source(spec: str) -> SequenceSource:
    """Build a source from a catalogue name, ``periodic:<pattern>``, or ``file:<path>``."""
    if spec in BUILTINS:
        sub, seed, literal = BUILTINS[spec]
        return SubstitutionSource(sub, seed, literal, name=spec)
    if spec.startswith("periodic:"):
        return PeriodicSource(spec.split(":", 1)[1])
    if spec.startswith("file:"):
        sub, seed, literal = load_substitution_file(spec.split(":", 1)[1])
        return SubstitutionSource(sub, seed, literal, name=sub.name)
    raise ValidationError(
        f"unknown source {spec!r}; use one of {sorted(BUILTINS)}, "
        f"'periodic:<pattern>', or 'file:<path>'"
    )


def resolve_substitution(spec: str) -> tuple[Substitution, str, dict[str, str] | None]:
    """Substitution behind a source spec; periodic patterns have none."""
    if spec in BUILTINS:
        return BUILTINS[spec]
    if spec.startswith("file:"):
        return load_substitution_file(spec.split(":", 1)[1])
    raise ValidationError(f"{spec!r} is not a substitution source")
