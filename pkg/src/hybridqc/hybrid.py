"""Real-valued lattice potentials from letter sequences and their convex mixes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Mapping

import numpy as np

from .errors import ValidationError

# letter values used throughout unless an experiment overrides them
DEFAULT_VALUE_MAP: dict[str, float] = {"a": -1.0, "b": 1.0}

# distinct potential values are compared after rounding to this many decimals
VALUE_DECIMALS = 12


def letters_to_values(w: str, value_map: Mapping[str, float]) -> np.ndarray:
    """Map each letter of a word to its numeric value."""
    missing = set(w) - set(value_map)
    if missing:
        raise ValidationError(f"value map does not cover: {sorted(missing)}")
    lut = {c: float(v) for c, v in value_map.items()}
    return np.array([lut[c] for c in w], dtype=np.float64)


@dataclass(frozen=True)
class HybridPotential:
    """Sitewise mix kappa * v[n] + (1 - kappa) * u[n + shift] of two parents."""

    values: np.ndarray
    kappa: float
    shift: int
    provenance: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.values)


def hybridize(
    v: np.ndarray,
    u: np.ndarray,
    kappa: float,
    shift: int = 0,
    provenance: dict | None = None,
) -> HybridPotential:
    """Convex combination of v with u shifted left by ``shift`` sites."""
    if not 0.0 <= kappa <= 1.0:
        raise ValidationError(f"kappa must lie in [0, 1], got {kappa}")
    if shift < 0:
        raise ValidationError("shift must be >= 0; swap the parents for the other side")
    v = np.asarray(v, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    n = len(v)
    if len(u) < n + shift:
        raise ValidationError(
            f"shifted parent too short: need {n + shift} values, have {len(u)}"
        )
    values = kappa * v + (1.0 - kappa) * u[shift:shift + n]
    return HybridPotential(
        values=values, kappa=kappa, shift=shift, provenance=dict(provenance or {})
    )


def value_set(p: HybridPotential) -> np.ndarray:
    """Sorted distinct potential values (rounded before comparison)."""
    return np.unique(np.round(p.values, VALUE_DECIMALS))


def value_letters(values: np.ndarray) -> str:
    """Encode a value array as a word, one letter per distinct value.

    Letters are assigned to the sorted distinct values in order, so equal
    arrays always encode identically; useful for running factor diagnostics
    on a mixed potential.
    """
    rounded = np.round(np.asarray(values, dtype=np.float64), VALUE_DECIMALS)
    distinct = np.unique(rounded)
    pool = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789abcdefghijklmnopqrstuvwxyz"
    if len(distinct) > len(pool):
        raise ValidationError("too many distinct values to letter-encode")
    lut = {val: pool[i] for i, val in enumerate(distinct.tolist())}
    return "".join(lut[val] for val in rounded.tolist())


def write_potential_csv(p: HybridPotential, fh: IO[str]) -> None:
    """Dump a potential as ``n,V_n`` rows for inspection."""
    fh.write("n,V_n\n")
    for n, val in enumerate(p.values):
        fh.write(f"{n},{val:.17g}\n")
