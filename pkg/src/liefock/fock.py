"""Fock bases for registers of bosonic, fermionic, and spin modes.

States are occupation tuples, one entry per mode: bosons count quanta up to
an explicit cutoff, fermions are 0/1, and a spin-S mode stores the level
index 0..2S (magnetic quantum number m = level - S). An optional constraint
restricts the basis to the sector of fixed total occupation. The enumeration
order is fixed once and for all so that indices are reproducible across runs
and can be baked into golden files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigError, InfeasibleSectorError, StateNotInBasisError

BOSON = "boson"
FERMION = "fermion"
SPIN = "spin"

_SERIAL_VERSION = 1


@dataclass(frozen=True)
class ModeSpec:
    """One register mode: its statistics and maximal occupation.

    capacity is the boson cutoff (>= 1), exactly 1 for fermions, and 2S for
    a spin-S mode (so the mode has 2S+1 levels).
    """

    kind: str
    capacity: int

    def __post_init__(self):
        if self.kind not in (BOSON, FERMION, SPIN):
            raise ValueError(f"unknown mode kind {self.kind!r}")
        if not isinstance(self.capacity, int) or self.capacity < 1:
            raise ValueError("mode capacity must be a positive integer")
        if self.kind == FERMION and self.capacity != 1:
            raise ValueError("fermion capacity is fixed to 1")

    @property
    def levels(self) -> int:
        return self.capacity + 1

    @property
    def spin_s(self) -> Fraction:
        if self.kind != SPIN:
            raise ValueError("spin_s is only defined for spin modes")
        return Fraction(self.capacity, 2)


def boson(cutoff: int) -> ModeSpec:
    """Bosonic mode with occupations 0..cutoff. The cutoff is mandatory."""
    return ModeSpec(BOSON, cutoff)


def fermion() -> ModeSpec:
    return ModeSpec(FERMION, 1)


def spin(s) -> ModeSpec:
    """Spin mode for half-integer or integer s > 0, stored as 2s+1 levels."""
    two_s = Fraction(s) * 2
    if two_s.denominator != 1 or two_s <= 0:
        raise ValueError(f"spin quantum number must be a positive half-integer, got {s}")
    return ModeSpec(SPIN, int(two_s))


def _enumerate_constrained(capacities, total):
    """All occupation tuples with given per-mode capacities summing to total,
    generated directly in ascending lexicographic order."""
    n_modes = len(capacities)
    suffix_cap = [0] * (n_modes + 1)
    for i in range(n_modes - 1, -1, -1):
        suffix_cap[i] = suffix_cap[i + 1] + capacities[i]

    out = []
    state = [0] * n_modes

    def rec(pos, remaining):
        if pos == n_modes - 1:
            if remaining <= capacities[pos]:
                state[pos] = remaining
                out.append(tuple(state))
            return
        lo = max(0, remaining - suffix_cap[pos + 1])
        hi = min(capacities[pos], remaining)
        for v in range(lo, hi + 1):
            state[pos] = v
            rec(pos + 1, remaining - v)

    rec(0, total)
    return out


def _enumerate_unconstrained(capacities):
    grids = [np.arange(c + 1) for c in capacities]
    mesh = np.meshgrid(*grids, indexing="ij")
    stacked = np.stack([m.ravel() for m in mesh], axis=-1)
    return [tuple(int(v) for v in row) for row in stacked]


class FockBasis:
    """Ordered, bijectively indexed basis of occupation tuples.

    The ordering is plain ascending tuple order on the occupations (first
    mode most significant), so the all-zero state comes first when present
    and within a fixed-N two-mode sector |j, N-j> appears at index j.
    """

    def __init__(self, modes, constraint=None):
        modes = list(modes)
        if not modes:
            raise ValueError("at least one mode is required")
        if not all(isinstance(m, ModeSpec) for m in modes):
            raise TypeError("modes must be ModeSpec instances")
        self.modes = tuple(modes)
        self.constraint = None if constraint is None else int(constraint)

        capacities = [m.capacity for m in self.modes]
        if self.constraint is not None:
            if self.constraint < 0:
                raise InfeasibleSectorError(
                    f"total-number constraint must be non-negative, got {self.constraint}"
                )
            if self.constraint > sum(capacities):
                raise InfeasibleSectorError(
                    f"constraint N={self.constraint} exceeds the capacity sum "
                    f"{sum(capacities)} of the mode list"
                )
            states = _enumerate_constrained(capacities, self.constraint)
            if not states:
                raise InfeasibleSectorError(
                    f"no occupation tuple satisfies N={self.constraint}"
                )
        else:
            states = _enumerate_unconstrained(capacities)

        self.states = tuple(states)
        self._index = {s: i for i, s in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __eq__(self, other):
        return (
            isinstance(other, FockBasis)
            and self.modes == other.modes
            and self.constraint == other.constraint
        )

    def __repr__(self):
        kinds = ",".join(f"{m.kind}({m.capacity})" for m in self.modes)
        return f"FockBasis([{kinds}], N={self.constraint}, dim={len(self)})"

    @property
    def dim(self) -> int:
        return len(self.states)

    def index_of(self, state) -> int:
        """Position of an occupation tuple; inverse of state_at."""
        key = tuple(int(v) for v in state)
        try:
            return self._index[key]
        except KeyError:
            raise StateNotInBasisError(
                f"occupation tuple {key} is not in {self!r}"
            ) from None

    def state_at(self, i) -> tuple:
        return self.states[i]

    def contains(self, state) -> bool:
        return tuple(int(v) for v in state) in self._index

    def vector(self, state) -> np.ndarray:
        """Unit coefficient vector for a basis state."""
        v = np.zeros(len(self), dtype=complex)
        v[self.index_of(state)] = 1.0
        return v

    def occupations_of_mode(self, mode) -> np.ndarray:
        """Occupation of one mode across all basis states, as an int array."""
        return np.array([s[mode] for s in self.states], dtype=int)

    def interior_mask(self, window=2, truncated_modes=(), two_sided_modes=()) -> np.ndarray:
        """Boolean mask of states at least `window` away from the listed
        truncation boundaries. `truncated_modes` excludes the top `window`
        levels of each listed mode; `two_sided_modes` excludes both ends."""
        mask = np.ones(len(self), dtype=bool)
        for m in truncated_modes:
            occ = self.occupations_of_mode(m)
            mask &= occ <= self.modes[m].capacity - window
        for m in two_sided_modes:
            occ = self.occupations_of_mode(m)
            mask &= (occ <= self.modes[m].capacity - window) & (occ >= window)
        return mask

    def to_json(self) -> str:
        """Versioned description; state lists are re-derivable, never stored."""
        payload = {
            "version": _SERIAL_VERSION,
            "modes": [{"kind": m.kind, "capacity": m.capacity} for m in self.modes],
            "constraint": self.constraint,
            "count": len(self),
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FockBasis":
        payload = json.loads(text)
        if payload.get("version") != _SERIAL_VERSION:
            raise ConfigError(
                f"unsupported basis serialization version {payload.get('version')}",
                field="version",
            )
        modes = [ModeSpec(m["kind"], int(m["capacity"])) for m in payload["modes"]]
        basis = cls(modes, payload.get("constraint"))
        count = payload.get("count")
        if count is not None and count != len(basis):
            raise ConfigError(
                f"stored state count {count} does not match re-derived {len(basis)}",
                field="count",
            )
        return basis


def enumerate_basis(modes, constraint=None) -> FockBasis:
    """Build the basis of all admissible occupation tuples, deterministically
    ordered. Raises InfeasibleSectorError for unsatisfiable constraints
    rather than returning an empty basis."""
    return FockBasis(modes, constraint)
