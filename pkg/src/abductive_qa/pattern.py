"""Generators, bonds, configurations, and the energy calculus.

A configuration is the interpretation graph for one (evidence, hypothesis)
pairing: grounded generators for concepts seen in text, ungrounded cue
generators pulled from the network, and tanh-squashed bonds between them.
Configuration energy is the negated sum of bond energies; lower energy means
higher probability, and all probability arithmetic downstream stays in the
log domain.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple


class NonFiniteInput(ValueError):
    """Raised when an energy or strength argument is NaN or infinite."""


class Grounding(str, enum.Enum):
    GROUNDED = "grounded"
    UNGROUNDED = "ungrounded"


class Level(str, enum.Enum):
    EVIDENCE = "evidence"
    HYPOTHESIS = "hypothesis"
    CUE = "cue"


@dataclass(frozen=True)
class Generator:
    """One concept node of an interpretation."""

    concept: int
    uri: str
    grounding: Grounding
    level: Level

    def key(self) -> tuple[int, Level]:
        return (self.concept, self.level)


@dataclass(frozen=True)
class Bond:
    """Directed, relation-labeled link between two generators (by index)."""

    from_idx: int
    to_idx: int
    relation: str
    phi: float
    energy: float

    def key(self) -> tuple[int, int, str]:
        return (self.from_idx, self.to_idx, self.relation)


def bond_energy(phi: float) -> float:
    """tanh of the assertion strength: odd, strictly increasing, in (-1, 1)."""
    if not math.isfinite(phi):
        raise NonFiniteInput(f"phi must be finite, got {phi}")
    return math.tanh(phi)


def make_bond(from_idx: int, to_idx: int, relation: str, phi: float) -> Bond:
    return Bond(from_idx, to_idx, relation, phi, bond_energy(phi))


class EnergySplit(NamedTuple):
    total: float
    grounded: float
    ungrounded: float


def _energy_split(generators: list[Generator], bonds: Iterable[Bond]) -> EnergySplit:
    grounded = 0.0
    ungrounded = 0.0
    for bond in bonds:
        both_grounded = (
            generators[bond.from_idx].grounding is Grounding.GROUNDED
            and generators[bond.to_idx].grounding is Grounding.GROUNDED
        )
        if both_grounded:
            grounded -= bond.energy
        else:
            ungrounded -= bond.energy
    return EnergySplit(grounded + ungrounded, grounded, ungrounded)


@dataclass(frozen=True)
class Configuration:
    """Interpretation graph with its energy split.

    `energy_grounded` sums bonds whose endpoints are both grounded;
    `energy_ungrounded` sums the rest — a partition, so the two add up to
    the total exactly.
    """

    generators: tuple[Generator, ...]
    bonds: tuple[Bond, ...]
    energy: float
    energy_grounded: float
    energy_ungrounded: float
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "generators": [
                {
                    "concept": g.concept,
                    "uri": g.uri,
                    "grounding": g.grounding.value,
                    "level": g.level.value,
                }
                for g in self.generators
            ],
            "bonds": [
                {
                    "from": b.from_idx,
                    "to": b.to_idx,
                    "relation": b.relation,
                    "phi": b.phi,
                    "energy": b.energy,
                }
                for b in self.bonds
            ],
            "energy": {
                "total": self.energy,
                "grounded": self.energy_grounded,
                "ungrounded": self.energy_ungrounded,
            },
            "degenerate": self.degenerate,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "Configuration":
        generators = [
            Generator(
                g["concept"], g["uri"], Grounding(g["grounding"]), Level(g["level"])
            )
            for g in data["generators"]
        ]
        bonds = [
            make_bond(b["from"], b["to"], b["relation"], b["phi"])
            for b in data["bonds"]
        ]
        return make_configuration(
            generators, bonds, degenerate=data.get("degenerate", False)
        )


def make_configuration(
    generators: Iterable[Generator],
    bonds: Iterable[Bond],
    degenerate: bool = False,
) -> Configuration:
    """Validate invariants and compute the energy split."""
    generators = list(generators)
    bonds = list(bonds)
    seen_g = set()
    for g in generators:
        if g.key() in seen_g:
            raise ValueError(f"duplicate generator {g.uri} at level {g.level.value}")
        seen_g.add(g.key())
    seen_b = set()
    for b in bonds:
        if not (0 <= b.from_idx < len(generators) and 0 <= b.to_idx < len(generators)):
            raise ValueError(f"bond endpoint out of range: {b}")
        if b.key() in seen_b:
            raise ValueError(f"duplicate bond {b.key()}")
        seen_b.add(b.key())
    split = _energy_split(generators, bonds)
    return Configuration(
        tuple(generators),
        tuple(bonds),
        split.total,
        split.grounded,
        split.ungrounded,
        degenerate,
    )


def config_energy(config: Configuration) -> EnergySplit:
    """Recompute (total, grounded, ungrounded) from the bond list."""
    return _energy_split(list(config.generators), config.bonds)


def config_log_weight(energy: float) -> float:
    """Log unnormalized probability of a configuration: -E."""
    if not math.isfinite(energy):
        raise NonFiniteInput(f"energy must be finite, got {energy}")
    return -energy
