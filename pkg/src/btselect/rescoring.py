"""Per-system rescoring factor from translation quality and lexical diversity.

``phi = ln(BLEU * (100 - TER) * MTLD)``. BLEU and TER come from the
system's translation of the devset (the same devset used as seed), MTLD
from the system's full backtranslated corpus.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .corpus import load_corpus
from .diversity import mtld
from .errors import ConfigError, FactorError
from .quality import corpus_bleu, corpus_ter


def compute_phi(bleu: float, ter: float, mtld: float, system: str | None = None) -> float:
    """Natural log of ``bleu * (100 - ter) * mtld``; must come out positive.

    Raises:
        FactorError: An input is out of range or the product is at most 1,
            which would give a zero or negative factor.
    """
    who = f"system {system!r}: " if system else ""
    for name, value in (("bleu", bleu), ("ter", ter), ("mtld", mtld)):
        if value is None or not math.isfinite(value):
            raise FactorError(f"{who}{name} must be a finite number, got {value!r}", system)
    if bleu <= 0:
        raise FactorError(f"{who}bleu must be > 0, got {bleu}", system)
    if ter >= 100:
        raise FactorError(f"{who}ter must be < 100, got {ter}", system)
    if mtld <= 0:
        raise FactorError(f"{who}mtld must be > 0, got {mtld}", system)
    product = bleu * (100.0 - ter) * mtld
    if product <= 1.0:
        raise FactorError(
            f"{who}bleu*(100-ter)*mtld = {product:.6g} <= 1 gives a non-positive factor", system
        )
    return math.log(product)


@dataclass(frozen=True)
class FactorEntry:
    bleu: float
    ter: float
    mtld: float
    phi: float
    provenance: str = "supplied"


@dataclass
class SystemFactorTable:
    entries: dict[str, FactorEntry] = field(default_factory=dict)

    def phis(self) -> dict[str, float]:
        return {name: e.phi for name, e in self.entries.items()}

    def __getitem__(self, system: str) -> FactorEntry:
        return self.entries[system]

    def __contains__(self, system: str) -> bool:
        return system in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_values(
        cls, values: Mapping[str, Mapping[str, float]], provenance: str = "supplied"
    ) -> SystemFactorTable:
        """Build from raw ``{system: {"bleu", "ter", "mtld"}}``.

        A ``phi`` given alongside the raw values must agree with them.
        """
        entries = {}
        for name in values:
            v = values[name]
            try:
                bleu, ter, d = float(v["bleu"]), float(v["ter"]), float(v["mtld"])
            except (KeyError, TypeError, ValueError) as exc:
                raise FactorError(f"system {name!r}: missing or invalid value ({exc})", name) from None
            phi = compute_phi(bleu, ter, d, name)
            given = v.get("phi")
            if given is not None and not math.isclose(float(given), phi, rel_tol=0, abs_tol=1e-9):
                raise FactorError(
                    f"system {name!r}: phi {given} does not match ln(bleu*(100-ter)*mtld) = {phi}",
                    name,
                )
            entries[name] = FactorEntry(bleu, ter, d, phi, provenance)
        if not entries:
            raise FactorError("factor table has no systems")
        return cls(entries)

    def to_json(self) -> dict:
        return {
            "systems": {
                name: {"bleu": e.bleu, "ter": e.ter, "mtld": e.mtld, "phi": e.phi}
                for name, e in self.entries.items()
            }
        }

    def write(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(self.to_json(), f, indent=2, sort_keys=False)
            f.write("\n")

    @classmethod
    def read(cls, path: str | os.PathLike) -> SystemFactorTable:
        with open(path, encoding="utf-8") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        if not isinstance(data, dict) or not isinstance(data.get("systems"), dict):
            raise ConfigError(f"{path}: expected an object with a 'systems' mapping")
        return cls.from_values(data["systems"])


@dataclass(frozen=True)
class SystemMeasurement:
    """Files needed to compute one system's factor."""

    name: str
    dev_hypothesis: str
    backtranslation: str


def measure_system(
    dev_hyp: Sequence, dev_ref: Sequence, backtranslation: Sequence, name: str | None = None
) -> dict[str, float]:
    try:
        d = mtld([s for s in backtranslation if len(s)])
    except ValueError as exc:
        raise FactorError(f"system {name!r}: {exc}", name) from None
    if d is None:
        raise FactorError(f"system {name!r}: MTLD undefined on its backtranslated corpus", name)
    try:
        return {
            "bleu": corpus_bleu(dev_hyp, dev_ref),
            "ter": corpus_ter(dev_hyp, dev_ref),
            "mtld": d,
        }
    except ValueError as exc:
        raise FactorError(f"system {name!r}: {exc}", name) from None


def build_factor_table(
    measurements: Sequence[SystemMeasurement],
    dev_reference: str | os.PathLike,
    lowercase: bool = False,
) -> SystemFactorTable:
    """Compute BLEU/TER on the devset and MTLD on each backtranslated corpus.

    Raises:
        FactorError: A system's phi cannot be formed; the message names it.
        OSError: A file is missing.
    """
    names = [m.name for m in measurements]
    if len(set(names)) != len(names):
        raise ConfigError("duplicate system in factor measurements")
    ref = load_corpus(dev_reference, "keep", lowercase)
    values = {}
    for m in measurements:
        hyp = load_corpus(m.dev_hypothesis, "keep", lowercase)
        if len(hyp) != len(ref):
            raise FactorError(
                f"system {m.name!r}: devset translation has {len(hyp)} lines, reference {len(ref)}",
                m.name,
            )
        bt = load_corpus(m.backtranslation, "keep", lowercase)
        values[m.name] = measure_system(hyp, ref, bt, m.name)
    return SystemFactorTable.from_values(values, provenance="computed")
