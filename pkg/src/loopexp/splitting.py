"""Two-subspace decompositions of the loop algebra and their admissibility checks.

Three kinds are supported: a generator-index split (mode-independent), the
zero-mode subalgebra split, and the even/odd mode-parity coset split.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from .algebra import StructureConstants
from .loop import LoopLabel, ModeWindow, enumerate_generators


class SplitKind(Enum):
    GENERIC_INDEX = "generic"
    ZERO_MODE_SUBALGEBRA = "zero_mode"
    MODE_PARITY_COSET = "mode_parity"


class InvalidParams(ValueError):
    """Splitting parameters inconsistent with the requested kind."""


@dataclass(frozen=True)
class Splitting:
    """A declared V0 + V1 decomposition with a total sector function on labels."""

    kind: SplitKind
    v0_gens: frozenset[int] | None = None
    dim: int | None = None

    def sector(self, label: LoopLabel) -> int:
        if self.kind is SplitKind.GENERIC_INDEX:
            return 0 if label.gen in self.v0_gens else 1
        if self.kind is SplitKind.ZERO_MODE_SUBALGEBRA:
            return 0 if label.mode == 0 else 1
        return label.mode % 2


def make_splitting(kind: SplitKind, *, v0_gens=None, dim: int | None = None) -> Splitting:
    """Construct a splitting, validating the kind-specific parameters."""
    if kind is SplitKind.GENERIC_INDEX:
        if not v0_gens:
            raise InvalidParams("generic splitting requires a nonempty v0_gens set")
        if dim is None:
            raise InvalidParams("generic splitting requires the algebra dimension")
        gens = frozenset(v0_gens)
        if any(not isinstance(g, int) or not 1 <= g <= dim for g in gens):
            raise InvalidParams(f"v0_gens {sorted(gens)} not within 1..{dim}")
        if len(gens) >= dim:
            raise InvalidParams("v0_gens must be a proper subset of the generators")
        return Splitting(kind, gens, dim)
    if v0_gens:
        raise InvalidParams(f"v0_gens only applies to the generic kind, not {kind.value}")
    return Splitting(kind)


class SectorWitness(NamedTuple):
    """A structure-constant tuple violating a sector condition; the stored
    value re-verifies against loop_structure_constant."""

    x: LoopLabel
    y: LoopLabel
    z: LoopLabel
    value: Fraction


@dataclass
class SplitCheckReport:
    is_subalgebra_v0: bool | None = None
    subalgebra_witnesses: list[SectorWitness] = field(default_factory=list)
    is_symmetric_coset: bool | None = None
    coset_witnesses: list[SectorWitness] = field(default_factory=list)
    window_censored: int = 0


def check_subalgebra(f: StructureConstants, s: Splitting, window: ModeWindow) -> SplitCheckReport:
    """Does every windowed bracket of two sector-0 labels land in sector 0?"""
    report = SplitCheckReport()
    labels = [lab for lab in enumerate_generators(f, window) if s.sector(lab) == 0]
    for x in labels:
        for y in labels:
            mode = x.mode + y.mode
            if not window.contains(mode):
                if f.pair_targets(x.gen, y.gen):
                    report.window_censored += 1
                continue
            for c, v in f.pair_targets(x.gen, y.gen):
                z = LoopLabel(c, mode)
                if s.sector(z) != 0:
                    report.subalgebra_witnesses.append(SectorWitness(x, y, z, v))
    report.is_subalgebra_v0 = not report.subalgebra_witnesses
    return report


def check_symmetric_coset(f: StructureConstants, s: Splitting, window: ModeWindow) -> SplitCheckReport:
    """Do the constants vanish whenever the target sector breaks the mod-2 sum rule?"""
    report = SplitCheckReport()
    labels = enumerate_generators(f, window)
    for x in labels:
        for y in labels:
            mode = x.mode + y.mode
            if not window.contains(mode):
                if f.pair_targets(x.gen, y.gen):
                    report.window_censored += 1
                continue
            expected = (s.sector(x) + s.sector(y)) % 2
            for c, v in f.pair_targets(x.gen, y.gen):
                z = LoopLabel(c, mode)
                if s.sector(z) != expected:
                    report.coset_witnesses.append(SectorWitness(x, y, z, v))
    report.is_symmetric_coset = not report.coset_witnesses
    return report


def split_to_dict(s: Splitting) -> dict:
    data: dict = {"kind": s.kind.value}
    if s.v0_gens is not None:
        data["v0_gens"] = sorted(s.v0_gens)
    return data


def split_from_dict(data: dict, dim: int) -> Splitting:
    try:
        kind = SplitKind(data["kind"])
    except (KeyError, ValueError) as exc:
        raise InvalidParams(f"bad splitting spec {data!r}") from exc
    v0 = data.get("v0_gens")
    return make_splitting(kind, v0_gens=frozenset(v0) if v0 else None,
                          dim=dim if kind is SplitKind.GENERIC_INDEX else None)
