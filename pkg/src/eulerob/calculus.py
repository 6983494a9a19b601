"""Stalks, costalks, nearby and vanishing cycles of constructible functions.

Everything is evaluated at the base point only.  Nearby-cycle numbers are
weighted sums of section characteristics over the strata above the base;
costalks subtract the link characteristic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .model import GENERIC, GermModel, ModelError


@dataclass(frozen=True)
class ConstructibleFunction:
    """Integer value per stratum."""

    values: Mapping[str, int]

    def __getitem__(self, i: str) -> int:
        return self.values[i]

    def __add__(self, other: ConstructibleFunction) -> ConstructibleFunction:
        keys = set(self.values) | set(other.values)
        return ConstructibleFunction({k: self.values.get(k, 0) + other.values.get(k, 0) for k in keys})

    def __sub__(self, other: ConstructibleFunction) -> ConstructibleFunction:
        return self + (-1) * other

    def __rmul__(self, n: int) -> ConstructibleFunction:
        return ConstructibleFunction({k: n * v for k, v in self.values.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConstructibleFunction):
            return NotImplemented
        keys = set(self.values) | set(other.values)
        return all(self.values.get(k, 0) == other.values.get(k, 0) for k in keys)

    def __hash__(self) -> int:
        return hash(frozenset((k, v) for k, v in self.values.items() if v))

    def on(self, m: GermModel) -> ConstructibleFunction:
        """Check totality over the strata of ``m``."""
        missing = [i for i in m.ids if i not in self.values]
        if missing:
            raise ModelError(f"constructible function has no value on stratum {missing[0]!r}")
        extra = [i for i in self.values if i not in m.ids]
        if extra:
            raise ModelError(f"constructible function names unknown stratum {extra[0]!r}")
        return self

    def as_tuple(self, m: GermModel) -> tuple[int, ...]:
        return tuple(self.values[i] for i in m.ids)


def cf(m: GermModel, values: Mapping[str, int] | Iterable[int]) -> ConstructibleFunction:
    """Build a total function on ``m`` from a mapping or a sequence in stratum order."""
    if isinstance(values, Mapping):
        return ConstructibleFunction(dict(values)).on(m)
    vals = list(values)
    if len(vals) != len(m.ids):
        raise ModelError(f"expected {len(m.ids)} values, got {len(vals)}")
    return ConstructibleFunction(dict(zip(m.ids, vals)))


def indicator(m: GermModel, strata: Iterable[str]) -> ConstructibleFunction:
    z = set(strata)
    for i in z:
        m.stratum(i)
    return ConstructibleFunction({i: int(i in z) for i in m.ids})


def closure_indicator(m: GermModel, j: str) -> ConstructibleFunction:
    return indicator(m, m.down(j))


def parse_alpha(text: str) -> dict[str, int]:
    """Parse ``"s0=2,s1=1"`` into a mapping."""
    out: dict[str, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"bad assignment {part!r}, expected ID=INT")
        try:
            out[key.strip()] = int(value)
        except ValueError:
            raise ValueError(f"bad integer in {part!r}") from None
    return out


def stalk(m: GermModel, a: ConstructibleFunction) -> int:
    a.on(m)
    return a[m.base]


def link_chi(m: GermModel, a: ConstructibleFunction, i: str) -> int:
    """Weighted Euler characteristic of the link at a point of V_i."""
    a.on(m)
    return sum(m.lk(i, k) * a[k] for k in m.up(i))


def costalk(m: GermModel, a: ConstructibleFunction) -> int:
    return stalk(m, a) - link_chi(m, a, m.base)


def _section_sum(m: GermModel, a: ConstructibleFunction, c: str, closed: bool) -> int:
    a.on(m)
    m.covector(c)
    base = m.base
    return sum(m.ns(c, base, k, closed) * a[k] for k in m.up(base) if k != base)


def nearby_stalk(m: GermModel, a: ConstructibleFunction, c: str = GENERIC) -> int:
    return _section_sum(m, a, c, closed=True)


def nearby_costalk(m: GermModel, a: ConstructibleFunction, c: str = GENERIC) -> int:
    return _section_sum(m, a, c, closed=False)


def vanishing_stalk(m: GermModel, a: ConstructibleFunction, c: str = GENERIC) -> int:
    return nearby_stalk(m, a, c) - stalk(m, a)


def check_eq5(m: GermModel, a: ConstructibleFunction, c: str = GENERIC) -> bool:
    """Nearby cycles: stalk equals costalk at the base point."""
    return nearby_stalk(m, a, c) == nearby_costalk(m, a, c)


def check_eq6(m: GermModel, z: Iterable[str]) -> bool:
    """Stalk equals costalk for the indicator of a closed union ``z``."""
    zs = set(z)
    base = m.base
    for j in zs:
        for i in m.down(j):
            if i != base and i not in zs:
                raise ValueError(f"Z is not closed: {i} lies in the closure of {j} but not in Z")
    one = indicator(m, zs)
    return stalk(m, one) == costalk(m, one)


@dataclass(frozen=True)
class StalkReport:
    stalk: int
    costalk: int
    psi_stalk: int
    psi_costalk: int
    phi_stalk: int
    covector: str

    def as_dict(self) -> dict[str, object]:
        return dict(self.__dict__)


def stalk_report(m: GermModel, a: ConstructibleFunction, c: str = GENERIC) -> StalkReport:
    s = stalk(m, a)
    psi = nearby_stalk(m, a, c)
    return StalkReport(s, costalk(m, a), psi, nearby_costalk(m, a, c), psi - s, c)
