"""Euler obstructions of stratum closures and the hyperplane-section formula.

``eu_function`` runs the descending recursion

    Eu(cl V_j, V_j) = 1,
    Eu(cl V_j, V_i) = sum over i < k <= j of NS[i][k] * Eu(cl V_j, V_k),

using generic section numbers of normal slices.  The resulting table is
unit-triangular, so any constructible function has unique integer
coordinates in the basis of closure obstructions.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Mapping

from .calculus import ConstructibleFunction, nearby_stalk, stalk, vanishing_stalk
from .model import GENERIC, GermModel


class InsufficientDataError(ValueError):
    """A covector lacks the intersection multiplicity a pairing needs."""


@dataclass(frozen=True)
class EuTable:
    """``M[i][j] = Eu(cl V_j, V_i)`` over all strata, including the base."""

    order: tuple[str, ...]
    M: Mapping[str, Mapping[str, int]]

    def __getitem__(self, ij: tuple[str, str]) -> int:
        i, j = ij
        return self.M[i][j]

    def column(self, j: str) -> dict[str, int]:
        return {i: self.M[i][j] for i in self.order}

    def rows(self) -> list[list[int]]:
        return [[self.M[i][j] for j in self.order] for i in self.order]


@dataclass(frozen=True)
class CCData:
    coeffs: Mapping[str, int]

    @property
    def support(self) -> frozenset[str]:
        return frozenset(j for j, n in self.coeffs.items() if n)


@dataclass(frozen=True)
class BLSResult:
    lhs: int
    rhs: int
    defect: int
    admissible: bool


def eu_function(m: GermModel, j: str) -> ConstructibleFunction:
    m.require_valid()
    return ConstructibleFunction(_eu_column(m, j))


def _eu_column(m: GermModel, j: str) -> dict[str, int]:
    closure = m.down(j)
    e = {i: 0 for i in m.ids}
    e[j] = 1
    for i in reversed(m.order):
        if i == j or i not in closure:
            continue
        e[i] = sum(m.ns(GENERIC, i, k) * e[k] for k in m.up(i) if k != i and k in closure)
    return e


_tables: weakref.WeakKeyDictionary[GermModel, EuTable] = weakref.WeakKeyDictionary()


def eu_table(m: GermModel) -> EuTable:
    m.require_valid()
    table = _tables.get(m)
    if table is None:
        cols = {j: _eu_column(m, j) for j in m.order}
        table = EuTable(m.order, {i: {j: cols[j][i] for j in m.order} for i in m.order})
        _tables[m] = table
    return table


def decompose(m: GermModel, a: ConstructibleFunction) -> dict[str, int]:
    """Coordinates of ``a`` in the basis ``Eu(cl V_j, .)`` by back-substitution."""
    table = eu_table(m)
    a.on(m)
    c: dict[str, int] = {}
    for j in reversed(table.order):
        c[j] = a[j] - sum(table.M[j][k] * c[k] for k in m.up(j) if k != j)
    return {j: c[j] for j in m.ids}


def recompose(m: GermModel, coeffs: Mapping[str, int]) -> ConstructibleFunction:
    table = eu_table(m)
    return ConstructibleFunction(
        {i: sum(table.M[i][j] * coeffs.get(j, 0) for j in table.order) for i in m.ids}
    )


def cc(m: GermModel, a: ConstructibleFunction) -> CCData:
    """Characteristic-cycle coefficients ``(-1)^dim(V_j) * c_j``."""
    c = decompose(m, a)
    return CCData({j: (-1) ** m.dim(j) * c[j] for j in m.ids if c[j]})


def is_admissible(m: GermModel, c: str, coeffs: CCData | Mapping[str, int]) -> bool:
    support = coeffs.support if isinstance(coeffs, CCData) else {j for j, v in coeffs.items() if v}
    return not (support & m.covector(c).degenerate)


def bls_evaluate(m: GermModel, a: ConstructibleFunction, c: str = GENERIC) -> BLSResult:
    m.require_valid()
    m.covector(c)
    lhs = stalk(m, a)
    rhs = nearby_stalk(m, a, c)
    return BLSResult(lhs, rhs, lhs - rhs, is_admissible(m, c, cc(m, a)))


def index_pairing(m: GermModel, a: ConstructibleFunction, c: str = GENERIC) -> int:
    """Signed count of the graph of dl against the characteristic cycle."""
    cov = m.covector(c)
    coeffs = cc(m, a)
    total = 0
    for j in m.ids:
        if j not in coeffs.support or j not in cov.degenerate:
            continue
        if j not in cov.mult:
            raise InsufficientDataError(
                f"insufficient intersection data: covector {c!r} has no multiplicity on stratum {j!r}"
            )
        total += coeffs.coeffs[j] * cov.mult[j]
    return total


def check_eq8(m: GermModel, a: ConstructibleFunction, c: str = GENERIC) -> bool:
    return vanishing_stalk(m, a, c) + index_pairing(m, a, c) == 0


def eu_of_germ(m: GermModel) -> ConstructibleFunction:
    """Sum of ``Eu(cl V_j, .)`` over the top-dimensional strata; this is
    ``Eu(X, .)`` when the germ is equidimensional."""
    m.require_valid()
    top = max(m.dim(i) for i in m.ids)
    total = ConstructibleFunction({i: 0 for i in m.ids})
    for j in m.ids:
        if m.dim(j) == top:
            total = total + ConstructibleFunction(_eu_column(m, j))
    return total
