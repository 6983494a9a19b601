"""Combinatorial germ models: strata, closure poset, link and section data.

A germ model stores only integers.  Strata carry a complex dimension, the
closure order says which strata lie in the closure of which, ``links`` holds
compactly supported Euler characteristics of link pieces, and every covector
class carries hyperplane-section characteristics of normal slices.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Mapping

GENERIC = "generic"

Rows = Mapping[str, Mapping[str, int]]


class ModelError(ValueError):
    """Structural problem: dangling ids, cycles, malformed files."""


class InvalidModelError(ValueError):
    """A structurally sound model that fails one of the axioms."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(f"model {report.model!r} is invalid: " + ", ".join(report.failures()))


@dataclass(frozen=True)
class Stratum:
    id: str
    dim: int
    is_base: bool = False


@dataclass(frozen=True)
class SectionData:
    closed: Rows
    open: Rows

    def pairs(self, which: str = "closed") -> set[tuple[str, str]]:
        rows = self.closed if which == "closed" else self.open
        return {(i, k) for i, row in rows.items() for k in row}


@dataclass(frozen=True)
class CovectorClass:
    name: str
    sections: SectionData
    degenerate: frozenset[str]
    mult: Mapping[str, int] = field(default_factory=dict)


def _freeze_rows(rows: Rows) -> dict[str, dict[str, int]]:
    return {i: {k: int(v) for k, v in row.items()} for i, row in rows.items()}


@dataclass(frozen=True, eq=False)
class GermModel:
    """Stratified germ with its stabilized link and section numbers.

    ``closure`` may be any generating relation of (lower, upper) pairs; the
    order is its transitive closure.  Structural defects raise ``ModelError``
    at construction, axiom violations are reported by :func:`validate_model`.
    """

    name: str
    strata: tuple[Stratum, ...]
    closure: frozenset[tuple[str, str]]
    links: Rows
    covectors: Mapping[str, CovectorClass]

    def __post_init__(self) -> None:
        ids = [s.id for s in self.strata]
        seen: set[str] = set()
        for i in ids:
            if i in seen:
                raise ModelError(f"duplicate stratum id {i!r}")
            seen.add(i)
        for s in self.strata:
            if not isinstance(s.dim, int) or s.dim < 0:
                raise ModelError(f"stratum {s.id!r}: dimension must be a non-negative integer")
        for lo, hi in self.closure:
            for x in (lo, hi):
                if x not in seen:
                    raise ModelError(f"closure pair ({lo}, {hi}) names unknown stratum {x!r}")
            if lo == hi:
                raise ModelError(f"closure pair ({lo}, {hi}) is a loop")
        up = _transitive_closure(ids, self.closure)
        for i in ids:
            for k in up[i]:
                if k != i and i in up[k]:
                    raise ModelError(f"closure relation has a cycle through {i!r} and {k!r}")
        object.__setattr__(self, "_up", up)
        self._check_keys(self.links, "links")
        for name, cov in self.covectors.items():
            self._check_keys(cov.sections.closed, f"covector {name!r} closed")
            self._check_keys(cov.sections.open, f"covector {name!r} open")
            for j in itertools.chain(cov.degenerate, cov.mult):
                if j not in seen:
                    raise ModelError(f"covector {name!r} names unknown stratum {j!r}")

    def _check_keys(self, rows: Rows, where: str) -> None:
        ids = {s.id for s in self.strata}
        for i, row in rows.items():
            if i not in ids:
                raise ModelError(f"{where}: unknown row stratum {i!r}")
            for k in row:
                if k not in ids:
                    raise ModelError(f"{where}: unknown stratum {k!r} in row {i!r}")

    # -- poset queries -------------------------------------------------

    @cached_property
    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.strata)

    @cached_property
    def _by_id(self) -> dict[str, Stratum]:
        return {s.id: s for s in self.strata}

    def stratum(self, i: str) -> Stratum:
        try:
            return self._by_id[i]
        except KeyError:
            raise KeyError(f"unknown stratum {i!r} in model {self.name!r}") from None

    def dim(self, i: str) -> int:
        return self.stratum(i).dim

    @property
    def base(self) -> str:
        bases = [s.id for s in self.strata if s.is_base]
        if len(bases) != 1:
            raise ModelError(f"model {self.name!r} has {len(bases)} base strata, expected 1")
        return bases[0]

    def leq(self, i: str, k: str) -> bool:
        """True when V_i lies in the closure of V_k."""
        return k in self._up[i]  # type: ignore[attr-defined]

    def up(self, i: str) -> frozenset[str]:
        return self._up[self.stratum(i).id]  # type: ignore[attr-defined]

    def down(self, j: str) -> frozenset[str]:
        self.stratum(j)
        return frozenset(i for i in self.ids if self.leq(i, j))

    @cached_property
    def strict_pairs(self) -> frozenset[tuple[str, str]]:
        return frozenset((i, k) for i in self.ids for k in self.up(i) if k != i)

    @cached_property
    def order(self) -> tuple[str, ...]:
        """A linear extension of the closure order (lower strata first)."""
        position = {i: n for n, i in enumerate(self.ids)}
        rank = {i: len(self.down(i)) for i in self.ids}
        # |down(i)| strictly increases along the order
        return tuple(sorted(self.ids, key=lambda i: (rank[i], position[i])))

    @cached_property
    def reduction(self) -> frozenset[tuple[str, str]]:
        pairs = self.strict_pairs
        return frozenset(
            (i, k)
            for i, k in pairs
            if not any((i, m) in pairs and (m, k) in pairs for m in self.ids)
        )

    # -- data access ---------------------------------------------------

    def lk(self, i: str, k: str) -> int:
        return self.links.get(i, {}).get(k, 0)

    def covector(self, c: str) -> CovectorClass:
        try:
            return self.covectors[c]
        except KeyError:
            raise KeyError(f"unknown covector {c!r} in model {self.name!r}") from None

    def ns(self, c: str, i: str, k: str, closed: bool = True) -> int:
        """Section characteristic for the pair i < k, falling back to the
        generic row when covector ``c`` does not override row ``i``."""
        cov = self.covector(c)
        rows = cov.sections.closed if closed else cov.sections.open
        if i not in rows and c != GENERIC:
            rows = self.covector(GENERIC).sections.closed if closed else self.covector(GENERIC).sections.open
        return rows.get(i, {}).get(k, 0)

    @cached_property
    def report(self) -> ValidationReport:
        return validate_model(self)

    def require_valid(self) -> None:
        if not self.report.ok:
            raise InvalidModelError(self.report)


def _transitive_closure(ids: list[str], pairs: Iterable[tuple[str, str]]) -> dict[str, frozenset[str]]:
    succ: dict[str, set[str]] = {i: set() for i in ids}
    for lo, hi in pairs:
        succ[lo].add(hi)
    up: dict[str, frozenset[str]] = {}
    for i in ids:
        seen = {i}
        stack = [i]
        while stack:
            for k in succ[stack.pop()]:
                if k not in seen:
                    seen.add(k)
                    stack.append(k)
        up[i] = frozenset(seen)
    return up


# -- validation --------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    loci: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    model: str
    checks: tuple[Check, ...]
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[str]:
        return [locus for c in self.checks if not c.passed for locus in (c.loci or (c.name,))]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> dict[str, Any]:
        return {
            "model": self.model,
            "valid": self.ok,
            "checks": [{"name": c.name, "passed": c.passed, "loci": list(c.loci)} for c in self.checks],
            "warnings": list(self.warnings),
        }


def _check(name: str, loci: list[str]) -> Check:
    return Check(name, not loci, tuple(loci))


def validate_model(m: GermModel) -> ValidationReport:
    """Run every axiom check on ``m``; one report entry per axiom."""
    checks = []

    bases = [s for s in m.strata if s.is_base]
    base_loci = []
    if len(bases) != 1:
        base_loci.append(f"base(count={len(bases)})")
    base_loci += [f"base({s.id},dim={s.dim})" for s in bases if s.dim != 0]
    checks.append(_check("base", base_loci))

    checks.append(_check(
        "poset",
        [f"poset({i},{k})" for i, k in sorted(m.strict_pairs) if m.dim(i) >= m.dim(k)],
    ))

    base = bases[0].id if len(bases) == 1 else None
    if base is None:
        checks.append(Check("connected", False, ("connected(no base)",)))
    else:
        checks.append(_check("connected", [f"connected({k})" for k in m.ids if not m.leq(base, k)]))

    checks.append(_check(
        "lk-support",
        [f"lk-support({i},{k})" for i, row in m.links.items() for k in row if not m.leq(i, k)],
    ))
    checks.append(_check(
        "lk-diagonal",
        [f"lk-diagonal({i})" for i in m.ids if m.dim(i) >= 1 and m.lk(i, i) != 0],
    ))

    sullivan = []
    for i in m.ids:
        for j in sorted(m.up(i), key=m.order.index):
            total = sum(m.lk(i, k) for k in m.up(i) if m.leq(k, j))
            if total != 0:
                sullivan.append(f"sullivan({i},{j})")
    checks.append(_check("sullivan", sullivan))

    support, duality, cov_loci = [], [], []
    if GENERIC not in m.covectors:
        cov_loci.append("covectors(missing generic)")
    for name, cov in sorted(m.covectors.items()):
        closed, opened = cov.sections.pairs("closed"), cov.sections.pairs("open")
        if closed != opened:
            support += [f"ns-support({name}:{i},{k})" for i, k in sorted(closed ^ opened)]
        if name == GENERIC:
            expected = set(m.strict_pairs)
        else:
            rows = {i for i, _ in closed}
            expected = {(i, k) for i, k in m.strict_pairs if i in rows}
        support += [f"ns-support({name}:{i},{k})" for i, k in sorted(closed ^ expected)]
        for i, k in sorted(closed & opened):
            if cov.sections.closed[i][k] != cov.sections.open[i][k]:
                duality.append(f"duality({name}:{i},{k})")
        if base is not None:
            if base not in cov.degenerate:
                cov_loci.append(f"covectors({name}:base not degenerate)")
            if cov.mult.get(base) != 1:
                cov_loci.append(f"covectors({name}:mult[{base}]!=1)")
        if name == GENERIC and base is not None and set(cov.degenerate) != {base}:
            cov_loci.append(f"covectors({name}:degenerate beyond base)")
        cov_loci += [f"covectors({name}:mult[{j}] not degenerate)" for j in cov.mult if j not in cov.degenerate]
    checks.append(_check("ns-support", support))
    checks.append(_check("duality", duality))
    checks.append(_check("covectors", cov_loci))

    return ValidationReport(m.name, tuple(checks), tuple(_union_warnings(m, base)))


def _union_warnings(m: GermModel, base: str | None, limit: int = 12) -> list[str]:
    # Sullivan sums over arbitrary closed unions; principal closures are the
    # hard checks above.
    if base is None:
        return []
    upper = [i for i in m.ids if i != base]
    if len(upper) > limit:
        return []
    warnings = []
    for r in range(1, len(upper) + 1):
        for z in itertools.combinations(upper, r):
            zs = set(z)
            if any(k not in zs and k != base for j in zs for k in m.down(j)):
                continue
            if sum(m.lk(base, k) for k in zs) != 0:
                warnings.append("closed union {" + ",".join(z) + "} has nonzero link sum")
    return warnings


# -- constructions -----------------------------------------------------


def build_model(
    name: str,
    strata: Iterable[tuple[str, int] | Stratum],
    closure: Iterable[tuple[str, str]],
    sections: Rows,
    links: Rows | None = None,
    extra_covectors: Mapping[str, Mapping[str, Any]] | None = None,
) -> GermModel:
    """Convenience constructor: the first stratum is the base, ``sections``
    are the generic closed=open rows, links default to zero."""
    ss = []
    for n, s in enumerate(strata):
        if isinstance(s, Stratum):
            ss.append(s)
        else:
            ss.append(Stratum(s[0], s[1], n == 0))
    base = next(s.id for s in ss if s.is_base)
    covs = {GENERIC: CovectorClass(
        GENERIC, SectionData(_freeze_rows(sections), _freeze_rows(sections)), frozenset({base}), {base: 1},
    )}
    for cname, spec in (extra_covectors or {}).items():
        closed = spec["closed"]
        covs[cname] = CovectorClass(
            cname,
            SectionData(_freeze_rows(closed), _freeze_rows(spec.get("open", closed))),
            frozenset(spec.get("degenerate", ())) | {base},
            {base: 1, **spec.get("mult", {})},
        )
    return GermModel(name, tuple(ss), frozenset(closure), _freeze_rows(links or {}), covs)


def generate_random_model(seed: int, size: int) -> GermModel:
    """Random valid model with ``size`` strata above the base.

    Deterministic in ``seed``.  Section numbers are drawn from [-3, 3]; link
    numbers are drawn freely and then the top entry of every principal
    closure sum is solved for, which makes the Sullivan sums vanish.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    rng = random.Random(f"eulerob:{seed}:{size}")
    dims = sorted(rng.randint(1, size) for _ in range(size))
    ids = ["s0"] + [f"s{n}" for n in range(1, size + 1)]
    dim = {"s0": 0, **{f"s{n}": d for n, d in enumerate(dims, 1)}}
    closure = {("s0", i) for i in ids[1:]}
    for a, b in itertools.combinations(ids[1:], 2):
        if dim[a] < dim[b] and rng.random() < 0.4:
            closure.add((a, b))
    up = _transitive_closure(ids, closure)
    order = sorted(ids, key=lambda i: (dim[i], ids.index(i)))

    links: dict[str, dict[str, int]] = {}
    for i in ids:
        row = {k: rng.randint(-3, 3) for k in up[i]}
        row[i] = 0
        for j in order:
            if j in up[i] and j != i:
                row[j] = 0
                row[j] = -sum(row[k] for k in up[i] if j in up[k])
        links[i] = row

    sections: dict[str, dict[str, int]] = {}
    for i in ids:
        for k in up[i]:
            if k != i:
                sections.setdefault(i, {})[k] = rng.randint(-3, 3)
    return build_model(
        f"random-{seed}-{size}",
        [(i, dim[i]) for i in ids],
        closure,
        sections,
        links,
    )


def restrict_to_closure(m: GermModel, j: str) -> GermModel:
    """The sub-germ cl(V_j) with all data restricted entrywise."""
    keep = m.down(j) | {m.base}
    strata = tuple(s for s in m.strata if s.id in keep)
    closure = frozenset((a, b) for a, b in m.strict_pairs if a in keep and b in keep)

    def cut(rows: Rows) -> dict[str, dict[str, int]]:
        return {i: {k: v for k, v in row.items() if k in keep} for i, row in rows.items() if i in keep}

    covs = {
        name: CovectorClass(
            name,
            SectionData(cut(c.sections.closed), cut(c.sections.open)),
            frozenset(x for x in c.degenerate if x in keep),
            {x: v for x, v in c.mult.items() if x in keep},
        )
        for name, c in m.covectors.items()
    }
    return GermModel(f"{m.name}|cl({j})", strata, closure, cut(m.links), covs)


# -- file format -------------------------------------------------------

_TOP_KEYS = {"name", "strata", "closure", "links", "covectors"}
_STRATUM_KEYS = {"id", "dim", "base"}
_COVECTOR_KEYS = {"closed", "open", "degenerate", "mult"}


def _reject_unknown(obj: Mapping[str, Any], allowed: set[str], where: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ModelError(f"{where}: unknown key(s) {', '.join(extra)}")


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ModelError(f"{where}: expected an integer, got {value!r}")
    return value


def _rows(obj: Any, where: str) -> dict[str, dict[str, int]]:
    if not isinstance(obj, dict):
        raise ModelError(f"{where}: expected an object of rows")
    out = {}
    for i, row in obj.items():
        if not isinstance(row, dict):
            raise ModelError(f"{where}.{i}: expected an object")
        out[i] = {k: _int(v, f"{where}.{i}.{k}") for k, v in row.items()}
    return out


def model_from_dict(data: Mapping[str, Any]) -> GermModel:
    if not isinstance(data, dict):
        raise ModelError("model: top level must be an object")
    _reject_unknown(data, _TOP_KEYS, "model")
    for key in ("name", "strata", "closure"):
        if key not in data:
            raise ModelError(f"model: missing key {key!r}")
    strata = []
    for n, s in enumerate(data["strata"]):
        if not isinstance(s, dict):
            raise ModelError(f"strata[{n}]: expected an object")
        _reject_unknown(s, _STRATUM_KEYS, f"strata[{n}]")
        if "id" not in s or "dim" not in s:
            raise ModelError(f"strata[{n}]: 'id' and 'dim' are required")
        strata.append(Stratum(str(s["id"]), _int(s["dim"], f"strata[{n}].dim"), bool(s.get("base", False))))
    closure = []
    for n, pair in enumerate(data["closure"]):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ModelError(f"closure[{n}]: expected a [lower, upper] pair")
        closure.append((str(pair[0]), str(pair[1])))
    covs = {}
    for name, c in data.get("covectors", {}).items():
        where = f"covectors.{name}"
        if not isinstance(c, dict):
            raise ModelError(f"{where}: expected an object")
        _reject_unknown(c, _COVECTOR_KEYS, where)
        closed = _rows(c.get("closed", {}), f"{where}.closed")
        opened = _rows(c.get("open", {}), f"{where}.open")
        mult = {k: _int(v, f"{where}.mult.{k}") for k, v in c.get("mult", {}).items()}
        covs[name] = CovectorClass(name, SectionData(closed, opened), frozenset(c.get("degenerate", ())), mult)
    return GermModel(
        str(data["name"]), tuple(strata), frozenset(closure), _rows(data.get("links", {}), "links"), covs
    )


def model_to_dict(m: GermModel) -> dict[str, Any]:
    def rows(r: Rows) -> dict[str, dict[str, int]]:
        return {i: dict(r[i]) for i in m.ids if i in r}

    strata = []
    for s in m.strata:
        entry: dict[str, Any] = {"id": s.id, "dim": s.dim}
        if s.is_base:
            entry["base"] = True
        strata.append(entry)
    return {
        "name": m.name,
        "strata": strata,
        "closure": [list(p) for p in sorted(m.reduction, key=lambda p: (m.order.index(p[0]), m.order.index(p[1])))],
        "links": rows(m.links),
        "covectors": {
            name: {
                "closed": rows(c.sections.closed),
                "open": rows(c.sections.open),
                "degenerate": [i for i in m.ids if i in c.degenerate],
                "mult": {i: c.mult[i] for i in m.ids if i in c.mult},
            }
            for name, c in m.covectors.items()
        },
    }


def load_model(path: str | Path) -> GermModel:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return model_from_dict(data)


def dumps_model(m: GermModel) -> str:
    return json.dumps(model_to_dict(m), indent=2)
