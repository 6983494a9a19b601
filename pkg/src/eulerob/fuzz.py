"""Seeded property suite over random germ models."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

from .calculus import ConstructibleFunction, check_eq5, check_eq6
from .model import GermModel, generate_random_model, model_to_dict
from .obstruction import BLSResult, bls_evaluate, check_eq8, decompose, eu_table, recompose

ALPHAS_PER_MODEL = 10
MAX_SIZE = 6

Evaluator = Callable[[GermModel, ConstructibleFunction, str], BLSResult]


class PropertyFailure(AssertionError):
    def __init__(self, prop: str, detail: dict[str, Any]):
        self.prop = prop
        self.detail = detail
        super().__init__(f"{prop}: {detail}")


def _require(ok: bool, prop: str, **detail: Any) -> None:
    if not ok:
        raise PropertyFailure(prop, detail)


def check_model(m: GermModel, rng: random.Random, evaluate: Evaluator = bls_evaluate) -> None:
    """Run every property on one model; raises ``PropertyFailure``."""
    _require(m.report.ok, "valid", failures=m.report.failures())
    base = m.base
    table = eu_table(m)
    for i in m.ids:
        for j in m.ids:
            v = table.M[i][j]
            ok = v == 1 if i == j else (m.leq(i, j) or v == 0)
            _require(ok, "unit-triangular", i=i, j=j, value=v)
    # integer inverse from decomposing unit vectors
    inverse = {i: decompose(m, ConstructibleFunction({k: int(k == i) for k in m.ids})) for i in m.ids}
    for i in m.ids:
        for k in m.ids:
            entry = sum(table.M[i][j] * inverse[k][j] for j in m.ids)
            _require(entry == int(i == k), "unimodular", i=i, k=k, entry=entry)

    for j in m.ids:
        if j != base:
            _require(check_eq6(m, m.down(j)), "eq6", closure=j)

    for _ in range(ALPHAS_PER_MODEL):
        coeffs = {j: rng.randint(-3, 3) for j in m.ids}
        coeffs[base] = 0
        a = recompose(m, coeffs)
        _require(decompose(m, a) == coeffs, "decompose-recompose", coeffs=coeffs)
        r = evaluate(m, a, "generic")
        _require(r.defect == 0 and r.admissible, "admissible-span", alpha=dict(a.values), result=r.__dict__)

        free = ConstructibleFunction({j: rng.randint(-5, 5) for j in m.ids})
        c = decompose(m, free)
        _require(recompose(m, c) == free, "recompose-decompose", alpha=dict(free.values))
        r = evaluate(m, free, "generic")
        _require(r.defect == c[base], "defect-is-skyscraper", alpha=dict(free.values), c_base=c[base], result=r.__dict__)
        _require(check_eq5(m, free, "generic"), "eq5", alpha=dict(free.values))
        _require(check_eq8(m, free, "generic"), "eq8", alpha=dict(free.values))


@dataclass
class FuzzReport:
    count: int
    seed: int
    checked: int = 0
    failure: dict[str, Any] | None = None
    sizes: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failure is None

    def as_dict(self) -> dict[str, Any]:
        return {"count": self.count, "seed": self.seed, "checked": self.checked,
                "ok": self.ok, "sizes": self.sizes, "failure": self.failure}


def _cases(count: int, seed: int) -> list[tuple[int, int, int]]:
    rng = random.Random(seed)
    return [(n, rng.randrange(2**31), rng.randint(1, MAX_SIZE)) for n in range(count)]


def _run_case(case: tuple[int, int, int], evaluate: Evaluator = bls_evaluate) -> dict[str, Any] | None:
    n, model_seed, size = case
    m = generate_random_model(model_seed, size)
    try:
        check_model(m, random.Random(model_seed), evaluate)
    except PropertyFailure as exc:
        return {"iteration": n, "model_seed": model_seed, "size": size, "property": exc.prop,
                "detail": exc.detail, "model": model_to_dict(m)}
    return None


def run_fuzz(count: int, seed: int, evaluate: Evaluator = bls_evaluate, jobs: int = 1) -> FuzzReport:
    """Check ``count`` random models; stops at the first counterexample."""
    if count < 1:
        raise ValueError("count must be >= 1")
    report = FuzzReport(count, seed)
    cases = _cases(count, seed)
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_run_case, cases, [evaluate] * len(cases), chunksize=32))
    else:
        results = []
        for case in cases:
            results.append(_run_case(case, evaluate))
            if results[-1] is not None:
                break
    for case, res in zip(cases, results):
        report.checked += 1
        report.sizes[case[2]] = report.sizes.get(case[2], 0) + 1
        if res is not None:
            report.failure = res
            break
    return report
