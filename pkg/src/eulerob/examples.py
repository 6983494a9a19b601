"""Curated germ models with provenance, used as the golden corpus.

Every non-trivial number in a curated model is paired with a certificate: a
tagged simplicial complex (or a branch parametrization) from which the oracle
recomputes the entry independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from . import oracle
from .model import GENERIC, GermModel, Stratum, build_model
from .oracle import Claim, SimplicialComplex

# chi of the generic closed section of the Whitney umbrella minus its double
# point: the section is the image of a disk with two interior points glued,
# so chi = (1 - 2); certified by ``umbrella_section_complex``.
UMBRELLA_SECTION_CHI = -1


def smooth_germ(d: int) -> GermModel:
    if d < 1:
        raise ValueError("dimension must be positive")
    return build_model(f"smooth-{d}", [("s0", 0), ("s1", d)], [("s0", "s1")], {"s0": {"s1": 1}})


def curve_germ(
    mults: Sequence[int],
    extra_covectors: Mapping[str, Mapping[str, Any]] | None = None,
    name: str | None = None,
) -> GermModel:
    """Curve germ with one branch per entry of ``mults``.

    ``extra_covectors`` maps a covector name to ``{"sections": {branch: n},
    "degenerate": [...], "mult": {...}}``; ``sections`` overrides the origin row.
    """
    if not mults:
        raise ValueError("a curve germ needs at least one branch")
    if any(m < 1 for m in mults):
        raise ValueError("branch multiplicities must be positive")
    branches = [f"s{n}" for n in range(1, len(mults) + 1)]
    extras = {}
    for cname, spec in (extra_covectors or {}).items():
        extras[cname] = {
            "closed": {"s0": dict(spec["sections"])},
            "degenerate": spec.get("degenerate", ()),
            "mult": spec.get("mult", {}),
        }
    return build_model(
        name or "curve-" + "-".join(map(str, mults)),
        [("s0", 0)] + [(b, 1) for b in branches],
        [("s0", b) for b in branches],
        {"s0": dict(zip(branches, mults))},
        extra_covectors=extras,
    )


def node() -> GermModel:
    return curve_germ([1, 1], name="node")


def cusp() -> GermModel:
    # t -> (t^3, t^2): a generic form vanishes to order 2, dx to order 3
    return curve_germ(
        [2],
        {"dx": {"sections": {"s1": 3}, "degenerate": ["s1"], "mult": {"s1": 1}}},
        name="cusp",
    )


@dataclass(frozen=True)
class ProjectiveStratum:
    """A stratum Y_a of a projective variety Y, with chi(Y_a) and chi(Y_a cap H).

    ``below`` maps lower strata of Y to the generic section number of the
    normal slice, which the cone inherits.
    """

    stratum: str
    chi_Y: int
    chi_YH: int
    dim: int
    below: Mapping[str, int] = field(default_factory=dict)


def cone_over(proj: Sequence[ProjectiveStratum | Mapping[str, Any]], name: str = "cone") -> GermModel:
    """Affine cone over a stratified projective variety, refined at the apex."""
    items = [p if isinstance(p, ProjectiveStratum) else ProjectiveStratum(**p) for p in proj]
    dims = {p.stratum: p.dim for p in items}
    for p in items:
        for lower in p.below:
            if lower not in dims:
                raise ValueError(f"{p.stratum}: unknown lower stratum {lower!r}")
            if dims[lower] >= p.dim:
                raise ValueError(f"{p.stratum}: lower stratum {lower!r} must have smaller dimension")
    sections: dict[str, dict[str, int]] = {"s0": {}}
    closure = []
    for p in items:
        sections["s0"][p.stratum] = p.chi_Y - p.chi_YH
        closure.append(("s0", p.stratum))
        for lower, n in p.below.items():
            sections.setdefault(lower, {})[p.stratum] = n
            closure.append((lower, p.stratum))
    m = build_model(name, [("s0", 0)] + [(p.stratum, p.dim + 1) for p in items], closure, {})
    # transitive pairs between strata of Y need their own normal data
    missing = [(i, k) for i, k in m.strict_pairs if i != "s0" and k not in sections.get(i, {})]
    if missing:
        raise ValueError(f"missing normal section data for pairs {sorted(missing)}")
    return build_model(name, [("s0", 0)] + [(p.stratum, p.dim + 1) for p in items], closure, sections)


def projective_space_data(d: int) -> list[ProjectiveStratum]:
    """P^{d-1} as a single stratum; its cone is C^d."""
    return [ProjectiveStratum("s1", d, d - 1, d - 1)]


def quadric_cone() -> GermModel:
    # smooth conic: P^1, meeting a generic line in 2 points
    return cone_over([ProjectiveStratum("s1", 2, 2, 1)], name="quadric-cone")


def whitney_umbrella(q: int) -> GermModel:
    """x^2 = z y^2 with strata origin, the z-axis s1 and the smooth part s2.

    ``q`` is chi of the generic section of s2 at the origin.
    """
    return build_model(
        "whitney-umbrella",
        [("s0", 0), ("s1", 1), ("s2", 2)],
        [("s0", "s1"), ("s1", "s2")],
        {"s0": {"s1": 1, "s2": q}, "s1": {"s2": 2}},
    )


def thicken(m: GermModel, d: int) -> GermModel:
    """Shift every non-base dimension by ``d``; normal data is unchanged."""
    if d < 1:
        raise ValueError("d must be positive")
    strata = tuple(s if s.is_base else Stratum(s.id, s.dim + d, False) for s in m.strata)
    return GermModel(f"{m.name}-x-C{d}", strata, m.closure, m.links, m.covectors)


# -- oracle certificates -------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Oracle recomputation of one model entry.

    ``entry`` is ``("lk", i, k)`` or ``("ns", covector, i, k, "closed"|"open")``.
    """

    entry: tuple
    complex: SimplicialComplex
    kind: str
    stratum: str
    vertex: Any = None
    boundary: tuple = ()
    note: str = ""


def model_value(m: GermModel, entry: tuple) -> int:
    if entry[0] == "lk":
        return m.lk(entry[1], entry[2])
    _, c, i, k, which = entry
    return m.ns(c, i, k, closed=(which == "closed"))


def certify(m: GermModel, cert: Certificate) -> bool:
    claim = Claim(cert.kind, cert.stratum, model_value(m, cert.entry), cert.vertex, cert.boundary)
    return oracle.verify_model_entry(cert.complex, claim)


def _section_pair(K: SimplicialComplex, c: str, i: str, k: str, bd: tuple = (), note: str = "") -> list[Certificate]:
    return [
        Certificate(("ns", c, i, k, "closed"), K, "section-closed", k, note=note),
        Certificate(("ns", c, i, k, "open"), K, "section-open", k, boundary=bd, note=note),
    ]


def ball_section(real_dim: int, label: str) -> tuple[SimplicialComplex, tuple]:
    K = oracle.tag_all(oracle.simplex(real_dim), label)
    bd = tuple(tuple(f) for f in oracle.boundary(K).facets()) if real_dim > 0 else ()
    return K, bd


def sphere_cone(real_dim: int, base: str, label: str) -> SimplicialComplex:
    """Cone over a triangulated sphere S^real_dim, apex tagged ``base``."""
    S = oracle.boundary(oracle.simplex(real_dim + 1))
    K = oracle.cone(S, apex="o")
    tags = {s: label for s in K.simplices}
    tags[frozenset(["o"])] = base
    return SimplicialComplex(K.simplices, tags)


def branch_link_cone(branches: Sequence[str], base: str = "s0") -> SimplicialComplex:
    """Cone over one circle per branch; the link of a curve germ."""
    simplices: set = set()
    tags = {}
    for b in branches:
        C = oracle.circle(3, prefix=f"{b}.")
        for s in C.simplices:
            for t in (s, s | {"o"}):
                simplices.add(t)
                tags[t] = b
    simplices.add(frozenset(["o"]))
    tags[frozenset(["o"])] = base
    return SimplicialComplex(frozenset(simplices), tags)


def branch_parametrization(m: int) -> list[list[float]]:
    """t -> (t^(m+1), t^m) as coefficient lists; multiplicity m, and dx
    vanishes to order m + 1 (the cusp is m = 2)."""
    return [[0.0] * (m + 1) + [1.0], [0.0] * m + [1.0]]


GENERIC_FORM = (0.83, -1.27)


def branch_section_complex(coords: Sequence[Sequence[float]], form: Sequence[float], label: str) -> SimplicialComplex:
    n = oracle.branch_preimages(coords, form)
    return oracle.tag_all(oracle.points(n, prefix=f"{label}."), label)


def umbrella_section_complex(n: int = 7) -> tuple[SimplicialComplex, tuple]:
    """Closed generic section of the Whitney umbrella.

    Pulled back along (u, v) -> (uv, v, u^2) the section is a smooth disk, and
    the two preimages of the z-axis get glued into the double point.
    """
    D = oracle.grid_disk(n)
    bd = tuple(tuple(f) for f in oracle.boundary(D).facets())
    K = oracle.identify(D, "g2,2", f"g{n - 2},{n - 2}", "node")
    K = oracle.tag_all(K, "s2", {"node": "s1"})
    return K, bd


def smooth_certificates(m: GermModel, d: int) -> list[Certificate]:
    K, bd = ball_section(2 * d - 2, "s1")
    certs = _section_pair(K, GENERIC, "s0", "s1", bd, "generic section of C^d is a 2(d-1)-ball")
    certs.append(Certificate(("lk", "s0", "s1"), sphere_cone(2 * d - 1, "s0", "s1"), "link", "s1", vertex="o"))
    return certs


def curve_certificates(m: GermModel, param: Mapping[str, list[list[float]]]) -> list[Certificate]:
    branches = [i for i in m.ids if i != "s0"]
    certs = []
    for c, cov in m.covectors.items():
        form = GENERIC_FORM if c == GENERIC else (1.0, 0.0)
        for b in branches:
            if c != GENERIC and b not in cov.sections.closed.get("s0", {}):
                continue
            K = branch_section_complex(param[b], form, b)
            certs += _section_pair(K, c, "s0", b, note=f"preimages of {c} on branch {b}")
    L = branch_link_cone(branches)
    certs += [Certificate(("lk", "s0", b), L, "link", b, vertex="o") for b in branches]
    return certs


@dataclass(frozen=True)
class ExampleDescriptor:
    name: str
    build: Callable[[], GermModel]
    parameters: Mapping[str, Any]
    provenance: Mapping[str, str]
    eu_origin: int | None
    certificates: Callable[[GermModel], list[Certificate]] = lambda m: []
    bls: tuple[Mapping[str, Any], ...] = ()


def _curve(mults: Sequence[int], builder: Callable[[], GermModel] | None = None, name: str | None = None) -> ExampleDescriptor:
    params = {f"s{n}": branch_parametrization(k) for n, k in enumerate(mults, 1)}
    if builder is None:
        builder = lambda: curve_germ(mults, name=name)  # noqa: E731
    built = builder()
    return ExampleDescriptor(
        built.name,
        builder,
        {"mults": list(mults)},
        {"NS[s0][branch]": "DERIVED: preimage count of a generic form on t -> (t^(m+1), t^m)",
         "LK[s0][branch]": "DERIVED: link of a branch is a circle"},
        sum(mults),
        lambda m: curve_certificates(m, params),
    )


def _smooth(d: int) -> ExampleDescriptor:
    return ExampleDescriptor(
        f"smooth-{d}", lambda: smooth_germ(d), {"d": d},
        {"NS[s0][s1]": "TRIVIAL: section is a ball", "LK[s0][s1]": "TRIVIAL: link is S^(2d-1)"},
        1, lambda m: smooth_certificates(m, d),
    )


def _pcone(d: int) -> ExampleDescriptor:
    return ExampleDescriptor(
        f"pcone-{d}", lambda: cone_over(projective_space_data(d), name=f"pcone-{d}"), {"d": d},
        {"NS[s0][s1]": "TRIVIAL: chi(P^{d-1}) - chi(P^{d-2}) = 1, cone is C^d"},
        1, lambda m: smooth_certificates(m, d),
    )


def _quadric() -> ExampleDescriptor:
    def certs(m: GermModel) -> list[Certificate]:
        A = oracle.tag_all(oracle.annulus(6), "s1")
        bd = tuple(tuple(f) for f in oracle.boundary(A).facets())
        return _section_pair(A, GENERIC, "s0", "s1", bd, "generic section of the quadric cone is an annulus")

    return ExampleDescriptor(
        "quadric-cone", quadric_cone, {"chi_Y": 2, "chi_YH": 2, "dim": 1},
        {"NS[s0][s1]": "DERIVED: annulus {u^2+v^2=-t^2} in a ball, chi = chi_c = 0"},
        0, certs,
    )


def _umbrella() -> ExampleDescriptor:
    def certs(m: GermModel) -> list[Certificate]:
        K, bd = umbrella_section_complex()
        out = _section_pair(K, GENERIC, "s0", "s2", bd, "disk with two interior points glued")
        out += _section_pair(K, GENERIC, "s0", "s1", bd, "the double point")
        P = oracle.tag_all(oracle.points(2, prefix="n."), "s2")
        out += _section_pair(P, GENERIC, "s1", "s2", note="transverse slice is a node: two points")
        return out

    return ExampleDescriptor(
        "whitney-umbrella", lambda: whitney_umbrella(UMBRELLA_SECTION_CHI), {"q": UMBRELLA_SECTION_CHI},
        {"NS[s1][s2]": "DERIVED: node slice, two points",
         "NS[s0][s1]": "TRIVIAL: one point of the z-axis",
         "NS[s0][s2]": "DERIVED: oracle on a glued disk, chi = -1; Eu(X,0) = 1 agrees with m(X) - m(polar curve) = 2 - 1"},
        1, certs,
    )


def _lines(k: int) -> ExampleDescriptor:
    pts = [ProjectiveStratum(f"s{n}", 1, 0, 0) for n in range(1, k + 1)]
    params = {f"s{n}": branch_parametrization(1) for n in range(1, k + 1)}
    return ExampleDescriptor(
        f"lines-{k}", lambda: cone_over(pts, name=f"lines-{k}"), {"k": k},
        {"NS[s0][line]": "DERIVED: chi(point) - chi(empty) = 1, same as curve_germ(1,...,1)"},
        k, lambda m: curve_certificates(m, params),
    )


def _node_thick() -> ExampleDescriptor:
    base = _curve([1, 1], node)
    return ExampleDescriptor(
        "node-x-C1", lambda: thicken(node(), 1), {"d": 1},
        {"all": "DERIVED: normal data of node x C equals that of the node"},
        2, base.certificates,
    )


_NODE_BLS = (
    {"alpha": {"s0": 2, "s1": 1, "s2": 1}, "covector": GENERIC, "lhs": 2, "rhs": 2, "defect": 0, "admissible": True},
    {"alpha": {"s0": 1, "s1": 1, "s2": 1}, "covector": GENERIC, "lhs": 1, "rhs": 2, "defect": -1, "admissible": False},
)
_CUSP_BLS = (
    {"alpha": {"s0": 2, "s1": 1}, "covector": GENERIC, "lhs": 2, "rhs": 2, "defect": 0, "admissible": True},
    {"alpha": {"s0": 2, "s1": 1}, "covector": "dx", "lhs": 2, "rhs": 3, "defect": -1, "admissible": False},
)


def _with_bls(d: ExampleDescriptor, bls: tuple) -> ExampleDescriptor:
    return ExampleDescriptor(d.name, d.build, d.parameters, d.provenance, d.eu_origin, d.certificates, bls)


CATALOG: dict[str, ExampleDescriptor] = {
    d.name: d
    for d in [
        _smooth(1),
        _smooth(2),
        _smooth(3),
        _smooth(4),
        _curve([1], name="line"),
        _with_bls(_curve([1, 1], node), _NODE_BLS),
        _with_bls(_curve([2], cusp), _CUSP_BLS),
        _curve([1, 1, 1]),
        _curve([2, 3]),
        _lines(3),
        _quadric(),
        _pcone(2),
        _pcone(3),
        _umbrella(),
        _node_thick(),
    ]
}


def get(name: str) -> GermModel:
    try:
        return CATALOG[name].build()
    except KeyError:
        raise KeyError(f"unknown example {name!r}; try one of {', '.join(CATALOG)}") from None
