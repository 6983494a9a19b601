"""Brute-force simplicial oracle for Euler characteristics, links and cones.

Euler characteristics are alternating simplex counts.  Ordinary ``chi`` is
only ever reported for closed complexes; a locally closed difference A \\ B
gets the compactly supported ``chi_c``.  The oracle is independent of the
germ-model code and is used to certify individual link and section entries.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Hashable, Iterable, Mapping, Sequence

import numpy as np


class ComplexError(ValueError):
    pass


def _faces(simplex: Iterable[Hashable]) -> Iterable[frozenset]:
    s = tuple(simplex)
    for r in range(1, len(s) + 1):
        for f in itertools.combinations(s, r):
            yield frozenset(f)


@dataclass(frozen=True)
class SimplicialComplex:
    """Face-closed family of finite vertex sets, optionally tagged by stratum.

    A tag names the stratum containing the open simplex; faces of a tagged
    simplex must be tagged too.
    """

    simplices: frozenset[frozenset]
    tags: Mapping[frozenset, str] = field(default_factory=dict)

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[Hashable]], tags: Mapping[Any, str] | None = None) -> SimplicialComplex:
        simplices = set()
        for f in facets:
            simplices.update(_faces(f))
        return cls(frozenset(simplices), {frozenset(k): v for k, v in (tags or {}).items()})

    @property
    def vertices(self) -> frozenset:
        return frozenset(v for s in self.simplices if len(s) == 1 for v in s)

    def __contains__(self, simplex: Iterable[Hashable]) -> bool:
        return frozenset(simplex) in self.simplices

    def __len__(self) -> int:
        return len(self.simplices)

    @property
    def dimension(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def facets(self) -> list[frozenset]:
        return [s for s in self.simplices if not any(s < t for t in self.simplices if len(t) == len(s) + 1)]

    def check(self) -> None:
        for s in self.simplices:
            for f in _faces(s):
                if f not in self.simplices:
                    raise ComplexError(f"not face-closed: {sorted(map(str, f))} missing")
        for s, label in self.tags.items():
            if s not in self.simplices:
                raise ComplexError(f"tag on a simplex outside the complex: {sorted(map(str, s))}")
            for f in _faces(s):
                if f not in self.tags:
                    raise ComplexError(f"inconsistent tags: face {sorted(map(str, f))} of a {label!r} simplex is untagged")

    def subcomplex(self, simplices: Iterable[frozenset]) -> SimplicialComplex:
        out = set()
        for s in simplices:
            out.update(_faces(s))
        if not out <= self.simplices:
            raise ComplexError("subcomplex is not contained in the complex")
        return SimplicialComplex(frozenset(out), {s: t for s, t in self.tags.items() if s in out})

    def induced(self, vertices: Iterable[Hashable]) -> SimplicialComplex:
        vs = set(vertices)
        keep = frozenset(s for s in self.simplices if s <= vs)
        return SimplicialComplex(keep, {s: t for s, t in self.tags.items() if s in keep})

    def tagged(self, label: str) -> frozenset[frozenset]:
        return frozenset(s for s, t in self.tags.items() if t == label)


def _alternating(simplices: Iterable[frozenset]) -> int:
    return sum((-1) ** (len(s) - 1) for s in simplices)


def chi(K: SimplicialComplex) -> int:
    return _alternating(K.simplices)


def chi_c(A: SimplicialComplex, B: SimplicialComplex | None = None) -> int:
    """Compactly supported Euler characteristic of |A| minus |B|."""
    if B is None:
        return chi(A)
    if not B.simplices <= A.simplices:
        raise ComplexError("chi_c(A \\ B) needs B to be a subcomplex of A")
    return chi(A) - chi(B)


def vertex_link(K: SimplicialComplex, v: Hashable) -> SimplicialComplex:
    """Link of ``v``; a link simplex inherits the tag of its join with ``v``."""
    if frozenset([v]) not in K.simplices:
        raise ComplexError(f"unknown vertex {v!r}")
    link = set()
    tags = {}
    for s in K.simplices:
        if v in s and len(s) > 1:
            t = s - {v}
            link.add(t)
            if s in K.tags:
                tags[t] = K.tags[s]
    return SimplicialComplex(frozenset(link), tags)


def cone(K: SimplicialComplex, apex: Hashable = "apex") -> SimplicialComplex:
    if apex in K.vertices:
        raise ComplexError(f"apex {apex!r} is already a vertex")
    top = frozenset([apex])
    return SimplicialComplex(K.simplices | {top} | {s | top for s in K.simplices})


def boundary(K: SimplicialComplex) -> SimplicialComplex:
    """Pseudomanifold boundary: closure of codimension-one faces lying in exactly one facet."""
    n = K.dimension
    top = [s for s in K.simplices if len(s) == n + 1]
    count: dict[frozenset, int] = {}
    for s in top:
        for v in s:
            f = s - {v}
            if f:
                count[f] = count.get(f, 0) + 1
    return K.subcomplex(f for f, c in count.items() if c == 1)


def product(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Triangulated product using the staircase subdivision of prisms."""
    key_k = {v: n for n, v in enumerate(sorted(K.vertices, key=repr))}
    key_l = {w: n for n, w in enumerate(sorted(L.vertices, key=repr))}
    facets = []
    for s in K.facets():
        for t in L.facets():
            vs = sorted(s, key=key_k.get)
            ws = sorted(t, key=key_l.get)
            # monotone lattice paths through the grid vs x ws
            for steps in set(itertools.permutations([0] * (len(vs) - 1) + [1] * (len(ws) - 1))):
                a = b = 0
                path = [(vs[0], ws[0])]
                for step in steps:
                    if step == 0:
                        a += 1
                    else:
                        b += 1
                    path.append((vs[a], ws[b]))
                facets.append(path)
    return SimplicialComplex.from_facets(facets)


def identify(K: SimplicialComplex, p: Hashable, q: Hashable, new: Hashable) -> SimplicialComplex:
    """Glue vertices ``p`` and ``q``; they must have disjoint closed stars."""
    np_ = {v for s in K.simplices if p in s for v in s}
    nq = {v for s in K.simplices if q in s for v in s}
    if np_ & nq:
        raise ComplexError(f"cannot identify {p!r} and {q!r}: their stars meet")

    def rename(s: frozenset) -> frozenset:
        return frozenset(new if v in (p, q) else v for v in s)

    return SimplicialComplex(
        frozenset(rename(s) for s in K.simplices),
        {rename(s): t for s, t in K.tags.items()},
    )


# -- standard triangulations --------------------------------------------


def circle(n: int = 3, prefix: str = "c") -> SimplicialComplex:
    if n < 3:
        raise ValueError("a simplicial circle needs at least 3 vertices")
    return SimplicialComplex.from_facets([(f"{prefix}{k}", f"{prefix}{(k + 1) % n}") for k in range(n)])


def simplex(n: int, prefix: str = "v") -> SimplicialComplex:
    """The full n-simplex (a closed n-ball)."""
    return SimplicialComplex.from_facets([[f"{prefix}{k}" for k in range(n + 1)]])


def grid_disk(n: int, prefix: str = "g") -> SimplicialComplex:
    """Closed square [0, n] x [0, n] cut into 2 n^2 triangles."""
    facets = []
    for x in range(n):
        for y in range(n):
            a, b, c, d = ((x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1))
            facets += [(a, b, d), (a, c, d)]
    return SimplicialComplex.from_facets([[f"{prefix}{u},{v}" for u, v in f] for f in facets])


def annulus(n: int = 4, prefix: str = "a") -> SimplicialComplex:
    """Closed annulus between an inner and an outer n-gon."""
    facets = []
    for k in range(n):
        i0, i1 = f"{prefix}i{k}", f"{prefix}i{(k + 1) % n}"
        o0, o1 = f"{prefix}o{k}", f"{prefix}o{(k + 1) % n}"
        facets += [(i0, i1, o0), (i1, o0, o1)]
    return SimplicialComplex.from_facets(facets)


def points(n: int, prefix: str = "p") -> SimplicialComplex:
    return SimplicialComplex.from_facets([[f"{prefix}{k}"] for k in range(n)])


def tag_all(K: SimplicialComplex, label: str, overrides: Mapping[Hashable, str] | None = None) -> SimplicialComplex:
    """Tag every simplex with ``label``; ``overrides`` retag single vertices
    (and only those vertex simplices)."""
    tags = {s: label for s in K.simplices}
    for v, t in (overrides or {}).items():
        tags[frozenset([v])] = t
    return SimplicialComplex(K.simplices, tags)


# -- certification of model entries --------------------------------------


@dataclass(frozen=True)
class Claim:
    """A link or section entry of a germ model, phrased on a tagged complex.

    ``link``: chi_c of the part of the link of ``vertex`` lying in ``stratum``.
    ``section-closed``: ordinary chi of the ``stratum`` piece of a closed section.
    ``section-open``: chi_c of that piece with the ``boundary`` subcomplex removed.
    """

    kind: str
    stratum: str
    expected: int
    vertex: Hashable | None = None
    boundary: tuple[tuple[Hashable, ...], ...] = ()


def measure(K: SimplicialComplex, claim: Claim) -> int:
    K.check()
    if claim.kind == "link":
        if claim.vertex is None:
            raise ComplexError("a link claim needs a base vertex")
        link = vertex_link(K, claim.vertex)
        return _alternating(link.tagged(claim.stratum))
    piece = K.tagged(claim.stratum)
    A = K.subcomplex(piece)
    frontier = A.simplices - piece
    if claim.kind == "section-closed":
        fv = {v for s in frontier for v in s}
        if any(s <= fv for s in piece):
            raise ComplexError("frontier of the stratum piece is not a full subcomplex; subdivide first")
        # complement of a full subcomplex retracts onto the opposite induced subcomplex
        return chi(A.induced(A.vertices - fv))
    if claim.kind == "section-open":
        removed = set(frontier)
        for s in K.subcomplex(frozenset(b) for b in claim.boundary).simplices:
            if s in A.simplices:
                removed.add(s)
        B = SimplicialComplex(frozenset(removed))
        B.check()
        return chi_c(A, B)
    raise ComplexError(f"unknown claim kind {claim.kind!r}")


def verify_model_entry(K: SimplicialComplex, claim: Claim) -> bool:
    return measure(K, claim) == claim.expected


# -- curve branches -------------------------------------------------------


def branch_preimages(
    coords: Sequence[Sequence[float]],
    form: Sequence[float],
    t0: float = 1e-12,
    radius: float = 0.1,
) -> int:
    """Number of parameter values near 0 where a linear form takes the value ``t0``
    on a polynomial branch ``t -> (coords[0](t), ...)``.

    Polynomials are coefficient lists in increasing degree; roots are found
    numerically and counted inside a small disk.
    """
    deg = max(len(c) for c in coords)
    poly = np.zeros(deg)
    for coef, c in zip(form, coords):
        poly[: len(c)] += coef * np.asarray(c, dtype=float)
    poly[0] -= t0
    poly = np.trim_zeros(poly, "b")
    roots = np.roots(poly[::-1])
    return int(np.sum(np.abs(roots) < radius))


# -- file format ---------------------------------------------------------


def complex_from_dict(data: Mapping[str, Any]) -> SimplicialComplex:
    extra = set(data) - {"vertices", "simplices", "tags"}
    if extra:
        raise ComplexError(f"complex: unknown key(s) {', '.join(sorted(extra))}")
    facets = [tuple(s) for s in data.get("simplices", [])]
    facets += [(v,) for v in data.get("vertices", [])]
    tags = {tuple(t["simplex"]): t["stratum"] for t in data.get("tags", [])}
    K = SimplicialComplex.from_facets(facets, tags)
    K.check()
    return K


def complex_to_dict(K: SimplicialComplex) -> dict[str, Any]:
    out: dict[str, Any] = {
        "vertices": sorted(K.vertices, key=str),
        "simplices": sorted((sorted(s, key=str) for s in K.facets()), key=lambda s: (len(s), list(map(str, s)))),
    }
    if K.tags:
        out["tags"] = [
            {"simplex": sorted(s, key=str), "stratum": t}
            for s, t in sorted(K.tags.items(), key=lambda kv: (len(kv[0]), sorted(map(str, kv[0]))))
        ]
    return out


def load_complex(path: str | Path) -> SimplicialComplex:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ComplexError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return complex_from_dict(data)
