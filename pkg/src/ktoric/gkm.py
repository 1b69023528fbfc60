"""GKM graphs and fixed-point restrictions in equivariant K-theory.

A class on the fixed points is a map ``vertex -> R(T)``; it lies in the
GKM subring when ``h(p) - h(q)`` is divisible by ``1 - e^{-w}`` along every
edge ``(p, q)`` of weight ``w``.  For Delzant polytopes the restriction of
``x_i`` to a vertex ``v`` is ``e^{-d_{v,i}}`` when ``F_i`` contains ``v`` and
``1`` otherwise, ``d_{v,i}`` being the edge direction at ``v`` that leaves
``F_i``.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .lattice import rank as lattice_rank, IntMatrix
from .polytope import (
    DelzantPolytope,
    format_rational,
    generic_direction,
    require_valid,
    vertex_directions,
)
from .kirwan import presentation
from .ring import (
    GroupRingElem,
    divisible_by_one_minus,
    euler_class,
    monomial,
    one,
    zero,
)

__all__ = [
    "GKMViolation",
    "NonGenericDirection",
    "GKMGraph",
    "FixedPointClass",
    "RankCertificate",
    "build_gkm_graph",
    "gamma_subring_contains",
    "restrict_class",
    "morse_basis",
    "equivariant_rank_certificate",
    "ordinary_k_rank",
    "verify_presentation",
    "VerificationReport",
]


class GKMViolation(ValueError):
    pass


class NonGenericDirection(ValueError):
    pass


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class GKMGraph:
    """Labelled graph ``(V, E, w)`` with weights in ``Z^rank``.

    ``points`` (optional) are vertex positions used to order vertices by a
    moment-map component.
    """

    vertices: tuple[Hashable, ...]
    edges: tuple[tuple[Hashable, Hashable, tuple[int, ...]], ...]
    rank: int
    points: Mapping[Hashable, tuple[Fraction, ...]] | None = field(default=None, compare=False)

    def __post_init__(self):
        ids = set(self.vertices)
        if len(ids) != len(self.vertices):
            raise GKMViolation("duplicate vertex ids")
        for p, q, w in self.edges:
            if p not in ids or q not in ids:
                raise GKMViolation(f"edge ({p}, {q}) has an unknown endpoint")
            if p == q:
                raise GKMViolation(f"loop at {p}")
            if len(w) != self.rank:
                raise GKMViolation(f"edge ({p}, {q}) weight {w} is not of rank {self.rank}")
            if not any(w):
                raise GKMViolation(f"edge ({p}, {q}) has zero weight")
        for v in self.vertices:
            ws = self.weights_at(v)
            for i in range(len(ws)):
                for j in range(i + 1, len(ws)):
                    if lattice_rank(IntMatrix([ws[i], ws[j]])) < 2:
                        raise GKMViolation(
                            f"weights {ws[i]} and {ws[j]} at vertex {v} are linearly dependent"
                        )

    def incident(self, v) -> list[tuple[Hashable, tuple[int, ...]]]:
        """Neighbours of ``v`` with the weight oriented away from ``v``."""
        out = []
        for p, q, w in self.edges:
            if p == v:
                out.append((q, w))
            elif q == v:
                out.append((p, tuple(-x for x in w)))
        return out

    def weights_at(self, v) -> list[tuple[int, ...]]:
        return [w for _, w in self.incident(v)]

    @classmethod
    def from_dict(cls, data: dict) -> "GKMGraph":
        verts = data["vertices"]
        ids = tuple(v["id"] for v in verts)
        points = None
        if all("point" in v for v in verts):
            points = {v["id"]: tuple(Fraction(str(x)) for x in v["point"]) for v in verts}
        edges = tuple((e["from"], e["to"], tuple(int(x) for x in e["weight"])) for e in data["edges"])
        if edges:
            rank = len(edges[0][2])
        elif "rank" in data:
            rank = int(data["rank"])
        else:
            raise ValueError("cannot infer the weight rank of an edgeless graph")
        return cls(ids, edges, rank, points)

    def to_dict(self) -> dict:
        verts = []
        for v in self.vertices:
            d = {"id": v}
            if self.points is not None:
                d["point"] = [format_rational(x) for x in self.points[v]]
            verts.append(d)
        return {
            "vertices": verts,
            "edges": [{"from": p, "to": q, "weight": list(w)} for p, q, w in self.edges],
        }


class FixedPointClass(dict):
    """``vertex id -> GroupRingElem``, all on the same free carrier."""

    def __init__(self, values: Mapping = (), **kw):
        super().__init__(values, **kw)
        carriers = {f.carrier for f in self.values()}
        if len(carriers) > 1:
            raise ValueError("fixed-point values must share a carrier")

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.values())

    def is_constant(self) -> bool:
        vals = list(self.values())
        return all(f == vals[0] for f in vals[1:])

    def __mul__(self, other):
        if isinstance(other, FixedPointClass):
            return FixedPointClass({v: self[v] * other[v] for v in self})
        return FixedPointClass({v: f * other for v, f in self.items()})

    __rmul__ = __mul__

    def __add__(self, other):
        return FixedPointClass({v: self[v] + other[v] for v in self})

    def __sub__(self, other):
        return FixedPointClass({v: self[v] - other[v] for v in self})

    def to_dict(self) -> dict:
        return {str(v): f.render() for v, f in self.items()}


def build_gkm_graph(P: DelzantPolytope) -> GKMGraph:
    """Vertices are the polytope vertices (ids ``0..V-1`` in lexicographic
    order of points); edge weights are primitive directions from the
    lexicographically smaller endpoint."""
    require_valid(P)
    verts = P.vertices
    return GKMGraph(
        vertices=tuple(range(len(verts))),
        edges=tuple((e.endpoints[0], e.endpoints[1], e.direction) for e in P.edges),
        rank=P.dim,
        points={i: v.point for i, v in enumerate(verts)},
    )


def gamma_subring_contains(graph: GKMGraph, h: Mapping) -> bool:
    missing = [v for v in graph.vertices if v not in h]
    if missing:
        raise ValueError(f"class is undefined at vertices {missing}")
    return all(divisible_by_one_minus(h[p] - h[q], w) for p, q, w in graph.edges)


def failing_edges(graph: GKMGraph, h: Mapping) -> list[tuple]:
    return [(p, q, w) for p, q, w in graph.edges if not divisible_by_one_minus(h[p] - h[q], w)]


def _substitution(P: DelzantPolytope) -> dict[int, dict[int, tuple[int, ...]]]:
    """Per vertex: facet i -> exponent of x_i's restriction (``-d_{v,i}``)."""
    return {
        v: {i: tuple(-x for x in d) for i, d in vertex_directions(P, v).items()}
        for v in range(len(P.vertices))
    }


def restrict_class(P: DelzantPolytope, f: GroupRingElem, _subs=None) -> FixedPointClass:
    """Restrict a class in ``Z[x_1^±..x_N^±]`` to the fixed points."""
    if f.rank != P.nfacets:
        raise ValueError(f"class must live on the rank-{P.nfacets} carrier")
    subs = _subs if _subs is not None else _substitution(P)
    n = P.dim
    out = {}
    for v, images in subs.items():
        acc: dict[tuple[int, ...], int] = {}
        for exp, c in f.items():
            e = [0] * n
            for i, p in enumerate(exp):
                if p and i in images:
                    e = [a + p * b for a, b in zip(e, images[i])]
            e = tuple(e)
            acc[e] = acc.get(e, 0) + c
        out[v] = GroupRingElem(n, acc)
    return FixedPointClass(out)


def _check_generic(P: DelzantPolytope, xi) -> None:
    if any(_dot(xi, e.direction) == 0 for e in P.edges):
        raise NonGenericDirection(f"xi = {tuple(xi)} is orthogonal to an edge")
    vals = [_dot(xi, v.point) for v in P.vertices]
    if len(set(vals)) != len(vals):
        raise NonGenericDirection(f"xi = {tuple(xi)} does not separate the vertices")


def morse_basis(P: DelzantPolytope, xi: Sequence[int] | None = None) -> list[tuple[int, FixedPointClass]]:
    """Classes ``tau_v`` supported on the faces above each vertex.

    ``tau_v`` restricts ``prod (1 - x_i^{-1})`` over the facets ``i`` at ``v``
    whose omitted edge points down, so it vanishes at every vertex off the
    face spanned by the upward edges at ``v``, in particular at every vertex
    below ``v``.
    """
    require_valid(P)
    xi = tuple(generic_direction(P) if xi is None else xi)
    _check_generic(P, xi)
    subs = _substitution(P)
    N = P.nfacets
    order = sorted(range(len(P.vertices)), key=lambda v: _dot(xi, P.vertices[v].point))
    out = []
    for v in order:
        down = [i for i, d in vertex_directions(P, v).items() if _dot(xi, d) < 0]
        gen = euler_class([tuple(1 if j == i else 0 for j in range(N)) for i in down], rank=N)
        out.append((v, restrict_class(P, gen, subs)))
    return out


@dataclass(frozen=True)
class RankCertificate:
    rank: int
    order: tuple
    matrix: tuple[tuple[GroupRingElem, ...], ...]   # matrix[r][c] = tau_{order[r]} at order[c]
    triangular: bool
    diagonal_ok: bool
    in_gamma: bool

    @property
    def valid(self) -> bool:
        return self.triangular and self.diagonal_ok and self.in_gamma

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "order": list(self.order),
            "triangular": self.triangular,
            "diagonal_nonzero_divisor": self.diagonal_ok,
            "classes_in_gamma_subring": self.in_gamma,
            "matrix": [[f.render() for f in row] for row in self.matrix],
        }


def rank_certificate(graph: GKMGraph, basis: Sequence[tuple[Hashable, Mapping]], xi: Sequence) -> RankCertificate:
    """Certify that ``basis`` (vertex, class) pairs are independent over R(T).

    Works for any GKM graph with vertex points.  Requires: every class in
    the GKM subring, ``tau_v`` zero at vertices strictly below ``v``, and
    ``tau_v(v)`` equal to the Euler class of the edges descending from
    ``v`` (a non-zero-divisor because every weight is nonzero).
    """
    if graph.points is None:
        raise ValueError("a rank certificate needs vertex points to order the vertices")
    height = {v: _dot(xi, graph.points[v]) for v in graph.vertices}
    if len(set(height.values())) != len(height):
        raise NonGenericDirection("xi does not separate the vertices")
    order = tuple(v for v, _ in basis)
    if sorted(order, key=height.__getitem__) != list(order) or set(order) != set(graph.vertices):
        raise ValueError("basis must list every vertex once, in increasing height")
    matrix = tuple(tuple(cls[w] for w in order) for _, cls in basis)
    triangular = all(matrix[r][c].is_zero() for r in range(len(order)) for c in range(r))
    diagonal_ok = True
    for r, v in enumerate(order):
        down = [w for u, w in graph.incident(v) if height[u] < height[v]]
        expected = euler_class([tuple(-x for x in w) for w in down], rank=graph.rank)
        diag = matrix[r][r]
        # up to a unit e^u the diagonal must be the descending Euler class
        if diag.is_zero() or len(diag) != len(expected) or not _unit_multiple(diag, expected):
            diagonal_ok = False
    in_gamma = all(gamma_subring_contains(graph, cls) for _, cls in basis)
    return RankCertificate(len(order), order, matrix, triangular, diagonal_ok, in_gamma)


def _unit_multiple(f: GroupRingElem, g: GroupRingElem) -> bool:
    """Whether ``f = ± e^u g`` for some ``u``."""
    (fe, fc), (ge, gc) = max(f.items()), max(g.items())
    u = tuple(a - b for a, b in zip(fe, ge))
    for sign in (1, -1):
        if fc == sign * gc and f == g.shift(u).scalar_mul(sign):
            return True
    return False


def equivariant_rank_certificate(P: DelzantPolytope, xi: Sequence[int] | None = None) -> RankCertificate:
    xi = tuple(generic_direction(P) if xi is None else xi)
    graph = build_gkm_graph(P)
    return rank_certificate(graph, morse_basis(P, xi), xi)


def ordinary_k_rank(P: DelzantPolytope, xi: Sequence[int] | None = None) -> int:
    """Rank of ``K^0`` of the toric manifold.

    The certified Morse basis is a free R(T)-basis of the equivariant ring,
    and augmentation ``R(T) -> Z`` turns it into a Z-basis of ``K^0``, so the
    rank is the number of fixed points.  ``K^1`` vanishes.
    """
    cert = equivariant_rank_certificate(P, xi)
    if not cert.valid:
        raise AssertionError(f"rank certificate failed: {cert.to_dict()}")
    return cert.rank


@dataclass
class VerificationReport:
    I_zero: list[tuple[str, bool]]
    J_constant: list[tuple[str, bool, str]]
    monomials_tested: int
    monomial_failures: list[tuple[tuple[int, ...], list]]

    @property
    def passed(self) -> bool:
        return (
            all(ok for _, ok in self.I_zero)
            and all(ok for _, ok, _ in self.J_constant)
            and not self.monomial_failures
        )

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "I_restricts_to_zero": [{"element": e, "ok": ok} for e, ok in self.I_zero],
            "J_restricts_to_constant": [{"element": e, "ok": ok, "value": val} for e, ok, val in self.J_constant],
            "monomials_tested": self.monomials_tested,
            "monomial_failures": [
                {"exponent": list(e), "edges": [[p, q, list(w)] for p, q, w in bad]}
                for e, bad in self.monomial_failures
            ],
        }


def verify_presentation(
    P: DelzantPolytope, samples: int = 200, seed: int = 0, exp_bound: int = 3
) -> VerificationReport:
    """Cross-check the presentation against the fixed-point model."""
    pres = presentation(P)
    graph = build_gkm_graph(P)
    subs = _substitution(P)

    I_zero = [(f.render(), restrict_class(P, f, subs).is_zero()) for f in pres.I_gens]

    J_const = []
    for g in pres.J_gens:
        mono = g + 1      # x^{beta^T m}
        r = restrict_class(P, mono, subs)
        val = next(iter(r.values()))
        ok = r.is_constant() and len(val) == 1 and next(iter(val.items()))[1] == 1
        J_const.append((g.render(), ok, val.render()))

    rng = random.Random(seed)
    failures = []
    for _ in range(samples):
        e = tuple(rng.randint(-exp_bound, exp_bound) for _ in range(P.nfacets))
        h = restrict_class(P, monomial(e), subs)
        bad = failing_edges(graph, h)
        if bad:
            failures.append((e, bad))
    return VerificationReport(I_zero, J_const, samples, failures)
