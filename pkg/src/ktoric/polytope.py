"""Delzant polytopes in H-representation.

A polytope is ``{x : <x, a_i> <= eta_i}`` with primitive integer normals
``a_i`` and rational offsets ``eta_i``.  Facet indices are 0-based in the
API and 1-based (``F_1 .. F_N``) in reports and JSON.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Sequence

from .lattice import IntMatrix, is_primitive, primitive_part, rational_solve

__all__ = [
    "PolytopeError",
    "UnboundedPolytope",
    "EmptyPolytope",
    "InvalidPolytope",
    "DelzantPolytope",
    "Vertex",
    "Edge",
    "ValidationReport",
    "enumerate_vertices",
    "validate_delzant",
    "minimal_nonfaces",
    "edges",
    "generic_direction",
    "vertex_directions",
    "format_rational",
    "parse_rational",
]


class PolytopeError(ValueError):
    pass


class UnboundedPolytope(PolytopeError):
    pass


class EmptyPolytope(PolytopeError):
    pass


class InvalidPolytope(PolytopeError):
    def __init__(self, report: "ValidationReport"):
        super().__init__("; ".join(c.describe() for c in report.failures()))
        self.report = report


def parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational (floats are rejected)")


def format_rational(q: Fraction) -> int | str:
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class Vertex:
    point: tuple[Fraction, ...]
    incident: frozenset[int]


@dataclass(frozen=True)
class Edge:
    endpoints: tuple[int, int]
    direction: tuple[int, ...]
    facets: frozenset[int]


@dataclass(frozen=True)
class DelzantPolytope:
    normals: tuple[tuple[int, ...], ...]
    offsets: tuple[Fraction, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "normals", tuple(tuple(int(x) for x in a) for a in self.normals))
        object.__setattr__(self, "offsets", tuple(parse_rational(e) for e in self.offsets))
        if len(self.normals) != len(self.offsets):
            raise ValueError("one offset per facet normal is required")
        if not self.normals:
            raise ValueError("a polytope needs at least one facet")
        n = len(self.normals[0])
        if n == 0 or any(len(a) != n for a in self.normals):
            raise ValueError("facet normals must share a positive dimension")
        if any(not any(a) for a in self.normals):
            raise ValueError("zero facet normal")

    @property
    def dim(self) -> int:
        return len(self.normals[0])

    @property
    def nfacets(self) -> int:
        return len(self.normals)

    @classmethod
    def from_dict(cls, data: dict, name: str | None = None) -> "DelzantPolytope":
        facets = data["facets"]
        P = cls(
            tuple(f["normal"] for f in facets),
            tuple(parse_rational(f["offset"]) for f in facets),
            name=name or data.get("name"),
        )
        if "dim" in data and int(data["dim"]) != P.dim:
            raise ValueError(f"declared dim {data['dim']} but normals have length {P.dim}")
        return P

    @classmethod
    def from_json(cls, path: str | Path) -> "DelzantPolytope":
        path = Path(path)
        return cls.from_dict(json.loads(path.read_text()), name=path.stem)

    def to_dict(self) -> dict:
        d = {
            "dim": self.dim,
            "facets": [
                {"normal": list(a), "offset": format_rational(e)}
                for a, e in zip(self.normals, self.offsets)
            ],
        }
        if self.name:
            d["name"] = self.name
        return d

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(_dot(a, x) <= e for a, e in zip(self.normals, self.offsets))

    @cached_property
    def vertices(self) -> tuple[Vertex, ...]:
        return tuple(enumerate_vertices(self))

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(edges(self))


def _recession_direction(P: DelzantPolytope) -> tuple[Fraction, ...] | None:
    """A nonzero ``d`` with ``A d <= 0``, or ``None`` if there is none."""
    n, A = P.dim, P.normals
    if _rank_of(A) < n:
        # nontrivial lineality space: any null vector works
        return _null_vector(A, n)
    # pointed cone: it is nontrivial iff some extreme ray exists, and
    # extreme rays are cut out by n-1 independent tight constraints
    for sub in combinations(range(len(A)), n - 1):
        rows = [A[i] for i in sub]
        if _rank_of(rows) != n - 1:
            continue
        d = _null_vector(rows, n)
        for cand in (d, tuple(-x for x in d)):
            if all(_dot(a, cand) <= 0 for a in A):
                return cand
    return None


def _rank_of(rows) -> int:
    if not rows:
        return 0
    M = [[Fraction(x) for x in r] for r in rows]
    r = 0
    for c in range(len(M[0])):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(r + 1, len(M)):
            f = M[i][c] / M[r][c]
            M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
    return r


def _null_vector(rows, n) -> tuple[Fraction, ...]:
    """Some nonzero vector orthogonal to ``rows`` (rank assumed < n)."""
    M = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        M[r] = [x / M[r][c] for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = next(c for c in range(n) if c not in pivots)
    v = [Fraction(0)] * n
    v[free] = Fraction(1)
    for i, c in enumerate(pivots):
        v[c] = -M[i][free]
    return tuple(v)


def enumerate_vertices(P: DelzantPolytope) -> list[Vertex]:
    """All vertices, sorted lexicographically by point, by solving every
    ``n``-subset of facet equations exactly."""
    if _recession_direction(P) is not None:
        raise UnboundedPolytope("the polytope has a recession direction")
    n, A, eta = P.dim, P.normals, P.offsets
    found: dict[tuple[Fraction, ...], None] = {}
    for sub in combinations(range(len(A)), n):
        x = rational_solve([A[i] for i in sub], [eta[i] for i in sub])
        if x is not None and P.contains(x):
            found[tuple(x)] = None
    if not found:
        raise EmptyPolytope("no point satisfies all facet inequalities")
    out = []
    for x in sorted(found):
        inc = frozenset(i for i in range(len(A)) if _dot(A[i], x) == eta[i])
        out.append(Vertex(x, inc))
    return out


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    offenders: tuple = ()
    detail: str = ""

    def describe(self) -> str:
        s = f"{self.name}: {'pass' if self.passed else 'FAIL'}"
        if self.detail:
            s += f" ({self.detail})"
        return s


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "checks": [
                {"name": c.name, "passed": c.passed, "offenders": _jsonable(c.offenders), "detail": c.detail}
                for c in self.checks
            ],
        }


def _jsonable(x):
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(y) for y in items]
    if isinstance(x, Fraction):
        return format_rational(x)
    return x


def validate_delzant(P: DelzantPolytope) -> ValidationReport:
    """Check boundedness, primitivity, irredundancy, simplicity and
    smoothness.  Offending facets are reported 1-based; offending vertices
    by their coordinates."""
    checks = []
    bad = [i + 1 for i, a in enumerate(P.normals) if not is_primitive(a)]
    checks.append(Check("primitive", not bad, tuple(bad), f"non-primitive normals at F{bad}" if bad else ""))

    d = _recession_direction(P)
    if d is not None:
        checks.append(Check("bounded", False, (), f"recession direction {_jsonable(d)}"))
        return ValidationReport(tuple(checks))
    try:
        verts = enumerate_vertices(P)
    except EmptyPolytope:
        checks.append(Check("bounded", True))
        checks.append(Check("nonempty", False, (), "no feasible point"))
        return ValidationReport(tuple(checks))
    checks.append(Check("bounded", True))
    checks.append(Check("nonempty", True))
    n = P.dim

    # every inequality must cut out a genuine facet
    redundant = [
        i + 1 for i in range(P.nfacets)
        if not any(i in v.incident for v in verts)
        or _rank_of([[x - y for x, y in zip(v.point, w.point)] for v in verts if i in v.incident
                     for w in verts if i in w.incident]) != n - 1
    ]
    checks.append(Check("irredundant", not redundant, tuple(redundant),
                        f"inequalities F{redundant} do not define facets" if redundant else ""))

    nonsimple = [v.point for v in verts if len(v.incident) != n]
    checks.append(Check("simple", not nonsimple, tuple(nonsimple),
                        "vertices on more than n facets" if nonsimple else ""))

    nonsmooth = []
    for v in verts:
        if len(v.incident) != n:
            continue
        det = IntMatrix([P.normals[i] for i in sorted(v.incident)]).det()
        if abs(det) != 1:
            nonsmooth.append((v.point, tuple(i + 1 for i in sorted(v.incident)), det))
    checks.append(Check(
        "smooth", not nonsmooth, tuple(nonsmooth),
        "; ".join(f"det {dt} at vertex {_jsonable(pt)} (facets {fs})" for pt, fs, dt in nonsmooth),
    ))
    return ValidationReport(tuple(checks))


def require_valid(P: DelzantPolytope) -> DelzantPolytope:
    rep = validate_delzant(P)
    if not rep.valid:
        raise InvalidPolytope(rep)
    return P


def minimal_nonfaces(P: DelzantPolytope) -> list[frozenset[int]]:
    """Inclusion-minimal facet sets with empty common intersection.

    For a simple polytope the facets in ``S`` meet iff some vertex lies on
    all of them.  Subsets are scanned by size, so a set is minimal exactly
    when no previously found non-face is contained in it.
    """
    faces = [v.incident for v in P.vertices]
    out: list[frozenset[int]] = []
    for k in range(1, P.nfacets + 1):
        for sub in combinations(range(P.nfacets), k):
            S = frozenset(sub)
            if any(m <= S for m in out):
                continue
            if not any(S <= f for f in faces):
                out.append(S)
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def edges(P: DelzantPolytope) -> list[Edge]:
    """1-faces: vertex pairs sharing ``n - 1`` facets, with primitive
    direction from the first (lexicographically smaller) endpoint."""
    verts = P.vertices
    n = P.dim
    out = []
    for i, j in combinations(range(len(verts)), 2):
        common = verts[i].incident & verts[j].incident
        if len(common) < n - 1:
            continue
        # the common facets must cut out a line, not a point
        if _rank_of([P.normals[f] for f in common]) != n - 1:
            continue
        # and no other vertex may lie strictly between on that line
        diff = [b - a for a, b in zip(verts[i].point, verts[j].point)]
        others = [k for k, v in enumerate(verts) if k not in (i, j) and common <= v.incident]
        if others:
            continue
        out.append(Edge((i, j), _primitive_rational(diff), frozenset(common)))
    return out


def _primitive_rational(v: Sequence[Fraction]) -> tuple[int, ...]:
    from math import lcm

    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    return primitive_part([int(Fraction(x) * den) for x in v])


def vertex_directions(P: DelzantPolytope, v: int) -> dict[int, tuple[int, ...]]:
    """Map facet ``i`` at vertex ``v`` to the primitive direction of the edge
    at ``v`` that leaves ``F_i``.

    For a smooth vertex these are the columns of ``-A_v^{-1}``: the edge
    leaving ``F_i`` satisfies ``<a_i, d> = -1`` and ``<a_j, d> = 0`` for the
    other facets ``j`` at ``v``.
    """
    inc = sorted(P.vertices[v].incident)
    rows = [P.normals[i] for i in inc]
    out = {}
    for k, i in enumerate(inc):
        rhs = [Fraction(-1 if kk == k else 0) for kk in range(len(inc))]
        d = rational_solve(rows, rhs)
        if d is None:
            raise PolytopeError(f"vertex {v} is not simple")
        out[i] = _primitive_rational(d)
    return out


def generic_direction(P: DelzantPolytope, max_tries: int = 10_000) -> tuple[int, ...]:
    """First ``(1, M, M^2, ...)``, ``M = 1, 2, ...``, that is nonzero on every
    edge and separates all vertices."""
    dirs = [e.direction for e in P.edges]
    pts = [v.point for v in P.vertices]
    for M in range(1, max_tries + 1):
        xi = tuple(M ** k for k in range(P.dim))
        if any(_dot(xi, d) == 0 for d in dirs):
            continue
        vals = [_dot(xi, p) for p in pts]
        if len(set(vals)) == len(vals):
            return xi
    raise RuntimeError("no generic direction found")
