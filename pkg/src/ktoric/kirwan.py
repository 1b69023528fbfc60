"""Kirwan-kernel computations for the Delzant construction.

A Delzant polytope with facet normals ``a_1..a_N`` in ``Z^n`` gives the
exact sequence ``0 -> Z^k -> Z^N -> Z^n -> 0`` (``beta(e_i) = a_i``,
``iota`` a kernel basis), the weights ``alpha_i = iota^T e_i`` of the
``T^k``-action on ``C^N`` and the quadratic moment map

    Phi(z) = -1/2 sum_i |z_i|^2 alpha_i + iota^T eta.

From this we get the finite set ``Z`` of critical values of ``|Phi|^2``,
the kernel generators ``prod_{i in S} (1 - x_i^{-1})`` over minimal
non-faces, the lattice relations ``x^{beta^T m} - 1`` and the closed-form
gradient flow of a moment map component.

Sign convention: ``xi_A`` is the point of ``cone{alpha_i : i in A} -
iota^T eta`` nearest the origin.  With it, the negative set
``{j : <alpha_j, xi_A> < 0}`` of a minimal non-face complement is exactly
the non-face.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .lattice import IntMatrix, kernel_basis, rational_solve
from .polytope import DelzantPolytope, format_rational, minimal_nonfaces, require_valid
from .ring import GroupRingElem, apply_lattice_map, euler_class, monomial, one

__all__ = [
    "DelzantData",
    "Presentation",
    "ReducedPresentation",
    "CriticalDatum",
    "SampleOnInvariantSet",
    "build_delzant_data",
    "moment_map_value",
    "nearest_point_shifted_cone",
    "cone_contains",
    "critical_values_Z",
    "negative_coordinate_set",
    "kernel_generators",
    "relations_J",
    "presentation",
    "eliminate_J",
    "nonface_duality",
    "empty_face_equivalence",
    "gradient_flow",
    "flow_retraction_check",
    "flow_check_all",
    "draw_flow_samples",
    "xi_for_subset",
]

Vec = tuple[Fraction, ...]


class SampleOnInvariantSet(ValueError):
    pass


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class DelzantData:
    beta: IntMatrix                 # n x N, columns a_i
    iota: IntMatrix                 # N x k, columns a saturated kernel basis
    eta: tuple[Fraction, ...]
    polytope: DelzantPolytope | None = None

    @property
    def N(self) -> int:
        return self.beta.cols

    @property
    def n(self) -> int:
        return self.beta.rows

    @property
    def k(self) -> int:
        return self.iota.cols

    @property
    def alphas(self) -> list[tuple[int, ...]]:
        return [self.iota.row(i) for i in range(self.N)]

    @property
    def iota_star_eta(self) -> Vec:
        return tuple(
            sum(Fraction(self.iota[i, j]) * self.eta[i] for i in range(self.N)) for j in range(self.k)
        )

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "n": self.n,
            "k": self.k,
            "beta": self.beta.tolist(),
            "iota": self.iota.tolist(),
            "alphas": [list(a) for a in self.alphas],
            "eta": [format_rational(e) for e in self.eta],
            "iota_star_eta": [format_rational(e) for e in self.iota_star_eta],
        }


def build_delzant_data(P: DelzantPolytope) -> DelzantData:
    require_valid(P)
    beta = IntMatrix.from_columns(P.normals)
    basis = kernel_basis(beta)
    iota = IntMatrix.from_columns(basis, P.nfacets)
    assert all(x == 0 for row in beta @ iota for x in row)
    return DelzantData(beta=beta, iota=iota, eta=P.offsets, polytope=P)


def moment_map_value(D: DelzantData, sq_moduli: Sequence) -> Vec:
    """``Phi`` from the squared moduli ``|z_i|^2`` (given exactly)."""
    s = [Fraction(x) for x in sq_moduli]
    if len(s) != D.N:
        raise ValueError(f"expected {D.N} squared moduli")
    base = D.iota_star_eta
    return tuple(
        base[j] - Fraction(1, 2) * sum(s[i] * D.iota[i, j] for i in range(D.N)) for j in range(D.k)
    )


def nearest_point_shifted_cone(gens: Sequence[Sequence], shift: Sequence) -> Vec:
    """Exact minimum-norm point of ``{shift + sum c_i g_i : c_i >= 0}``.

    Active sets are tried in order of size; for each linearly independent
    set ``B`` the projection onto ``shift + span(B)`` is accepted when its
    coefficients are positive and it pairs nonnegatively with every
    generator.  Those are the KKT conditions of a convex problem, so the
    first accepted point is the minimizer.
    """
    shift = tuple(Fraction(x) for x in shift)
    gens = [tuple(Fraction(x) for x in g) for g in gens]
    gens = [g for g in gens if any(g)]
    # collinear duplicates give identical candidates
    uniq: list[Vec] = []
    for g in gens:
        if not any(_parallel_pos(g, h) for h in uniq):
            uniq.append(g)
    k = len(shift)
    for size in range(0, min(k, len(uniq)) + 1):
        for B in combinations(uniq, size):
            if size:
                gram = [[_dot(g, h) for h in B] for g in B]
                c = rational_solve(gram, [-_dot(g, shift) for g in B])
                if c is None or any(x <= 0 for x in c):
                    continue
                p = tuple(shift[j] + sum(ci * g[j] for ci, g in zip(c, B)) for j in range(k))
            else:
                p = shift
            if all(_dot(g, p) >= 0 for g in uniq):
                return p
    raise AssertionError("no KKT point found; the cone projection always has one")


def _parallel_pos(g, h) -> bool:
    # g = t h with t > 0
    for a, b in zip(g, h):
        if b != 0:
            t = a / b
            break
    else:
        return False
    return t > 0 and all(a == t * b for a, b in zip(g, h))


def cone_contains(gens: Sequence[Sequence], point: Sequence) -> bool:
    """Whether ``point`` is a nonnegative combination of ``gens``."""
    return not any(nearest_point_shifted_cone(gens, [-Fraction(x) for x in point]))


@dataclass(frozen=True)
class CriticalDatum:
    xi: Vec
    A: frozenset[int]
    negative_set: frozenset[int]

    def to_dict(self) -> dict:
        return {
            "xi": [format_rational(x) for x in self.xi],
            "A": sorted(i + 1 for i in self.A),
            "S": sorted(i + 1 for i in self.negative_set),
        }


def negative_coordinate_set(D: DelzantData, xi: Sequence) -> frozenset[int]:
    return frozenset(j for j, a in enumerate(D.alphas) if _dot(a, xi) < 0)


def xi_for_subset(D: DelzantData, A) -> Vec:
    shift = tuple(-x for x in D.iota_star_eta)
    return nearest_point_shifted_cone([D.alphas[i] for i in sorted(A)], shift)


def critical_values_Z(D: DelzantData) -> list[CriticalDatum]:
    """``xi_A`` over all ``A``, deduplicated; each value keeps the
    lexicographically smallest ``A`` producing it."""
    best: dict[Vec, tuple[int, ...]] = {}
    for size in range(D.N + 1):
        for A in combinations(range(D.N), size):
            xi = xi_for_subset(D, A)
            if xi not in best or A < best[xi]:
                best[xi] = A
    if len(best) > 2 ** D.N:
        raise AssertionError("more critical values than coordinate subspaces")
    out = [CriticalDatum(xi, frozenset(A), negative_coordinate_set(D, xi)) for xi, A in best.items()]
    return sorted(out, key=lambda c: (_dot(c.xi, c.xi), c.xi))


def kernel_generators(P: DelzantPolytope) -> list[GroupRingElem]:
    N = P.nfacets
    return [_nonface_product(S, N) for S in minimal_nonfaces(P)]


def _nonface_product(S, N) -> GroupRingElem:
    units = [tuple(1 if j == i else 0 for j in range(N)) for i in sorted(S)]
    return euler_class(units, rank=N)


def relations_J(D: DelzantData) -> list[GroupRingElem]:
    """``x^{beta^T m_j} - 1`` for the standard basis ``m_j`` of ``Z^n``."""
    return [monomial(D.beta.row(j)) - 1 for j in range(D.n)]


@dataclass(frozen=True)
class Presentation:
    N: int
    I_gens: tuple[GroupRingElem, ...]
    J_gens: tuple[GroupRingElem, ...]
    nonfaces: tuple[frozenset[int], ...]
    data: DelzantData

    def to_dict(self) -> dict:
        return {
            "generators": self.N,
            "I": [{"element": f.render(), "S": sorted(i + 1 for i in S)} for f, S in zip(self.I_gens, self.nonfaces)],
            "J": [
                {"element": g.render(), "m": [1 if i == j else 0 for i in range(self.data.n)]}
                for j, g in enumerate(self.J_gens)
            ],
            "nonfaces": [sorted(i + 1 for i in S) for S in self.nonfaces],
        }


def presentation(P: DelzantPolytope) -> Presentation:
    D = build_delzant_data(P)
    nonfaces = minimal_nonfaces(P)
    return Presentation(
        N=P.nfacets,
        I_gens=tuple(_nonface_product(S, P.nfacets) for S in nonfaces),
        J_gens=tuple(relations_J(D)),
        nonfaces=tuple(nonfaces),
        data=D,
    )


@dataclass(frozen=True)
class ReducedPresentation:
    """The presentation with ``J`` eliminated: ``Z[Z^k] / I'``."""

    k: int
    gens: tuple[GroupRingElem, ...]
    substitution: tuple[tuple[int, ...], ...]   # x_i -> y^{alpha_i}

    def to_dict(self) -> dict:
        names = _reduced_names(self.k)
        return {
            "rank": self.k,
            "substitution": [
                monomial(a).render(names) for a in self.substitution
            ],
            "relations": [g.render(names) for g in self.gens],
        }


def _reduced_names(k):
    if k == 1:
        return ["x"]
    if k <= 3:
        return ["x", "y", "z"][:k]
    return [f"y{i + 1}" for i in range(k)]


def eliminate_J(pres: Presentation) -> ReducedPresentation:
    """Quotient by ``J`` explicitly.

    ``Z[Z^N] / J`` is the group ring of ``Z^N / beta^T Z^n``, which
    ``iota^T`` identifies with ``Z^k`` (the dual sequence is exact since the
    kernel basis is saturated).  So ``J`` disappears under ``x_i -> y^{alpha_i}``.
    """
    h = pres.data.iota.T
    for g in pres.J_gens:
        assert apply_lattice_map(g, h).is_zero()
    return ReducedPresentation(
        k=pres.data.k,
        gens=tuple(apply_lattice_map(f, h) for f in pres.I_gens),
        substitution=tuple(pres.data.alphas),
    )


def nonface_duality(D: DelzantData, P: DelzantPolytope | None = None) -> list[dict]:
    """For each minimal non-face ``S`` with ``A = S^c``: the pairings
    ``<alpha_i, xi_A>`` split into the ``A`` part and the ``S`` part.

    Reports, per non-face, whether every pairing on ``A`` vanishes, whether
    every pairing on ``S`` is negative, and whether ``S`` equals the
    negative set of ``xi_A``.
    """
    P = P or D.polytope
    out = []
    for S in minimal_nonfaces(P):
        A = frozenset(range(D.N)) - S
        xi = xi_for_subset(D, A)
        pair = {i: _dot(D.alphas[i], xi) for i in range(D.N)}
        out.append({
            "S": S,
            "A": A,
            "xi": xi,
            "pairings": pair,
            "vanishes_on_A": all(pair[i] == 0 for i in A),
            "nonnegative_on_A": all(pair[i] >= 0 for i in A),
            "negative_on_S": all(pair[i] < 0 for i in S),
            "negative_set_is_S": negative_coordinate_set(D, xi) == S,
        })
    return out


def empty_face_equivalence(D: DelzantData, P: DelzantPolytope | None = None) -> list[tuple[frozenset[int], bool, bool]]:
    """For every ``A``: (A, facets off ``A`` have empty intersection,
    ``0`` is not in ``Phi(C^A)``).  The two flags should agree."""
    P = P or D.polytope
    faces = [v.incident for v in P.vertices]
    out = []
    for size in range(D.N + 1):
        for A in combinations(range(D.N), size):
            comp = frozenset(range(D.N)) - frozenset(A)
            empty = not any(comp <= f for f in faces)
            # 0 in Phi(C^A)  <=>  iota^T eta in cone{alpha_i : i in A}
            missing = not cone_contains([D.alphas[i] for i in A], D.iota_star_eta)
            out.append((frozenset(A), empty, missing))
    return out


def moment_component(D: DelzantData, xi: Sequence, sq_moduli: np.ndarray) -> np.ndarray:
    """``<Phi(z), xi>`` for float squared moduli (vectorized over leading axes)."""
    w = np.array([float(_dot(a, xi)) for a in D.alphas])
    c = float(_dot(D.iota_star_eta, xi))
    return c - 0.5 * np.asarray(sq_moduli, dtype=float) @ w


def gradient_flow(D: DelzantData, xi: Sequence, z0: Sequence[complex], t) -> np.ndarray:
    """Negative gradient flow of ``<Phi, xi>``: ``z_i(t) = z_i(0) exp(<alpha_i, xi> t)``."""
    w = np.array([float(_dot(a, xi)) for a in D.alphas])
    return np.asarray(z0, dtype=complex) * np.exp(w * float(t))


@dataclass
class FlowSample:
    z0: np.ndarray
    start_value: float
    hit_time: float | None
    monotone: bool

    def to_dict(self) -> dict:
        return {
            "z0": [[float(z.real), float(z.imag)] for z in self.z0],
            "start_value": self.start_value,
            "hit_time": self.hit_time,
            "monotone": self.monotone,
        }


@dataclass
class FlowReport:
    xi: Vec
    negative_set: frozenset[int]
    critical_value: float
    epsilon: float
    t_max: float
    samples: list[FlowSample]
    skipped: str = ""

    @property
    def passed(self) -> bool:
        return all(s.monotone and s.hit_time is not None for s in self.samples)

    def to_dict(self) -> dict:
        return {
            "xi": [format_rational(x) for x in self.xi],
            "S": sorted(i + 1 for i in self.negative_set),
            "critical_value": self.critical_value,
            "epsilon": self.epsilon,
            "t_max": self.t_max,
            "passed": self.passed,
            "skipped": self.skipped,
            "samples": [s.to_dict() for s in self.samples],
        }


def draw_flow_samples(D: DelzantData, xi: Sequence, count: int, rng: random.Random, epsilon: float) -> list[np.ndarray]:
    """Random points of ``M^+ = {<Phi, xi> < epsilon}`` whose coordinates in the
    negative set are all nonzero."""
    S = negative_coordinate_set(D, xi)
    out = []
    while len(out) < count:
        z = np.array([complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(D.N)])
        for j in S:
            if z[j] == 0:
                z[j] = 1.0
        # shrink the S-coordinates until the point is inside M^+
        for _ in range(200):
            if moment_component(D, xi, np.abs(z) ** 2) < epsilon:
                break
            for j in S:
                z[j] *= 0.5
        else:
            continue
        out.append(z)
    return out


def flow_retraction_check(
    D: DelzantData,
    xi: Sequence,
    samples: Sequence[Sequence[complex]],
    t_max: float = 50.0,
    tol: float = 1e-9,
    epsilon: float | None = None,
    grid: int = 100,
) -> FlowReport:
    """Check that every sample flows from ``{<Phi, xi> < eps}`` down into
    ``{<Phi, xi> < -eps}`` before ``t_max``.

    ``eps`` defaults to half of ``-<iota^T eta, xi> = |xi|^2``, inside the
    admissible range ``(0, |xi|^2)``.  Along the flow the component is
    ``c - 1/2 sum_i w_i |z_i|^2 exp(2 w_i t)`` with ``w_i = <alpha_i, xi>``,
    so it is nonincreasing; this is checked on a grid of ``grid`` steps
    with slack ``tol`` and the crossing time is found by root bracketing.
    """
    xi = tuple(Fraction(x) for x in xi)
    S = negative_coordinate_set(D, xi)
    c = float(_dot(D.iota_star_eta, xi))
    report = FlowReport(xi, S, c, 0.0, t_max, [])
    if not any(xi):
        report.skipped = "xi = 0: the ideal K_0 is zero and there is no admissible epsilon"
        return report
    upper = -c
    if upper <= 0:
        raise ValueError("flow check needs <iota^T eta, xi> < 0")
    eps = upper / 2 if epsilon is None else float(epsilon)
    if not 0 < eps < upper:
        raise ValueError(f"epsilon must lie in (0, {upper})")
    report.epsilon = eps
    w = np.array([float(_dot(a, xi)) for a in D.alphas])

    ts = np.linspace(0.0, t_max, grid + 1)
    for z in samples:
        z = np.asarray(z, dtype=complex)
        if S and all(z[j] == 0 for j in S):
            raise SampleOnInvariantSet(f"sample {z} has every coordinate in S = {sorted(S)} equal to zero")
        if not S:
            raise SampleOnInvariantSet("xi has an empty negative set; every point is invariant")
        sq = np.abs(z) ** 2

        def value(t):
            return c - 0.5 * float(np.sum(w * sq * np.exp(2 * w * t)))

        vals = np.array([value(t) for t in ts])
        monotone = bool(np.all(np.diff(vals) <= tol))
        start = vals[0]
        if start >= eps:
            raise ValueError(f"sample is outside M^+ (value {start} >= {eps})")
        level = -eps
        if start < level:
            hit = 0.0
        elif value(t_max) < level:
            hit = float(brentq(lambda t: value(t) - level, 0.0, t_max, xtol=tol))
        else:
            hit = None
        report.samples.append(FlowSample(z, float(start), hit, monotone))
    return report


def flow_check_all(D: DelzantData, count: int = 50, seed: int = 0, t_max: float = 50.0, tol: float = 1e-9) -> list[FlowReport]:
    rng = random.Random(seed)
    out = []
    for cd in critical_values_Z(D):
        if not any(cd.xi):
            out.append(flow_retraction_check(D, cd.xi, [], t_max, tol))
            continue
        eps = -float(_dot(D.iota_star_eta, cd.xi)) / 2
        samples = draw_flow_samples(D, cd.xi, count, rng, eps)
        out.append(flow_retraction_check(D, cd.xi, samples, t_max, tol))
    return out
