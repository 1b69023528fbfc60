"""Integer group rings of lattices.

``GroupRingElem`` is a finitely supported function from a lattice ``L`` to
``Z``, written as a sum of monomials ``c * e^v``.  With ``L = Z^n`` this is
the representation ring of an ``n``-torus (equivalently Laurent
polynomials in ``x1..xn``); with ``L`` a :class:`QuotientLattice` it is the
group ring of the quotient, which is how divisibility by ``1 - e^{-a}``
is decided.
"""
from __future__ import annotations

import random
from typing import Iterable, Mapping, Sequence, Union

from .lattice import IntMatrix, QuotientLattice, quotient_lattice

__all__ = [
    "CarrierMismatch",
    "ZeroWeight",
    "GroupRingElem",
    "monomial",
    "one",
    "zero",
    "euler_class",
    "divisible_by_one_minus",
    "augmentation",
    "apply_lattice_map",
    "random_element",
    "nonzerodivisor_trials",
    "relative_primality_trials",
]

Carrier = Union[int, QuotientLattice]


class CarrierMismatch(ValueError):
    pass


class ZeroWeight(ValueError):
    pass


def _rank(carrier: Carrier) -> int:
    return carrier if isinstance(carrier, int) else carrier.ambient_rank


class GroupRingElem:
    __slots__ = ("carrier", "_terms", "_hash")

    def __init__(self, carrier: Carrier, terms: Mapping[Sequence[int], int] | Iterable = ()):
        self.carrier = carrier
        n = _rank(carrier)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, ...], int] = {}
        for exp, c in items:
            exp = tuple(int(x) for x in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not have rank {n}")
            if not isinstance(carrier, int):
                exp = carrier.normal_form(exp)
            acc[exp] = acc.get(exp, 0) + int(c)
        self._terms = {e: c for e, c in sorted(acc.items()) if c}
        self._hash = None

    @property
    def rank(self) -> int:
        return _rank(self.carrier)

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[tuple[int, ...]]:
        return list(self._terms)

    def coefficient(self, exp: Sequence[int]) -> int:
        exp = tuple(exp)
        if not isinstance(self.carrier, int):
            exp = self.carrier.normal_form(exp)
        return self._terms.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def _check(self, other: "GroupRingElem") -> None:
        if self.carrier != other.carrier:
            raise CarrierMismatch(f"{self.carrier!r} vs {other.carrier!r}")

    def _coerce(self, other) -> "GroupRingElem":
        if isinstance(other, GroupRingElem):
            self._check(other)
            return other
        if isinstance(other, int):
            return GroupRingElem(self.carrier, {(0,) * self.rank: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return GroupRingElem(self.carrier, acc)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElem(self.carrier, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scalar_mul(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[tuple[int, ...], int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return GroupRingElem(self.carrier, acc)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scalar_mul(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are only defined for monomials; use shift()")
        out = one(self.carrier)
        for _ in range(k):
            out = out * self
        return out

    def scalar_mul(self, c: int) -> "GroupRingElem":
        return GroupRingElem(self.carrier, {e: c * v for e, v in self._terms.items()})

    def shift(self, v: Sequence[int]) -> "GroupRingElem":
        """Multiply by the unit ``e^v``."""
        return GroupRingElem(
            self.carrier, {tuple(a + b for a, b in zip(e, v)): c for e, c in self._terms.items()}
        )

    def __eq__(self, other):
        if isinstance(other, int):
            other = GroupRingElem(self.carrier, {(0,) * self.rank: other})
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return self.carrier == other.carrier and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, tuple(self._terms.items())))
        return self._hash

    def render(self, names: Sequence[str] | None = None) -> str:
        """Canonical text form, terms in descending lexicographic exponent order.

        >>> euler_class([(1, 0), (0, 1)]).render()
        '1 - x2^-1 - x1^-1 + x1^-1*x2^-1'
        """
        if not self._terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.rank)]
        pieces = []
        for exp in sorted(self._terms, reverse=True):
            c = self._terms[exp]
            mono = "*".join(
                n if p == 1 else f"{n}^{p}" for n, p in zip(names, exp) if p != 0
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(("+ " if c > 0 else "- ") + body)
        return " ".join(pieces)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"GroupRingElem({self.render()!r}, rank={self.rank})"


def monomial(exp: Sequence[int], coeff: int = 1, carrier: Carrier | None = None) -> GroupRingElem:
    return GroupRingElem(len(exp) if carrier is None else carrier, {tuple(exp): coeff})


def one(carrier: Carrier) -> GroupRingElem:
    return GroupRingElem(carrier, {(0,) * _rank(carrier): 1})


def zero(carrier: Carrier) -> GroupRingElem:
    return GroupRingElem(carrier, {})


def euler_class(weights: Sequence[Sequence[int]], rank: int | None = None) -> GroupRingElem:
    """``prod_i (1 - e^{-w_i})``; the empty product is ``1``."""
    weights = [tuple(int(x) for x in w) for w in weights]
    if rank is None:
        if not weights:
            raise ValueError("rank is required for an empty weight list")
        rank = len(weights[0])
    out = one(rank)
    for w in weights:
        if not any(w):
            raise ZeroWeight("zero weight: 1 - e^0 = 0 is a zero divisor")
        out = out * GroupRingElem(rank, {(0,) * rank: 1, tuple(-x for x in w): -1})
    return out


def divisible_by_one_minus(f: GroupRingElem, alpha: Sequence[int]) -> bool:
    """Whether ``1 - e^{-alpha}`` divides ``f`` in ``Z[Z^n]``.

    The kernel of ``Z[L] -> Z[L / Z alpha]`` is the principal ideal
    generated by ``1 - e^{alpha}``, so it suffices to check that the
    coefficients of every coset sum to zero.  Works for non-primitive
    ``alpha``, where the quotient lattice has torsion.
    """
    alpha = tuple(int(x) for x in alpha)
    if not any(alpha):
        raise ZeroWeight("divisibility by 1 - e^0 = 0 is undefined")
    if not isinstance(f.carrier, int):
        raise ValueError("divisibility is tested on a free carrier")
    if len(alpha) != f.rank:
        raise ValueError("weight rank does not match the carrier")
    Q = quotient_lattice(f.rank, [alpha])
    return GroupRingElem(Q, f.items()).is_zero()


def augmentation(f: GroupRingElem) -> int:
    return sum(c for _, c in f.items())


def apply_lattice_map(f: GroupRingElem, h: IntMatrix) -> GroupRingElem:
    """Ring map induced by the exponent map ``v -> h v``."""
    if h.cols != f.rank:
        raise ValueError(f"map with {h.cols} columns cannot act on rank {f.rank}")
    acc: dict[tuple[int, ...], int] = {}
    for e, c in f.items():
        t = h @ e
        acc[t] = acc.get(t, 0) + c
    return GroupRingElem(h.rows, acc)


def random_element(
    rng: random.Random, rank: int, max_terms: int = 4, exp_bound: int = 3, coeff_bound: int = 5
) -> GroupRingElem:
    """A random nonzero element, for property suites."""
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            e = tuple(rng.randint(-exp_bound, exp_bound) for _ in range(rank))
            terms[e] = rng.randint(-coeff_bound, coeff_bound)
        f = GroupRingElem(rank, terms)
        if f:
            return f


def _random_weight(rng: random.Random, rank: int, bound: int = 3) -> tuple[int, ...]:
    while True:
        w = tuple(rng.randint(-bound, bound) for _ in range(rank))
        if any(w):
            return w


def nonzerodivisor_trials(trials: int = 100, seed: int = 0, rank: int = 2) -> list[tuple]:
    """Failures of ``(1 - e^{-a}) f != 0`` over random ``f != 0``, ``a != 0``.

    An empty list means every trial passed.
    """
    rng = random.Random(seed)
    bad = []
    for _ in range(trials):
        f = random_element(rng, rank)
        a = _random_weight(rng, rank)
        if (euler_class([a]) * f).is_zero():
            bad.append((f, a))
    return bad


def relative_primality_trials(trials: int = 100, seed: int = 0, rank: int = 2) -> tuple[list[tuple], int]:
    """Check that ``e(s) | f e(t)`` implies ``e(s) | f`` for independent ``s, t``.

    Half of the ``f`` are built as multiples of ``e(s)`` so the premise is
    exercised in both directions.  Returns (failures, premise_true_count).
    """
    rng = random.Random(seed)
    bad, hits = [], 0
    for i in range(trials):
        while True:
            s, t = _random_weight(rng, rank), _random_weight(rng, rank)
            if _independent(s, t):
                break
        g = random_element(rng, rank)
        f = euler_class([s]) * g if i % 2 == 0 else g
        premise = divisible_by_one_minus(f * euler_class([t]), s)
        hits += premise
        if premise and not divisible_by_one_minus(f, s):
            bad.append((f, s, t))
        if not premise and divisible_by_one_minus(f, s):
            bad.append((f, s, t))
    return bad, hits


def _independent(s, t) -> bool:
    from .lattice import rank as _rk

    return _rk(IntMatrix([s, t])) == 2
