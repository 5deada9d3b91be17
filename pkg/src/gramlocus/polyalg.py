"""Exact sparse polynomial arithmetic over the integers.

Variables are tensor-entry offsets (0 .. 2^n - 1); a monomial is a sorted
tuple of (variable, exponent) pairs. Everything here stays at total degree
at most 4, so the representation is deliberately small and direct.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

# Construction-bug tripwire: legitimate certificate/target coefficients stay
# tiny, so anything approaching this bound means the assembly went wrong.
COEFF_LIMIT = 1 << 31

Monomial = tuple[tuple[int, int], ...]


def mono_from_vars(variables: Iterable[int]) -> Monomial:
    """Monomial from a list of variable ids with multiplicity."""
    counts: dict[int, int] = {}
    for v in variables:
        counts[v] = counts.get(v, 0) + 1
    return tuple(sorted(counts.items()))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    counts = dict(a)
    for v, e in b:
        counts[v] = counts.get(v, 0) + e
    return tuple(sorted(counts.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_eval(m: Monomial, x: Sequence[float]) -> float:
    val = 1.0
    for v, e in m:
        val *= float(x[v]) ** e
    return val


class IntPolynomial:
    """Sparse integer-coefficient polynomial keyed by canonical monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean: dict[Monomial, int] = {}
        for mono, coeff in (terms or {}).items():
            if coeff == 0:
                continue
            if abs(coeff) >= COEFF_LIMIT:
                raise OverflowError(f"coefficient {coeff} exceeds limit; construction bug")
            clean[mono] = coeff
        self.terms = clean

    @classmethod
    def zero(cls) -> "IntPolynomial":
        return cls()

    @classmethod
    def variable(cls, var: int) -> "IntPolynomial":
        return cls({((var, 1),): 1})

    def _combined(self, other: "IntPolynomial", sign: int) -> "IntPolynomial":
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            out[mono] = out.get(mono, 0) + sign * coeff
        return IntPolynomial(out)

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self._combined(other, 1)

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self._combined(other, -1)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial({m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "IntPolynomial | int") -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial({m: c * other for m, c in self.terms.items()})
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = mono_mul(m1, m2)
                out[mono] = out.get(mono, 0) + c1 * c2
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntPolynomial) and self.terms == other.terms

    def __hash__(self):  # pragma: no cover - polynomials are not dict keys here
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"IntPolynomial({len(self.terms)} terms)"

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, x: Sequence[float]) -> float:
        return float(sum(c * mono_eval(m, x) for m, c in self.terms.items()))


def poly_add(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    return p + q


def poly_sub(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    return p - q


def poly_scale(p: IntPolynomial, c: int) -> IntPolynomial:
    return p * c


def poly_equal(p: IntPolynomial, q: IntPolynomial) -> bool:
    """Exact equality of the canonical term maps."""
    return p.terms == q.terms


class QuadraticForm:
    """Signed sum of degree-2 monomials a_i * a_j, the unit squared in a certificate.

    Terms are kept sorted with i <= j; signs are +1 or -1.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[int, int, int]]):
        canon = []
        for sign, i, j in terms:
            if sign not in (1, -1):
                raise ValueError(f"term sign must be +-1, got {sign}")
            canon.append((sign, min(i, j), max(i, j)))
        canon.sort(key=lambda t: (t[1], t[2]))
        pairs = [(i, j) for _, i, j in canon]
        if len(set(pairs)) != len(pairs):
            raise ValueError("duplicate monomial in quadratic form")
        self.terms = tuple(canon)

    def canonical(self) -> "QuadraticForm":
        """Orient so the lexicographically smallest monomial carries sign -1."""
        if self.terms and self.terms[0][0] > 0:
            return self.negate()
        return self

    def negate(self) -> "QuadraticForm":
        return QuadraticForm((-s, i, j) for s, i, j in self.terms)

    def to_polynomial(self) -> IntPolynomial:
        out: dict[Monomial, int] = {}
        for sign, i, j in self.terms:
            mono = mono_from_vars((i, j))
            out[mono] = out.get(mono, 0) + sign
        return IntPolynomial(out)

    def square(self) -> IntPolynomial:
        out: dict[Monomial, int] = {}
        terms = self.terms
        for a in range(len(terms)):
            sa, ia, ja = terms[a]
            for b in range(a, len(terms)):
                sb, ib, jb = terms[b]
                mono = mono_from_vars((ia, ja, ib, jb))
                coeff = sa * sb if a == b else 2 * sa * sb
                out[mono] = out.get(mono, 0) + coeff
        return IntPolynomial(out)

    def evaluate(self, x: Sequence[float] | np.ndarray) -> float:
        return float(sum(s * x[i] * x[j] for s, i, j in self.terms))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QuadraticForm) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        bits = "".join(f"{'+' if s > 0 else '-'}a{i}a{j}" for s, i, j in self.terms)
        return f"QuadraticForm({bits})"


def square_form(f: QuadraticForm) -> IntPolynomial:
    """Exact expansion of f**2; the empty form squares to the zero polynomial."""
    return f.square()
