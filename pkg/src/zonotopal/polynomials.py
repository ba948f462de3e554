"""Exact sparse multivariate polynomials and the differential pairing.

A polynomial is a finitely supported map from exponent tuples to rational
coefficients.  This module provides the products of linear and affine forms,
application of a polynomial as a constant-coefficient differential operator,
the apolarity pairing ``(p, q) -> p(D)q(0)``, evaluation, graded components,
and the globally fixed graded-lexicographic monomial order.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

from .errors import ZonotopalError
from .linalg import Vector, scalar

Exponent = tuple[int, ...]


def graded_key(exponent: Exponent) -> tuple:
    """Sort key of the global monomial order: total degree, then lex.

    Within one degree the lexicographically larger exponent comes first, so
    for two variables the order is ``1, t1, t2, t1^2, t1*t2, t2^2, ...``.
    """
    return (sum(exponent), tuple(-e for e in exponent))


@lru_cache(maxsize=None)
def monomials_upto(nvars: int, degree: int) -> tuple[Exponent, ...]:
    """All exponents of total degree at most ``degree`` in graded order."""
    if degree < 0:
        return ()

    def compositions(k: int, parts: int):
        if parts == 0:
            if k == 0:
                yield ()
            return
        for head in range(k + 1):
            for tail in compositions(k - head, parts - 1):
                yield (head,) + tail

    exps = [e for d in range(degree + 1) for e in compositions(d, nvars)]
    return tuple(sorted(exps, key=graded_key))


class Poly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Fraction] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                exp = tuple(exp)
                if len(exp) != nvars or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent {exp} for {nvars} variables")
                c = scalar(coeff)
                if c != 0:
                    clean[exp] = c
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "Poly":
        return cls(nvars, {(0,) * nvars: scalar(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Poly":
        exp = [0] * nvars
        exp[index] = 1
        return cls(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, exponent: Exponent, coeff=1) -> "Poly":
        return cls(nvars, {tuple(exponent): scalar(coeff)})

    def items(self):
        return self._terms.items()

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    @property
    def min_degree(self) -> int:
        if not self._terms:
            return -1
        return min(sum(e) for e in self._terms)

    @property
    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self._terms)
        for exp, coeff in other._terms.items():
            out[exp] = out.get(exp, Fraction(0)) + coeff
        return Poly(self.nvars, out)

    def __sub__(self, other: "Poly") -> "Poly":
        out = dict(self._terms)
        for exp, coeff in other._terms.items():
            out[exp] = out.get(exp, Fraction(0)) - coeff
        return Poly(self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, Poly):
            out: dict[Exponent, Fraction] = {}
            for ea, ca in self._terms.items():
                for eb, cb in other._terms.items():
                    exp = tuple(a + b for a, b in zip(ea, eb))
                    out[exp] = out.get(exp, Fraction(0)) + ca * cb
            return Poly(self.nvars, out)
        c = scalar(other)
        return Poly(self.nvars, {e: c * v for e, v in self._terms.items()})

    __rmul__ = __mul__

    def evaluate(self, point: Sequence) -> Fraction:
        values = [scalar(v) for v in point]
        total = Fraction(0)
        for exp, coeff in self._terms.items():
            term = coeff
            for e, v in zip(exp, values):
                if e:
                    term *= v**e
            total += term
        return total

    def homogeneous_component(self, degree: int) -> "Poly":
        return Poly(
            self.nvars, {e: c for e, c in self._terms.items() if sum(e) == degree}
        )

    def least_term(self) -> "Poly":
        """Lowest-degree nonzero homogeneous component."""
        if not self._terms:
            raise ZonotopalError("least term of the zero polynomial is undefined")
        return self.homogeneous_component(self.min_degree)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)})"


def linear_form(direction: Sequence) -> Poly:
    """The form ``t -> x . t`` for the given direction ``x``."""
    vec = [scalar(v) for v in direction]
    n = len(vec)
    return Poly(n, {tuple(int(i == j) for j in range(n)): vec[i] for i in range(n)})


def affine_form(direction: Sequence, offset) -> Poly:
    """The affine form ``t -> x . t - offset`` whose zero set is a hyperplane."""
    n = len(tuple(direction))
    return linear_form(direction) - Poly.constant(n, offset)


def product(polys: Iterable[Poly], nvars: int) -> Poly:
    """Product of the given polynomials; the empty product is 1."""
    out = Poly.constant(nvars, 1)
    for p in polys:
        out = out * p
    return out


def forms_product(directions: Iterable[Sequence], nvars: int, offsets=None) -> Poly:
    """Product of linear forms, or of affine forms when offsets are given."""
    if offsets is None:
        return product((linear_form(d) for d in directions), nvars)
    return product(
        (affine_form(d, o) for d, o in zip(directions, offsets, strict=True)), nvars
    )


def apply_diff(p: Poly, q: Poly) -> Poly:
    """Apply ``p`` as a differential operator to ``q``: ``p(d/dt) q``."""
    if p.nvars != q.nvars:
        raise ValueError("variable count mismatch")
    out: dict[Exponent, Fraction] = {}
    for alpha, ca in p.items():
        for beta, cb in q.items():
            if any(b < a for a, b in zip(alpha, beta)):
                continue
            coeff = ca * cb
            for a, b in zip(alpha, beta):
                for step in range(a):
                    coeff *= b - step
            exp = tuple(b - a for a, b in zip(alpha, beta))
            out[exp] = out.get(exp, Fraction(0)) + coeff
    return Poly(p.nvars, out)


def pairing(p: Poly, q: Poly) -> Fraction:
    """The apolarity pairing ``p(D) q`` evaluated at the origin.

    On monomials this is diagonal: ``<t^a, t^b> = a! [a == b]``, so
    homogeneous components of different degrees are orthogonal.
    """
    if p.nvars != q.nvars:
        raise ValueError("variable count mismatch")
    total = Fraction(0)
    for exp, ca in p.items():
        cb = q.coefficient(exp)
        if cb:
            weight = 1
            for e in exp:
                weight *= factorial(e)
            total += ca * cb * weight
    return total


def coefficient_vector(p: Poly, monomials: Sequence[Exponent]) -> Vector:
    """Dense coefficient row of ``p`` over the given monomial list."""
    if p.degree > max((sum(m) for m in monomials), default=-1):
        raise ValueError("monomial list does not cover the polynomial degree")
    return tuple(p.coefficient(m) for m in monomials)


def poly_from_coefficients(
    nvars: int, monomials: Sequence[Exponent], coeffs: Sequence
) -> Poly:
    return Poly(nvars, dict(zip(monomials, coeffs, strict=True)))


def _format_monomial(exponent: Exponent) -> str:
    parts = []
    for i, e in enumerate(exponent):
        if e == 1:
            parts.append(f"t{i + 1}")
        elif e > 1:
            parts.append(f"t{i + 1}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    """Canonical text rendering: terms in graded order, exact coefficients."""
    if p.is_zero:
        return "0"
    pieces = []
    for exp in sorted(p._terms, key=graded_key):
        coeff = p._terms[exp]
        mono = _format_monomial(exp)
        mag = -coeff if coeff < 0 else coeff
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)
