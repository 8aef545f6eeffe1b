"""Graded Fock modules over a two-oscillator algebra.

A basis monomial is a product of creation modes a_{-m}, b_{-n} applied
to a vacuum |l1,l2> carrying the zero-mode eigenvalues.  l1 ranges over
half-integers and is stored doubled so that basis keys stay hashable
integers; grading eigenvalues have denominator dividing 8 and are kept
as exact Fractions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .scalars import UScalar, qint


def half(x):
    """Coerce to a Fraction with denominator 1 or 2."""
    x = Fraction(x)
    if x.denominator not in (1, 2):
        raise ValueError(f"{x} is not a half-integer")
    return x


@dataclass(frozen=True)
class BasisMonomial:
    """a-creation indices, b-creation indices (ascending tuples) over a
    vacuum with labels (l1, l2)."""

    a_parts: tuple
    b_parts: tuple
    l1x2: int
    l2: int

    @property
    def l1(self):
        return Fraction(self.l1x2, 2)

    @property
    def degree(self):
        return sum(self.a_parts) + sum(self.b_parts)

    def dbar(self):
        """Grading eigenvalue: -sum(m) - sum(n) + (l1^2 - l2^2 + l2)/2."""
        l1 = self.l1
        return -self.degree + Fraction(l1 * l1 - self.l2 * self.l2 + self.l2, 2)

    def __str__(self):
        osc = "".join(f"a[-{m}]" for m in reversed(self.a_parts))
        osc += "".join(f"b[-{n}]" for n in reversed(self.b_parts))
        l1 = self.l1
        l1s = str(l1.numerator) if l1.denominator == 1 else f"{l1.numerator}/2"
        return f"{osc}|{l1s},{self.l2}>"


def vacuum(l1, l2):
    return BasisMonomial((), (), int(2 * half(l1)), l2)


_MON_RE = re.compile(r"^((?:[ab]\[-\d+\])*)\|(-?\d+(?:/2)?),(-?\d+)>$")


def parse_monomial(text):
    m = _MON_RE.match(text.replace(" ", ""))
    if not m:
        raise ValueError(f"cannot parse basis monomial {text!r}")
    a_parts, b_parts = [], []
    for kind, idx in re.findall(r"([ab])\[-(\d+)\]", m.group(1)):
        (a_parts if kind == "a" else b_parts).append(int(idx))
    return BasisMonomial(tuple(sorted(a_parts)), tuple(sorted(b_parts)),
                         int(2 * Fraction(m.group(2))), int(m.group(3)))


@dataclass(frozen=True)
class Weight:
    """An affine weight c0*Lambda0 + c1*Lambda1 + cd*delta."""

    c0: Fraction
    c1: Fraction
    cd: Fraction

    @property
    def level(self):
        return self.c0 + self.c1

    def __str__(self):
        return f"({self.c0})L0 + ({self.c1})L1 + ({self.cd})d"


class FockVector:
    """Finite linear combination of basis monomials with UScalar weights."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for m, c in terms.items():
                if not c.is_zero():
                    self.terms[m] = c

    @classmethod
    def basis(cls, monomial, coeff=None):
        v = cls()
        v.terms[monomial] = coeff if coeff is not None else UScalar.from_int(1)
        return v

    def is_zero(self):
        return not self.terms

    def add_term(self, monomial, coeff):
        s = self.terms.get(monomial)
        s = coeff if s is None else s + coeff
        if s.is_zero():
            self.terms.pop(monomial, None)
        else:
            self.terms[monomial] = s

    def __add__(self, other):
        out = FockVector(dict(self.terms))
        for m, c in other.terms.items():
            out.add_term(m, c)
        return out

    def __sub__(self, other):
        out = FockVector(dict(self.terms))
        for m, c in other.terms.items():
            out.add_term(m, -c)
        return out

    def __neg__(self):
        return FockVector({m: -c for m, c in self.terms.items()})

    def scale(self, coeff):
        if coeff.is_zero():
            return FockVector()
        return FockVector({m: coeff * c for m, c in self.terms.items()})

    def coeff(self, monomial):
        from .scalars import ZERO
        return self.terms.get(monomial, ZERO)

    def max_degree(self):
        return max((m.degree for m in self.terms), default=0)

    def __eq__(self, other):
        return isinstance(other, FockVector) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{m}" for m, c in sorted(
            self.terms.items(), key=lambda kv: str(kv[0])))

    def to_json_dict(self):
        return {str(m): str(c) for m, c in sorted(
            self.terms.items(), key=lambda kv: str(kv[0]))}


ZERO_VECTOR = FockVector()


@lru_cache(maxsize=None)
def _partitions(d):
    """All partitions of d as ascending tuples."""
    if d == 0:
        return ((),)
    out = []

    def rec(remaining, maxpart, acc):
        if remaining == 0:
            out.append(tuple(reversed(acc)))
            return
        for p in range(min(remaining, maxpart), 0, -1):
            acc.append(p)
            rec(remaining - p, p, acc)
            acc.pop()

    rec(d, d, [])
    return tuple(out)


@lru_cache(maxsize=None)
def _basis_cache(l1x2, l2, degree):
    out = []
    for da in range(degree + 1):
        for pa in _partitions(da):
            for pb in _partitions(degree - da):
                out.append(BasisMonomial(pa, pb, l1x2, l2))
    return tuple(out)


def enumerate_basis(l1, l2, degree):
    """All monomials of exact oscillator degree `degree` over |l1,l2>."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    return list(_basis_cache(int(2 * half(l1)), l2, degree))


_BRACKET_CACHE = {}


def oscillator_bracket(kind, n):
    """[a_n, a_{-n}] = [2n][-n/2]/n and [b_n, b_{-n}] = n, for n > 0."""
    key = (kind, n)
    out = _BRACKET_CACHE.get(key)
    if out is None:
        if kind == "a":
            out = qint(2 * n) * qint(Fraction(-n, 2)) / UScalar.from_int(n)
        elif kind == "b":
            out = UScalar.from_int(n)
        else:
            raise ValueError(f"unknown oscillator family {kind!r}")
        _BRACKET_CACHE[key] = out
    return out


def _with_parts(m, kind, parts):
    if kind == "a":
        return BasisMonomial(parts, m.b_parts, m.l1x2, m.l2)
    return BasisMonomial(m.a_parts, parts, m.l1x2, m.l2)


def create(kind, k, monomial):
    """Multiply by the creation mode a_{-k} or b_{-k} (k > 0)."""
    parts = m_parts = monomial.a_parts if kind == "a" else monomial.b_parts
    parts = tuple(sorted(m_parts + (k,)))
    return _with_parts(monomial, kind, parts)


def annihilate(kind, k, monomial):
    """Apply a_k or b_k (k > 0); returns (coeff, monomial) or None."""
    parts = monomial.a_parts if kind == "a" else monomial.b_parts
    if k not in parts:
        return None
    mult = parts.count(k)
    i = parts.index(k)
    rest = parts[:i] + parts[i + 1:]
    coeff = oscillator_bracket(kind, k) * UScalar.from_int(mult)
    return coeff, _with_parts(monomial, kind, rest)


def apply_oscillator(kind, n, v):
    """Linear action of a_n or b_n (n != 0) on a Fock vector."""
    if n == 0:
        raise ValueError("zero modes are diagonal; use weight_of")
    out = FockVector()
    for m, c in v.terms.items():
        if n < 0:
            out.add_term(create(kind, -n, m), c)
        else:
            hit = annihilate(kind, n, m)
            if hit is not None:
                bc, mm = hit
                out.add_term(mm, c * bc)
    return out


def apply_shift(kind, direction, v):
    """The vacuum-label shift e^{P_a} or e^{P_b} (direction = +-1)."""
    if direction not in (1, -1):
        raise ValueError("direction must be +-1")
    out = FockVector()
    for m, c in v.terms.items():
        if kind == "a":
            mm = BasisMonomial(m.a_parts, m.b_parts, m.l1x2 + 2 * direction, m.l2)
        elif kind == "b":
            mm = BasisMonomial(m.a_parts, m.b_parts, m.l1x2, m.l2 + direction)
        else:
            raise ValueError(f"unknown shift family {kind!r}")
        out.add_term(mm, c)
    return out


def dbar_of(m):
    return m.dbar()


def weight_of(m):
    """Affine weight of a basis monomial: the delta-coefficient is the
    grading eigenvalue and the level is -1/2."""
    l1 = m.l1
    return Weight(Fraction(-1, 2) - l1, l1, m.dbar())


def extract_vacuum(v, l1, l2):
    """Coefficient of the degree-0 monomial |l1,l2> in v."""
    return v.coeff(vacuum(l1, l2))
