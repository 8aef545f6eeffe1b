"""Exact arithmetic in the coefficient field Q(u), where u plays the role
of a fourth root of q.

Every scalar appearing in the engine lives here: q itself is u**4, the
half powers q**(1/2), q**(1/4) are u**2 and u, and quantum integers at
half-integer arguments become honest rational functions of u.  A scalar
is stored as a reduced ratio of integer-coefficient Laurent polynomials
in u, normalized eagerly so that equality (in particular equality to
zero, the hottest predicate of the verification engine) is a structural
comparison.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd as _igcd

# Laurent polynomials are dicts {exponent: nonzero int coefficient}.


def _lp_add(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _lp_neg(a):
    return {e: -c for e, c in a.items()}


def _lp_mul(a, b):
    if not a or not b:
        return {}
    if len(a) == 1:
        (ea, ca), = a.items()
        return {ea + e: ca * c for e, c in b.items()}
    if len(b) == 1:
        (eb, cb), = b.items()
        return {e + eb: c * cb for e, c in a.items()}
    # Sparse terms accumulated into a dense list: no hashing in the
    # inner loop and no rehashing of cancelled entries.
    amin = min(a)
    bmin = min(b)
    C = [0] * (max(a) - amin + max(b) - bmin + 1)
    bitems = [(e - bmin, c) for e, c in b.items()]
    for ea, ca in a.items():
        ea -= amin
        for eb, cb in bitems:
            C[ea + eb] += ca * cb
    off = amin + bmin
    return {i + off: c for i, c in enumerate(C) if c}


def _lp_shift(a, k):
    return {e + k: c for e, c in a.items()}


def _lp_content(a):
    g = 0
    for c in a.values():
        g = _igcd(g, abs(c))
        if g == 1:
            return 1
    return g or 1


def _to_list(a):
    out = [0] * (max(a) + 1)
    for e, c in a.items():
        out[e] = c
    return out


def _primitive_list(coeffs):
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        return coeffs
    g = 0
    for c in coeffs:
        g = _igcd(g, abs(c))
        if g == 1:
            break
    if coeffs[-1] < 0:
        g = -g
    if g != 1:
        coeffs = [c // g for c in coeffs]
    return coeffs


_GCD_PRIME = (1 << 61) - 1


def _list_divisible(Nin, D):
    """Whether integer polynomial D (list, nonzero lead) divides Nin exactly."""
    N = list(Nin)
    dd = len(D) - 1
    lcd = D[-1]
    while True:
        while N and N[-1] == 0:
            N.pop()
        if len(N) - 1 < dd:
            break
        f, rem = divmod(N[-1], lcd)
        if rem:
            return False
        off = len(N) - 1 - dd
        for i in range(dd + 1):
            N[off + i] -= f * D[i]
    return not any(N)


def _modp_gcd(A, B):
    """Single-prime modular gcd of primitive integer polynomials (dense
    lists), verified by exact trial division; None when the prime is
    unusable or the lifted candidate fails verification.

    The degree of the mod-p gcd upper-bounds the degree of the true gcd,
    so a constant mod-p gcd proves coprimality outright, and a verified
    candidate of that degree must be the gcd itself."""
    p = _GCD_PRIME
    a = [c % p for c in A]
    b = [c % p for c in B]
    if a[-1] == 0 or b[-1] == 0:
        return None
    if len(a) < len(b):
        a, b = b, a
    while True:
        # Pseudo-division mod p (scale instead of invert the lead).
        lcb = b[-1]
        r = a
        db = len(b) - 1
        while len(r) - 1 >= db:
            c = r.pop()
            if c:
                off = len(r) - db
                for i in range(off):
                    r[i] = r[i] * lcb % p
                for i in range(db):
                    r[off + i] = (r[off + i] * lcb - c * b[i]) % p
            while r and r[-1] == 0:
                r.pop()
        if not r:
            break
        a, b = b, r
    if len(b) == 1:
        return {0: 1}
    linv = pow(b[-1], p - 2, p)
    scale = (_igcd(abs(A[-1]), abs(B[-1])) % p) * linv % p
    half = p >> 1
    G = []
    for x in b:
        v = x * scale % p
        if v > half:
            v -= p
        G.append(v)
    G = _primitive_list(G)
    if len(G) <= 1:
        return None
    if _list_divisible(A, G) and _list_divisible(B, G):
        return {e: v for e, v in enumerate(G) if v}
    return None


def _stride(a, s=0):
    """Gcd of all exponents of a (and an optional prior stride)."""
    for e in a:
        s = _igcd(s, e)
        if s == 1:
            return 1
    return s


def _poly_gcd(a, b):
    """Primitive gcd of two integer polynomials with nonzero constant
    terms, by a primitive pseudo-remainder sequence in dense integer
    lists, with a verified single-prime modular fast path.

    When both operands lie in Z[u^s] their gcd does too (a gcd of
    u -> zeta*u invariant polynomials with nonzero constant term is
    itself invariant), so exponents are compressed by the common stride
    first; the coefficient field here makes stride 4 the norm."""
    s = _stride(b, _stride(a))
    if s > 1:
        a = {e // s: c for e, c in a.items()}
        b = {e // s: c for e, c in b.items()}
    A = _primitive_list(_to_list(a))
    B = _primitive_list(_to_list(b))
    if len(A) < len(B):
        A, B = B, A
    if len(B) > 24:
        out = _modp_gcd(A, B)
        if out is not None:
            if s > 1:
                return {e * s: c for e, c in out.items()}
            return out
    while B:
        if len(B) == 1:
            A = [1]
            break
        lcb = B[-1]
        db = len(B) - 1
        R = list(A)
        while len(R) - 1 >= db:
            lcr = R.pop()
            if lcr:
                shift = len(R) - db
                R = [c * lcb for c in R]
                for i in range(db):
                    R[shift + i] -= B[i] * lcr
            while R and R[-1] == 0:
                R.pop()
        A, B = B, _primitive_list(R)
    if s > 1:
        return {e * s: c for e, c in enumerate(A) if c}
    return {e: c for e, c in enumerate(A) if c}


def _poly_exact_div(num, den):
    """Exact division of integer polynomials, result integer polynomial.

    Valid whenever den is primitive (Gauss: the cofactor of an integer
    polynomial by a primitive factor is integral)."""
    s = _stride(den, _stride(num))
    if s > 1:
        # The exact quotient of two polynomials in Z[u^s] is in Z[u^s].
        num = {e // s: c for e, c in num.items()}
        den = {e // s: c for e, c in den.items()}
        return {e * s: c
                for e, c in _poly_exact_div(num, den).items()}
    N = _to_list(num)
    D = _to_list(den)
    dd = len(D) - 1
    lcd = D[-1]
    quo = {}
    while len(N) - 1 >= dd and any(N):
        while N and N[-1] == 0:
            N.pop()
        if len(N) - 1 < dd:
            break
        f, rem = divmod(N[-1], lcd)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        shift = len(N) - 1 - dd
        quo[shift] = f
        for i in range(dd + 1):
            N[shift + i] -= f * D[i]
    if any(N):
        raise ArithmeticError("inexact polynomial division")
    return quo


class SpecializationError(ArithmeticError):
    """Raised when a scalar is evaluated at a pole of its denominator."""


class UScalar:
    """An element of Q(u) as a canonical ratio of Laurent polynomials."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _normalized=False):
        if den is None:
            den = {0: 1}
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_int(n):
        return _small_int(n)

    @staticmethod
    def from_fraction(fr):
        fr = Fraction(fr)
        return UScalar({0: fr.numerator} if fr.numerator else {},
                       {0: fr.denominator}, _normalized=True)

    @staticmethod
    def u_pow(m):
        """The monomial u**m."""
        return UScalar({m: 1}, {0: 1}, _normalized=True)

    @staticmethod
    def q_pow(r):
        """q**r for r with 4r integral, i.e. u**(4r)."""
        r4 = Fraction(r) * 4
        if r4.denominator != 1:
            raise ValueError(f"q-power {r} does not lie in Q(q^(1/4))")
        return UScalar.u_pow(int(r4))

    # -- predicates ---------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.num == {0: 1} and self.den == {0: 1}

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if not self.num:
            return other
        if not other.num:
            return self
        n1, d1 = self.num, self.den
        n2, d2 = other.num, other.den
        if d1 == d2:
            num = _lp_add(n1, n2)
            if not num:
                return ZERO
            num, den = _cancel(num, d1)
            return UScalar(*_finalize(num, den), _normalized=True)
        # Both operands are reduced, so any common factor of the result
        # divides the gcd of the denominators; cancel only against that.
        g = None
        if len(d1) > 1 and len(d2) > 1:
            g = _poly_gcd(d1, d2)
            if max(g) == 0:
                g = None
        if g is None:
            num = _lp_add(_lp_mul(n1, d2), _lp_mul(n2, d1))
            if not num:
                return ZERO
            return UScalar(*_finalize(num, _lp_mul(d1, d2)), _normalized=True)
        d1g = _poly_exact_div(d1, g)
        d2g = _poly_exact_div(d2, g)
        num = _lp_add(_lp_mul(n1, d2g), _lp_mul(n2, d1g))
        if not num:
            return ZERO
        den = _lp_mul(d1, d2g)
        nmin = min(num)
        n = _lp_shift(num, -nmin)
        g2 = _poly_gcd(n, g)
        if max(g2) > 0:
            n = _poly_exact_div(n, g2)
            den = _poly_exact_div(den, g2)
            num = _lp_shift(n, nmin)
        return UScalar(*_finalize(num, den), _normalized=True)

    __radd__ = __add__

    def __neg__(self):
        return UScalar(_lp_neg(self.num), dict(self.den), _normalized=True)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if not self.num or not other.num:
            return ZERO
        if self.is_one():
            return other
        if other.is_one():
            return self
        # Cross-cancel each numerator against the opposite denominator;
        # the product of the reduced pieces is then already in lowest terms.
        n1, d2 = _cancel(self.num, other.den)
        n2, d1 = _cancel(other.num, self.den)
        num = _lp_mul(n1, n2)
        den = _lp_mul(d1, d2)
        return UScalar(*_finalize(num, den), _normalized=True)

    __rmul__ = __mul__

    def inv(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero scalar")
        return UScalar(dict(self.den), dict(self.num))

    def __truediv__(self, other):
        other = _coerce(other)
        if not other.num:
            raise ZeroDivisionError("division by zero scalar")
        return self * other.inv()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inv()

    def __pow__(self, n):
        if n == 0:
            return ONE
        if n < 0:
            return self.inv() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    # -- comparison / hashing -----------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = _small_int(other)
        if not isinstance(other, UScalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(sorted(self.num.items())),
                               tuple(sorted(self.den.items()))))
        return self._hash

    # -- evaluation ---------------------------------------------------

    def specialize(self, u0):
        """Exact evaluation at a nonzero rational point u0."""
        u0 = Fraction(u0)
        if u0 == 0:
            raise SpecializationError("u0 must be nonzero")
        den = _lp_eval(self.den, u0)
        if den == 0:
            raise SpecializationError(f"pole at u0 = {u0}")
        return _lp_eval(self.num, u0) / den

    # -- rendering / parsing ------------------------------------------

    def __str__(self):
        if not self.num:
            return "0"
        ns = _lp_str(self.num)
        if self.den == {0: 1}:
            return ns
        ds = _lp_str(self.den)
        if len(self.num) > 1:
            ns = f"({ns})"
        if len(self.den) > 1:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    __repr__ = __str__

    @staticmethod
    def parse(text):
        return _parse_scalar(text)


def _lp_eval(a, u0):
    return sum(Fraction(c) * u0 ** e for e, c in a.items())


def _cancel(num, den):
    """Divide out the polynomial gcd of a Laurent numerator and a
    denominator with nonzero constant term, ignoring content and sign."""
    if len(num) == 1 or len(den) == 1:
        return num, den
    nmin = min(num)
    n = _lp_shift(num, -nmin)
    g = _poly_gcd(n, den)
    if max(g) > 0:
        n = _poly_exact_div(n, g)
        den = _poly_exact_div(den, g)
        num = _lp_shift(n, nmin)
    return num, den


def _finalize(num, den):
    """Content and sign normalization for an already poly-reduced ratio
    whose denominator has nonzero constant term."""
    if not num:
        return {}, {0: 1}
    c = _igcd(_lp_content(num), _lp_content(den))
    if c > 1:
        num = {e: v // c for e, v in num.items()}
        den = {e: v // c for e, v in den.items()}
    if den[max(den)] < 0:
        num = _lp_neg(num)
        den = _lp_neg(den)
    return num, den


def _normalize(num, den):
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return {}, {0: 1}
    # Split off u-power offsets so both operands are ordinary polynomials
    # with nonzero constant term.
    nmin = min(num)
    dmin = min(den)
    n = _lp_shift(num, -nmin)
    d = _lp_shift(den, -dmin)
    offset = nmin - dmin
    if d != {0: 1} and len(n) > 1 and len(d) > 1:
        g = _poly_gcd(n, d)
        if max(g) > 0 or g.get(0, 1) != 1:
            n = _poly_exact_div(n, g)
            d = _poly_exact_div(d, g)
    cn = _lp_content(n)
    cd = _lp_content(d)
    c = _igcd(cn, cd)
    if c > 1:
        n = {e: v // c for e, v in n.items()}
        d = {e: v // c for e, v in d.items()}
    if d[max(d)] < 0:
        n = _lp_neg(n)
        d = _lp_neg(d)
    return _lp_shift(n, offset), d


def _coerce(x):
    if isinstance(x, UScalar):
        return x
    if isinstance(x, int):
        return _small_int(x)
    if isinstance(x, Fraction):
        return UScalar.from_fraction(x)
    raise TypeError(f"cannot coerce {x!r} to UScalar")


def _lp_str(a):
    parts = []
    for e in sorted(a):
        c = a[e]
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if e == 0:
            body = str(c)
        else:
            var = "u" if e == 1 else f"u^{e}"
            body = var if c == 1 else f"{c}*{var}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = (("-" if first_sign == "-" else "") + first_body)
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM_RE = re.compile(r"([+-]?)((?:\d+\*?)?u(?:\^(-?\d+))?|\d+)")


def _parse_poly(text):
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    text = text.replace(" ", "")
    out = {}
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        body = m.group(2)
        if "u" in body:
            cs = body.split("u")[0].rstrip("*")
            coeff = int(cs) if cs else 1
            exp = int(m.group(3)) if m.group(3) else 1
        else:
            coeff = int(body)
            exp = 0
        out[exp] = out.get(exp, 0) + sign * coeff
    if not out:
        raise ValueError(f"empty polynomial {text!r}")
    return {e: c for e, c in out.items() if c}


def _parse_scalar(text):
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            return UScalar(_parse_poly(text[:i]), _parse_poly(text[i + 1:]))
    return UScalar(_parse_poly(text))


ZERO = UScalar({}, {0: 1}, _normalized=True)
ONE = UScalar({0: 1}, {0: 1}, _normalized=True)
U = UScalar.u_pow(1)
Q = UScalar.u_pow(4)

_SMALL = {0: ZERO, 1: ONE, -1: UScalar({0: -1}, {0: 1}, _normalized=True)}


def _small_int(n):
    s = _SMALL.get(n)
    if s is None:
        s = UScalar({0: n} if n else {}, {0: 1}, _normalized=True)
    return s


_QINT_CACHE = {}


def qint(n):
    """The quantum integer [n] = (q^n - q^-n)/(q - q^-1), n a half-integer."""
    n = Fraction(n)
    if 2 * n.numerator % n.denominator:
        raise ValueError(f"qint argument must be a half-integer, got {n}")
    key = n
    out = _QINT_CACHE.get(key)
    if out is None:
        e = int(4 * n)
        num = {e: 1, -e: -1} if e else {}
        out = UScalar(num, {4: 1, -4: -1})
        _QINT_CACHE[key] = out
    return out


def field_ops(a, b, which):
    """Dispatch helper for the four field operations (CLI surface)."""
    if which == "add":
        return a + b
    if which == "sub":
        return a - b
    if which == "mul":
        return a * b
    if which == "div":
        return a / b
    raise ValueError(f"unknown operation {which!r}")
