"""Sparse truncated Laurent series and the q-series identity checks.

Series live in one or two formal variables.  By convention the character
identities use s and t with s standing for p^(1/2) and t for z^(1/2), so
every half power occurring in the character formulas has an integral
exponent here; contraction series use a single variable x = w/z.  The
truncation order bounds the exponent of the *first* variable only; the
second variable is unconstrained (weight spaces of these level -1/2
modules spread over infinitely many z-powers at fixed depth, but each
individual coefficient is finite).
"""

from __future__ import annotations

from fractions import Fraction

from .reports import VerificationReport
from .scalars import UScalar, ZERO

_ZERO_LIKE = (0, Fraction(0))


def _is_zero(c):
    if isinstance(c, UScalar):
        return c.is_zero()
    return c == 0


class TruncatedSeries:
    """Finite map from integer exponent tuples to exact coefficients."""

    __slots__ = ("vars", "order", "terms")

    def __init__(self, vars, order, terms=None):
        self.vars = tuple(vars)
        if len(self.vars) not in (1, 2):
            raise ValueError("series take one or two variables")
        self.order = order
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if not _is_zero(c) and e[0] <= order:
                    self.terms[tuple(e)] = c

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, vars, order):
        return cls(vars, order)

    @classmethod
    def monomial(cls, vars, order, coeff, exps):
        return cls(vars, order, {tuple(exps): coeff})

    @classmethod
    def one(cls, vars, order, kind=int):
        unit = UScalar.from_int(1) if kind is UScalar else Fraction(1)
        return cls(vars, order, {(0,) * len(tuple(vars)): unit})

    # -- helpers ------------------------------------------------------

    def _check_compatible(self, other):
        if self.vars != other.vars or self.order != other.order:
            raise ValueError("mismatched variables or truncation orders")

    def coeff(self, *exps):
        if len(exps) != len(self.vars):
            raise ValueError("wrong exponent arity")
        return self.terms.get(tuple(exps), Fraction(0))

    def is_zero(self):
        return not self.terms

    def min_degree(self):
        return min((e[0] for e in self.terms), default=None)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        self._check_compatible(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if _is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return TruncatedSeries(self.vars, self.order, out)

    def __neg__(self):
        return TruncatedSeries(self.vars, self.order,
                               {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff):
        if _is_zero(coeff):
            return TruncatedSeries(self.vars, self.order)
        return TruncatedSeries(self.vars, self.order,
                               {e: coeff * c for e, c in self.terms.items()})

    def __mul__(self, other):
        self._check_compatible(other)
        order = self.order
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e0 = ea[0] + eb[0]
                if e0 > order:
                    continue
                e = (e0,) if len(ea) == 1 else (e0, ea[1] + eb[1])
                s = out.get(e, 0) + ca * cb
                if _is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return TruncatedSeries(self.vars, self.order, out)

    def inv(self):
        """Inverse of a series whose lowest first-variable slice is a
        single monomial."""
        if not self.terms:
            raise ZeroDivisionError("inverse of zero series")
        m = min(e[0] for e in self.terms)
        head = [(e, c) for e, c in self.terms.items() if e[0] == m]
        if len(head) != 1:
            raise ArithmeticError("non-invertible leading term")
        (he, hc), = head
        hinv = hc.inv() if isinstance(hc, UScalar) else 1 / hc
        # S = M(1 + R) with R of positive first-variable degree:
        # S^-1 = M^-1 sum (-R)^k.
        rest = {}
        for e, c in self.terms.items():
            if e == he:
                continue
            ee = tuple(a - b for a, b in zip(e, he))
            if ee[0] <= self.order:
                rest[ee] = hinv * c
        r = TruncatedSeries(self.vars, self.order, rest)
        geom = TruncatedSeries.one(self.vars, self.order,
                                   UScalar if isinstance(hc, UScalar) else int)
        acc = geom
        power = geom
        while True:
            power = power * (-r)
            if power.is_zero():
                break
            acc = acc + power
        minv = {tuple(-a for a in he): hinv}
        return TruncatedSeries(self.vars, self.order, minv) * acc

    def exp(self):
        """exp of a series with strictly positive first-variable degrees."""
        if any(e[0] <= 0 for e in self.terms):
            raise ArithmeticError("exp needs positive-degree terms only")
        uscalar = any(isinstance(c, UScalar) for c in self.terms.values())
        out = TruncatedSeries.one(self.vars, self.order,
                                  UScalar if uscalar else int)
        power = out
        k = 0
        while True:
            k += 1
            power = power * self
            if power.is_zero():
                break
            f = Fraction(1, _factorial(k))
            c = UScalar.from_fraction(f) if uscalar else f
            out = out + power.scale(c)
        return out

    # -- rendering ----------------------------------------------------

    def to_json_dict(self):
        items = sorted(self.terms.items())
        return {"vars": list(self.vars), "order": self.order,
                "terms": [{"e": list(e), "c": str(c)} for e, c in items]}

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items()):
            mon = "*".join(f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            bits.append(f"({c})" + (f"*{mon}" if mon else ""))
        return " + ".join(bits)

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries)
                and self.vars == other.vars and self.order == other.order
                and self.terms == other.terms)


def _sgn(m):
    return -1 if m & 1 else 1


def _factorial(k, _cache={0: 1}):
    if k not in _cache:
        _cache[k] = k * _factorial(k - 1)
    return _cache[k]


def series_arith(a, b, which):
    """Dispatch helper mirroring the CLI surface."""
    if which == "add":
        return a + b
    if which == "mul":
        return a * b
    if which == "inv":
        return a.inv()
    if which == "coeff":
        return a.coeff(*b)
    raise ValueError(f"unknown operation {which!r}")


def pochhammer_expand(coeff, i, j, base_exp, order, vars=("s", "t")):
    """Truncated expansion of prod_{n>=0} (1 - coeff * s^(i + n*base_exp) * t^j).

    The prefactor is the monomial coeff*s^i*t^j and the base is s^base_exp.
    A zero coeff gives the empty product 1.
    """
    vars = tuple(vars)
    nvars = len(vars)
    if _is_zero(coeff):
        return TruncatedSeries.one(vars, order,
                                   UScalar if isinstance(coeff, UScalar) else int)
    if base_exp <= 0:
        raise ArithmeticError("non-stabilizing product: base exponent must be positive")
    # Factors with negative s-degree pull excluded terms back under the
    # truncation bound; compute at a padded order and cut down at the end.
    exps = []
    n = 0
    while i + n * base_exp <= order:
        exps.append(i + n * base_exp)
        n += 1
    pad = sum(-e for e in exps if e < 0)
    work = order + pad
    kind = UScalar if isinstance(coeff, UScalar) else int
    out = TruncatedSeries.one(vars, work, kind)
    n = 0
    while i + n * base_exp <= work:
        e = i + n * base_exp
        mono = (e,) if nvars == 1 else (e, j)
        factor = TruncatedSeries.one(vars, work, kind) + \
            TruncatedSeries.monomial(vars, work, -coeff, mono)
        out = out * factor
        n += 1
    return TruncatedSeries(vars, order, out.terms)


def pochhammer_ratio(num_uexps, den_uexps, step_uexp, order, vars=("z",)):
    """Quotient of infinite Pochhammer products as a series in one
    variable with exact coefficients in the scalar field.

    Each entry a in num_uexps (den_uexps) contributes a factor
    prod_{n>=0}(1 - u^a * u^(n*step_uexp) * z) upstairs (downstairs).
    Every z-coefficient is a rational function of u, obtained through
    the logarithm: log of each factor family sums to a geometric series
    -sum_m u^(a m) z^m / (m (1 - u^(step m))).
    """
    vars = tuple(vars)
    if len(vars) != 1:
        raise ValueError("pochhammer_ratio is a one-variable expansion")
    if step_uexp <= 0:
        raise ArithmeticError("non-stabilizing product: step must be positive")
    terms = {}
    for m in range(1, order + 1):
        num = ZERO
        for a in num_uexps:
            num = num + UScalar.u_pow(a * m)
        for a in den_uexps:
            num = num - UScalar.u_pow(a * m)
        if num.is_zero():
            continue
        den = (UScalar.from_int(1) - UScalar.u_pow(step_uexp * m)) \
            * UScalar.from_int(m)
        terms[(m,)] = -(num / den)
    return TruncatedSeries(vars, order, terms).exp()


def euler_product(order, vars=("s", "t")):
    """(p;p)_infinity with p = s^2, truncated at s-order `order`."""
    j = 0
    return pochhammer_expand(Fraction(1), 2, j, 2, order, vars)


def pentagonal_series(order, vars=("s", "t")):
    """Euler's closed form of (p;p)_infinity: exponents (3k^2 +- k)/2."""
    terms = {}
    zero_tail = (0,) * (len(tuple(vars)) - 1)
    k = 0
    while 3 * k * k - k <= order:
        for e in {3 * k * k - k, 3 * k * k + k}:
            if e <= order:
                terms[(e,) + zero_tail] = Fraction((-1) ** k)
        k += 1
    return TruncatedSeries(vars, order, terms)


def cube_oracle_series(order, vars=("s", "t")):
    """Jacobi's closed form of (p;p)^3: sum (-1)^n (2n+1) p^(n(n+1)/2)."""
    terms = {}
    zero_tail = (0,) * (len(tuple(vars)) - 1)
    n = 0
    while n * n + n <= order:
        terms[(n * n + n,) + zero_tail] = Fraction((-1) ** n * (2 * n + 1))
        n += 1
    return TruncatedSeries(vars, order, terms)


def _star_lhs(order, flip_sign=False):
    """Left side of the triple-sum character identity, in s = p^(1/2),
    t = z^(1/2), truncated at s-order 2*order.

    The inner sum over k >= -m is rewritten as a sum over k >= |m|: the
    terms with -m <= k <= m-1 cancel in pairs under k -> -1-k (the
    exponent k^2+k is invariant, the sign (-1)^k flips, and that range
    is stable under the involution), so the rewrite is exact for every
    m and no excluded term contributes.  With k >= |m| >= 0 the inner
    exponent k^2+k-m^2 is >= k, which bounds the enumeration.
    """
    n2 = 2 * order
    theta = {}
    n = 0
    while n * n <= n2:
        for nn in {n, -n}:
            theta[(nn * nn, nn)] = Fraction(_sgn(nn))
        n += 1
    theta_s = TruncatedSeries(("s", "t"), n2, theta)
    inner = {}
    for k in range(0, n2 + 1):
        for m in range(-k, k + 1):
            e = k * k + k - m * m
            if e > n2:
                continue
            sign = _sgn(k + m)
            if flip_sign:
                sign = -sign
            key = (e, -m)
            inner[key] = inner.get(key, Fraction(0)) + sign
    inner_s = TruncatedSeries(("s", "t"), n2, inner)
    return theta_s * inner_s


def check_star_identity(order, flip_sign=False):
    """Verify the triple-sum identity against (p;p)^3 up to p-order `order`."""
    lhs = _star_lhs(order, flip_sign=flip_sign)
    ppp = euler_product(2 * order)
    rhs = ppp * ppp * ppp
    report = VerificationReport("star-identity", {"order": order})
    diff = lhs - rhs
    for e, c in sorted(diff.terms.items()):
        report.add_failure({"exponent": {"s": e[0], "t": e[1]},
                            "residual": str(c)})
    return report


def _S_terms(l, order):
    """Coefficients (s-exponent -> int) of S_l = sum_m p^(ml) * inner(m),
    with the inner sum rewritten over k >= |m| as in _star_lhs.

    For l != 0 the exponent 2ml + k^2 + k reaches any fixed bound only
    for finitely many k (it grows like k^2 - 2|l|k), so the loop bound
    below covers every contribution at s-exponent <= 2*order.
    """
    n2 = 2 * order
    out = {}
    kmax = 2 * abs(l) + n2 + 2
    for k in range(0, kmax + 1):
        base = k * k + k
        if base - 2 * abs(l) * k > n2:
            continue
        for m in range(-k, k + 1):
            e = base + 2 * m * l
            if e > n2:
                continue
            out[e] = out.get(e, 0) + (-1) ** k
    return {e: c for e, c in out.items() if c}


def check_S(l, order, lmax=8):
    """S_l vanishes for l != 0 and equals (p;p)^3 for l = 0."""
    if abs(l) > lmax:
        raise ValueError(f"|l| exceeds the configured bound {lmax}")
    report = VerificationReport("S_l", {"l": l, "order": order})
    got = _S_terms(l, order)
    if l == 0:
        ppp = euler_product(2 * order, vars=("s",))
        expected = (ppp * ppp * ppp).terms
        oracle = cube_oracle_series(2 * order, vars=("s",)).terms
        if expected != oracle:
            report.add_failure({"detail": "product form disagrees with the"
                                          " (2n+1) closed-form oracle"})
        expected = {e[0]: c for e, c in expected.items()}
    else:
        expected = {}
    for e in sorted(set(got) | set(expected)):
        if Fraction(got.get(e, 0)) != Fraction(expected.get(e, 0)):
            report.add_failure({"s_exponent": e, "got": got.get(e, 0),
                                "expected": str(expected.get(e, 0))})
    return report


def check_jacobi_triple_step(l, order):
    """The telescoping step: sum_m p^(ml) (-1)^m p^((m^2-m)/2)
    equals (p;p) (p^l;p) (p^(1-l);p), compared at s-order 2*order."""
    n2 = 2 * order
    lhs = {}
    mmax = 2 * abs(l) + n2 + 2
    for m in range(-mmax, mmax + 1):
        e = m * m - m + 2 * m * l
        if e <= n2:
            lhs[e] = lhs.get(e, 0) + _sgn(m)
    lhs = {e: c for e, c in lhs.items() if c}
    one = Fraction(1)
    rhs_s = euler_product(n2, vars=("s",)) \
        * pochhammer_expand(one, 2 * l, 0, 2, n2, vars=("s",)) \
        * pochhammer_expand(one, 2 * (1 - l), 0, 2, n2, vars=("s",))
    rhs = {e[0]: c for e, c in rhs_s.terms.items()}
    report = VerificationReport("jacobi-triple-step", {"l": l, "order": order})
    for e in sorted(set(lhs) | set(rhs)):
        if Fraction(lhs.get(e, 0)) != rhs.get(e, Fraction(0)):
            report.add_failure({"s_exponent": e, "lhs": lhs.get(e, 0),
                                "rhs": str(rhs.get(e, 0))})
    return report


def product_form_coefficient(factors, a, b):
    """Coefficient of s^a t^b in prod 1/(c s^i t^j; s^be)_infinity.

    `factors` is a list of (i, j, be) integer triples, each denoting the
    inverse Pochhammer 1/prod_{n>=0}(1 - s^(i+n*be) t^j).  Each expanded
    part (i+n*be, j) may be used with any multiplicity; at most one part
    may have zero s-degree (its multiplicity is fixed by the residual
    t-charge), so the count below is finite.
    """
    parts = []
    zero_parts = []
    for (i, j, be) in factors:
        if be <= 0:
            raise ArithmeticError("base exponent must be positive")
        if i < 0:
            raise ArithmeticError("negative leading s-degree not supported")
        n = 0
        while i + n * be <= a:
            s = i + n * be
            if s == 0:
                zero_parts.append(j)
            else:
                parts.append((s, j))
            n += 1
    if len(zero_parts) > 1:
        raise ArithmeticError("ambiguous expansion: several zero-degree parts")
    zt = zero_parts[0] if zero_parts else None
    if zt == 0:
        raise ArithmeticError("non-stabilizing zero-degree part")
    parts.sort(reverse=True)
    count = 0

    def descend(idx, srem, trem):
        nonlocal count
        if idx == len(parts):
            if zt is None:
                count += srem == 0 and trem == 0
            else:
                count += srem == 0 and trem % zt == 0 and trem // zt >= 0
            return
        s, j = parts[idx]
        mu = 0
        while mu * s <= srem:
            descend(idx + 1, srem - mu * s, trem - mu * j)
            mu += 1

    descend(0, a, b)
    return count
