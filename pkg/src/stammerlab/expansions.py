"""Digit generators for number representations, plus Pisot/Salem classification.

Covers base-b long division, greedy beta-expansions (exact for integer and
quadratic bases, certified intervals beyond), p-adic digit streams,
pattern-counting sequences, and lacunary 0/1 sequences.  Everything in the
core paths is exact: Fraction, quadratic-field elements, or rational
interval endpoints that only ever shrink by exact bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Union

from .words import Alphabet, SequenceSource, Word

#: Exact rational scalars everywhere; this is the only representation used.
RationalNumber = Fraction


class AmbiguousFloor(RuntimeError):
    """A greedy-digit floor could not be decided at the precision cap."""


class UndecidedPrecision(RuntimeError):
    """Root enclosures stayed inconclusive at the precision cap."""

    def __init__(self, message: str, precision_bits: int):
        super().__init__(message)
        self.precision_bits = precision_bits


# ---------------------------------------------------------------------------
# quadratic field arithmetic


class QuadraticField:
    """Q(beta) for the real quadratic integer beta > 1 with beta^2 = p*beta + q."""

    def __init__(self, p: int, q: int):
        disc = p * p + 4 * q
        if disc <= 0:
            raise ValueError("x^2 - %dx - %d has no real roots" % (p, q))
        r = math.isqrt(disc)
        if r * r == disc:
            raise ValueError("x^2 - %dx - %d is reducible" % (p, q))
        if p + q <= 1:
            raise ValueError("larger root of x^2 - %dx - %d is not > 1" % (p, q))
        self.p = p
        self.q = q
        self.discriminant = disc
        # isolating interval for beta = (p + sqrt(disc))/2 on (1, inf)
        hi = Fraction(max(2, 1 + abs(p) + abs(q)))
        while self._sign_at(hi) <= 0:
            hi *= 2
        self._lo, self._hi = Fraction(1), hi

    def _sign_at(self, t: Fraction) -> int:
        v = t * t - self.p * t - self.q
        return (v > 0) - (v < 0)

    def refine(self, steps: int = 1) -> tuple[Fraction, Fraction]:
        """Shrink and return the isolating interval by exact bisection."""
        lo, hi = self._lo, self._hi
        for _ in range(steps):
            mid = (lo + hi) / 2
            if self._sign_at(mid) < 0:
                lo = mid
            else:
                hi = mid
        self._lo, self._hi = lo, hi
        return lo, hi

    def beta(self) -> "QuadraticFieldElement":
        return QuadraticFieldElement(self, Fraction(0), Fraction(1))

    def element(self, a, b=0) -> "QuadraticFieldElement":
        return QuadraticFieldElement(self, Fraction(a), Fraction(b))

    def beta_inverse(self) -> "QuadraticFieldElement":
        # 1/beta = (beta - p)/q
        return QuadraticFieldElement(self, Fraction(-self.p, self.q),
                                     Fraction(1, self.q))

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, QuadraticField)
                and (self.p, self.q) == (other.p, other.q))

    def __hash__(self) -> int:
        return hash((self.p, self.q))

    def __repr__(self) -> str:
        return "QuadraticField(x^2 - %dx - %d)" % (self.p, self.q)


class QuadraticFieldElement:
    """a + b*beta with exact rational a, b; totally ordered via exact signs."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: QuadraticField, a: Fraction, b: Fraction):
        self.field = field
        self.a = Fraction(a)
        self.b = Fraction(b)

    def _coerce(self, other) -> "QuadraticFieldElement":
        if isinstance(other, QuadraticFieldElement):
            if other.field != self.field:
                raise ValueError("mixed quadratic fields")
            return other
        return QuadraticFieldElement(self.field, Fraction(other), Fraction(0))

    def __add__(self, other):
        o = self._coerce(other)
        return QuadraticFieldElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticFieldElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        p, q = self.field.p, self.field.q
        # (a + b*beta)(c + d*beta), beta^2 = p*beta + q
        a, b, c, d = self.a, self.b, o.a, o.b
        return QuadraticFieldElement(self.field,
                                     a * c + b * d * q,
                                     a * d + b * c + b * d * p)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticFieldElement":
        # the field automorphism beta -> p - beta
        return QuadraticFieldElement(self.field,
                                     self.a + self.b * self.field.p, -self.b)

    def norm(self) -> Fraction:
        p, q = self.field.p, self.field.q
        return self.a * self.a + self.a * self.b * p - self.b * self.b * q

    def inverse(self) -> "QuadraticFieldElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero element")
        c = self.conjugate()
        return QuadraticFieldElement(self.field, c.a / n, c.b / n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadraticFieldElement):
            return (self.field == other.field and self.a == other.a
                    and self.b == other.b)
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.field, self.a, self.b))

    def is_positive(self) -> bool:
        """Exact sign test: a + b*beta > 0 without any floating point."""
        a, b = self.a, self.b
        if b == 0:
            return a > 0
        t = -a / b  # compare beta against the rational t
        if b > 0:
            return self._beta_gt(t)
        return not self._beta_gt(t)  # beta < t; equality impossible

    def _beta_gt(self, t: Fraction) -> bool:
        if t <= 1:
            return True
        return self.field._sign_at(t) < 0

    def __lt__(self, other):
        return (self._coerce(other) - self).is_positive()

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        return (self - self._coerce(other)).is_positive()

    def __ge__(self, other):
        return self == other or self > other

    def floor(self) -> int:
        if self.b == 0:
            return math.floor(self.a)
        # a + b*beta is irrational, so bisecting beta's interval must
        # eventually separate the value from every integer
        lo, hi = self.field.refine(0)
        while True:
            if self.b > 0:
                vlo, vhi = self.a + self.b * lo, self.a + self.b * hi
            else:
                vlo, vhi = self.a + self.b * hi, self.a + self.b * lo
            flo, fhi = math.floor(vlo), math.floor(vhi)
            if flo == fhi:
                return flo
            lo, hi = self.field.refine(1)

    def __repr__(self) -> str:
        return "(%s + %s*beta)" % (self.a, self.b)


GOLDEN_FIELD = QuadraticField(1, 1)


# ---------------------------------------------------------------------------
# algebraic integer specs and Pisot/Salem classification


@dataclass(frozen=True)
class AlgebraicIntegerSpec:
    """Monic integer polynomial, coefficients descending: x^2-x-1 -> (1,-1,-1)."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) < 2:
            raise ValueError("need degree >= 1")
        if self.coeffs[0] != 1:
            raise ValueError("polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self) -> str:
        terms = []
        n = self.degree
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            d = n - i
            body = "x^%d" % d if d > 1 else ("x" if d == 1 else "")
            mag = abs(c)
            coef = "" if (mag == 1 and d > 0) else str(mag)
            terms.append(("-" if c < 0 else "+", coef + body))
        out = ""
        for sign, body in terms:
            out += (sign if out or sign == "-" else "") + body
        return out


@dataclass(frozen=True)
class Classification:
    kind: str  # "Pisot" | "Salem" | "Neither"
    detail: str = ""

    def __str__(self) -> str:
        return self.kind


def _sympy_poly(coeffs: tuple[int, ...]):
    from sympy import Poly, Symbol
    return Poly(list(coeffs), Symbol("x"))


def _chebyshev_like(j: int) -> list[int]:
    """Ascending coefficients of p_j(y) where x^j + x^-j = p_j(x + 1/x)."""
    prev, cur = [2], [0, 1]
    if j == 0:
        return prev
    for _ in range(j - 1):
        nxt = [0] + cur  # y * cur
        for idx, c in enumerate(prev):
            nxt[idx] -= c
        prev, cur = cur, nxt
    return cur


def _salem_certificate(spec: AlgebraicIntegerSpec) -> bool:
    """Exact on-circle certificate for an even-degree palindrome.

    Writing y = x + 1/x turns P into a degree-k polynomial Q; P is Salem
    exactly when Q is totally real with one root in (2, inf), none in
    (-inf, -2], and the rest in (-2, 2).
    """
    from sympy import Poly, Symbol
    n = spec.degree
    k = n // 2
    asc = spec.coeffs[::-1]
    q_asc = [0] * (k + 1)
    q_asc[0] += asc[k]
    for j in range(1, k + 1):
        pj = _chebyshev_like(j)
        for idx, c in enumerate(pj):
            q_asc[idx] += asc[k + j] * c
    Q = Poly(q_asc[::-1], Symbol("y"))
    total_real = Q.count_roots(None, None)
    return (total_real == k
            and Q.count_roots(2, None) == 1
            and Q.count_roots(None, -2) == 0)


def _sqrt_upper(fr: Fraction, bits: int = 64) -> Fraction:
    """Rational upper bound on sqrt(fr) for fr >= 0."""
    if fr < 0:
        raise ValueError("negative radicand")
    if fr == 0:
        return Fraction(0)
    scale = 1 << (2 * bits)
    n = fr.numerator * scale // fr.denominator
    r = math.isqrt(n + 1)
    if r * r < n + 1:
        r += 1
    return Fraction(r, 1 << bits)


def _complex_rational_roots(coeffs: tuple[int, ...],
                            bits: int) -> Optional[list[tuple[Fraction, Fraction]]]:
    """Dyadic approximations of all roots, or None if iteration failed."""
    import mpmath
    try:
        with mpmath.workprec(bits + 60):
            roots = mpmath.polyroots([mpmath.mpf(c) for c in coeffs],
                                     maxsteps=200, extraprec=bits)
    except (mpmath.libmp.NoConvergence, ValueError):
        return None
    out = []
    scale = 1 << bits
    with mpmath.workprec(bits + 60):
        for z in roots:
            z = mpmath.mpc(z)
            re = Fraction(int(mpmath.floor(z.real * scale + 0.5)), scale)
            im = Fraction(int(mpmath.floor(z.imag * scale + 0.5)), scale)
            out.append((re, im))
    return out


def _disc_status(spec: AlgebraicIntegerSpec, bits: int) -> Optional[list[str]]:
    """Certified per-root position vs the unit circle at this precision.

    Builds pairwise disjoint inclusion discs around dyadic root estimates:
    the disc around z_hat with radius deg * |P(z_hat) / prod(z_hat - z_j)|
    contains exactly one root once all discs are disjoint.  All membership
    tests reduce to exact rational comparisons of squared norms.
    Returns per-disc "inside"/"outside", or None when undecided.
    """
    centers = _complex_rational_roots(spec.coeffs, bits)
    if centers is None:
        return None
    n = spec.degree
    if len(set(centers)) != n:
        return None

    def cmul(u, v):
        return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])

    def abs2(u):
        return u[0] * u[0] + u[1] * u[1]

    radii: list[Fraction] = []
    for i, c in enumerate(centers):
        val = (Fraction(0), Fraction(0))
        for coef in spec.coeffs:
            val = cmul(val, c)
            val = (val[0] + coef, val[1])
        denom = (Fraction(1), Fraction(0))
        for j, other in enumerate(centers):
            if j != i:
                denom = cmul(denom, (c[0] - other[0], c[1] - other[1]))
        w_sq = abs2(val) / abs2(denom)
        radii.append(_sqrt_upper(Fraction(n * n) * w_sq))
    for i in range(n):
        for j in range(i + 1, n):
            d = (centers[i][0] - centers[j][0], centers[i][1] - centers[j][1])
            if abs2(d) <= (radii[i] + radii[j]) ** 2:
                return None  # discs may overlap; refine
    status = []
    for c, rho in zip(centers, radii):
        s = abs2(c)
        if rho < 1 and s < (1 - rho) ** 2:
            status.append("inside")
        elif s > (1 + rho) ** 2:
            status.append("outside")
        else:
            return None  # straddles the circle at this precision
    return status


def classify_algebraic_integer(spec: AlgebraicIntegerSpec,
                               max_precision_bits: int = 2 ** 16
                               ) -> Classification:
    """Pisot / Salem / Neither for the dominant root of an irreducible monic P.

    Real-root counts are exact (Sturm); strict unit-circle membership of the
    conjugates is certified by disjoint inclusion discs; the on-circle part
    of the Salem condition is certified exactly through the y = x + 1/x
    substitution, never by interval arithmetic.
    """
    poly = _sympy_poly(spec.coeffs)
    if not poly.is_irreducible:
        raise ValueError("polynomial %s is not irreducible" % spec)
    if spec.degree == 1:
        root = -spec.coeffs[1]
        if root >= 2:
            return Classification("Pisot", "integer %d" % root)
        return Classification("Neither", "root %d is not > 1" % root)
    if poly.count_roots(1, None) != 1:
        return Classification("Neither", "no single real root > 1")
    palindrome = spec.coeffs == spec.coeffs[::-1]
    if palindrome and spec.degree >= 4 and spec.degree % 2 == 0:
        if _salem_certificate(spec):
            return Classification("Salem", "self-reciprocal, conjugates on "
                                           "the unit circle")
        return Classification("Neither", "self-reciprocal but not Salem")
    bits = 64
    while bits <= max_precision_bits:
        status = _disc_status(spec, bits)
        if status is not None:
            outside = status.count("outside")
            if outside == 1:
                return Classification("Pisot", "conjugates strictly inside "
                                               "the unit circle")
            return Classification("Neither",
                                  "%d roots outside the closed unit disc"
                                  % outside)
        bits *= 2
    raise UndecidedPrecision("root enclosures undecided for %s" % spec,
                             max_precision_bits)


# ---------------------------------------------------------------------------
# digit generators


def _check_open_unit(xi) -> None:
    if not (0 < xi < 1):
        raise ValueError("xi must lie strictly between 0 and 1")


def b_adic_digits(xi: Fraction, b: int) -> SequenceSource:
    """Exact base-b long-division digits of xi in (0,1)."""
    xi = Fraction(xi)
    _check_open_unit(xi)
    if b < 2:
        raise ValueError("need b >= 2")

    def factory() -> Iterator[str]:
        num, den = xi.numerator, xi.denominator
        while True:
            num *= b
            d, num = divmod(num, den)
            yield str(d)

    return SequenceSource(Alphabet.digits(b), factory,
                          name="badic(%s,b=%d)" % (xi, b))


def beta_expansion(xi, beta, N: int,
                   max_precision_bits: int = 2 ** 16) -> list[int]:
    """First N greedy digits d_k = floor(beta * T^(k-1)(xi)), T(x) = beta*x - floor.

    beta may be an integer >= 2, an exact rational > 1, a QuadraticField
    (exact field arithmetic), or an AlgebraicIntegerSpec (degree <= 2 exact,
    otherwise certified interval arithmetic with doubling precision, raising
    AmbiguousFloor at the cap).
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    if isinstance(beta, AlgebraicIntegerSpec):
        if beta.degree == 1:
            beta = -beta.coeffs[1]
        elif beta.degree == 2:
            beta = QuadraticField(-beta.coeffs[1], -beta.coeffs[2])
        else:
            return _beta_digits_certified(Fraction(xi), beta, N,
                                          max_precision_bits)
    if isinstance(beta, QuadraticField):
        field = beta
        x = xi if isinstance(xi, QuadraticFieldElement) else field.element(Fraction(xi))
        if x.field != field:
            raise ValueError("xi lives in a different field")
        _check_open_unit(x)
        bval = field.beta()
        ceiling = bval.floor() + 1  # beta irrational, so ceil = floor + 1
        digits = []
        for _ in range(N):
            y = bval * x
            d = y.floor()
            if not 0 <= d <= ceiling - 1:
                raise AssertionError("greedy digit %d out of range" % d)
            digits.append(d)
            x = y - d
        return digits
    beta = Fraction(beta)
    if beta <= 1:
        raise ValueError("beta must be > 1")
    x = Fraction(xi)
    _check_open_unit(x)
    digits = []
    for _ in range(N):
        y = beta * x
        d = math.floor(y)
        digits.append(d)
        x = y - d
    return digits


def _beta_digits_certified(xi: Fraction, spec: AlgebraicIntegerSpec, N: int,
                           max_bits: int) -> list[int]:
    _check_open_unit(xi)
    poly = _sympy_poly(spec.coeffs)
    if poly.count_roots(1, None) != 1:
        raise ValueError("need exactly one real root > 1, got %s" % spec)
    asc = [Fraction(c) for c in spec.coeffs[::-1]]
    deg = spec.degree

    def eval_sign(t: Fraction) -> int:
        v = Fraction(0)
        for c in spec.coeffs:
            v = v * t + c
        return (v > 0) - (v < 0)

    hi = Fraction(max(2, 1 + max(abs(c) for c in spec.coeffs)))
    while eval_sign(hi) <= 0:
        hi *= 2
    sign_hi = 1

    bits = 64
    while bits <= max_bits:
        lo, hi_cur = Fraction(1), hi
        # exact bisection of the dominant root to width 2^-bits
        while hi_cur - lo > Fraction(1, 1 << bits):
            mid = (lo + hi_cur) / 2
            if eval_sign(mid) == sign_hi:
                hi_cur = mid
            else:
                lo = mid
        digits = _orbit_digits(xi, asc, deg, lo, hi_cur, N)
        if digits is not None:
            return digits
        bits *= 2
    raise AmbiguousFloor("floor undecided at %d bits" % max_bits)


def _orbit_digits(xi: Fraction, asc: list[Fraction], deg: int,
                  blo: Fraction, bhi: Fraction,
                  N: int) -> Optional[list[int]]:
    """Greedy digits with x tracked exactly as a polynomial in beta.

    Returns None when the beta enclosure is too wide to decide some floor.
    """
    # beta^deg = -(asc[0] + asc[1]*beta + ... + asc[deg-1]*beta^(deg-1))
    reduction = [-c for c in asc[:deg]]
    x = [xi] + [Fraction(0)] * (deg - 1)
    # interval powers of beta; 1 <= blo so all powers are positive/increasing
    pow_lo = [Fraction(1)]
    pow_hi = [Fraction(1)]
    for _ in range(deg - 1):
        pow_lo.append(pow_lo[-1] * blo)
        pow_hi.append(pow_hi[-1] * bhi)

    def value_interval(vec: list[Fraction]) -> tuple[Fraction, Fraction]:
        lo = hi = vec[0]
        for c, pl, ph in zip(vec[1:], pow_lo[1:], pow_hi[1:]):
            if c >= 0:
                lo += c * pl
                hi += c * ph
            else:
                lo += c * ph
                hi += c * pl
        return lo, hi

    digits = []
    for _ in range(N):
        shifted = [Fraction(0)] + x[:-1]
        top = x[-1]
        y = [s + top * r for s, r in zip(shifted, reduction)]
        vlo, vhi = value_interval(y)
        flo, fhi = math.floor(vlo), math.floor(vhi)
        if flo != fhi:
            return None
        digits.append(flo)
        y[0] -= flo
        x = y
    return digits


@dataclass(frozen=True)
class BetaOrbit:
    """A greedy orbit that returned to an earlier point: eventual periodicity."""

    field: QuadraticField
    preperiod: int
    period: int
    digits: tuple[int, ...]  # the first preperiod + period digits


def beta_orbit_period(xi, field: QuadraticField,
                      max_steps: int = 10 ** 5) -> BetaOrbit:
    """Iterate the greedy map in exact Q(beta) arithmetic until a repeat."""
    x = xi if isinstance(xi, QuadraticFieldElement) else field.element(Fraction(xi))
    _check_open_unit(x)
    bval = field.beta()
    seen: dict[tuple[Fraction, Fraction], int] = {}
    digits: list[int] = []
    for step in range(max_steps):
        key = (x.a, x.b)
        if key in seen:
            first = seen[key]
            return BetaOrbit(field, first, step - first,
                             tuple(digits[:step]))
        seen[key] = step
        y = bval * x
        d = y.floor()
        digits.append(d)
        x = y - d
    raise RuntimeError("no orbit repeat within %d steps" % max_steps)


def periodic_beta_value(field: QuadraticField, digits: Iterable[int],
                        preperiod: int, period: int) -> QuadraticFieldElement:
    """Exact value of the eventually periodic expansion sum d_k beta^-k."""
    digits = list(digits)
    if period < 1 or len(digits) < preperiod + period:
        raise ValueError("need at least preperiod + period digits")
    binv = field.beta_inverse()
    one = field.element(1)
    head = field.element(0)
    power = one
    for d in digits[:preperiod]:
        power = power * binv
        head = head + d * power
    block = field.element(0)
    bpow = one
    for d in digits[preperiod:preperiod + period]:
        bpow = bpow * binv
        block = block + d * bpow
    tail_scale = power  # beta^(-preperiod)
    block_sum = block / (one - bpow)  # bpow is beta^(-period) here
    return head + tail_scale * block_sum


# ---------------------------------------------------------------------------
# Hensel (p-adic) expansions


@dataclass(frozen=True)
class HenselExpansion:
    """alpha = sum over k >= start_exponent of a_k p^k with digits in 0..p-1.

    digits is indexed from 1: digit i corresponds to exponent
    start_exponent + i - 1.
    """

    p: int
    start_exponent: int
    digits: SequenceSource
    value: Fraction

    def digit_at_exponent(self, k: int) -> int:
        if k < self.start_exponent:
            return 0
        return int(self.digits.symbol_at(k - self.start_exponent + 1))


def _p_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def hensel_digits(alpha: Fraction, p: int) -> HenselExpansion:
    """Exact p-adic digit stream of a rational number.

    Factors out the power of p first, then repeatedly takes the unit part
    modulo p through the modular inverse of the denominator.
    """
    from sympy import isprime
    if not isprime(p):
        raise ValueError("%d is not prime" % p)
    alpha = Fraction(alpha)
    if alpha == 0:
        def zero_factory() -> Iterator[str]:
            while True:
                yield "0"

        zeros = SequenceSource(Alphabet.digits(p), zero_factory,
                               name="hensel(0,p=%d)" % p)
        return HenselExpansion(p, 0, zeros, alpha)
    v = _p_valuation(alpha.numerator, p) - _p_valuation(alpha.denominator, p)
    unit = alpha / Fraction(p) ** v

    def factory() -> Iterator[str]:
        cur = unit
        while True:
            inv = pow(cur.denominator % p, -1, p)
            digit = (cur.numerator * inv) % p
            yield str(digit)
            cur = (cur - digit) / p

    digits = SequenceSource(Alphabet.digits(p), factory,
                            name="hensel(%s,p=%d)" % (alpha, p))
    return HenselExpansion(p, v, digits, alpha)


# ---------------------------------------------------------------------------
# pattern counting and lacunary sequences


def _base_k_word(n: int, k: int) -> tuple[str, ...]:
    """Most-significant-first digits of n in base k, no leading zeros; 0 -> '0'."""
    if n == 0:
        return ("0",)
    out = []
    while n:
        out.append(str(n % k))
        n //= k
    return tuple(reversed(out))


def pattern_count_digits(k: int, P: Union[str, Word], b: int) -> SequenceSource:
    """e(n) = number of (overlapping) occurrences of P in base-k digits of n, mod b.

    The count reads the usual most-significant-first rendering without
    leading zeros, with 0 rendered as the single digit 0.
    """
    if k < 2 or b < 2:
        raise ValueError("need k >= 2 and b >= 2")
    P = Word(P)
    if len(P) == 0:
        raise ValueError("pattern must be nonempty")
    pat = P.symbols
    for s in pat:
        if not s.isdigit() or not 0 <= int(s) < k:
            raise ValueError("pattern symbol %r is not a base-%d digit" % (s, k))
    if all(s == "0" for s in pat):
        raise ValueError("pattern must not be all zeros")
    L = len(pat)

    def e(i: int) -> str:
        digits = _base_k_word(i - 1, k)
        count = sum(1 for t in range(len(digits) - L + 1)
                    if digits[t:t + L] == pat)
        return str(count % b)

    return SequenceSource.from_function(
        Alphabet.digits(b), e,
        name="patcount(k=%d,P=%s,b=%d)" % (k, P.text(), b))


def powers(base: int) -> Callable[[], Iterator[int]]:
    """Exponent spec base^1, base^2, ... for lacunary_digits."""
    def gen() -> Iterator[int]:
        v = base
        while True:
            yield v
            v *= base
    return gen


def squares() -> Iterator[int]:
    n = 1
    while True:
        yield n * n
        n += 1


def lacunary_digits(exponents: Union[Iterable[int], Callable[[], Iterator[int]]],
                    b: int) -> SequenceSource:
    """0/1 digit stream with 1s exactly at the given strictly increasing indices."""
    if b < 2:
        raise ValueError("need b >= 2")

    def factory() -> Iterator[str]:
        it = iter(exponents() if callable(exponents) else exponents)
        nxt = next(it, None)
        last = 0
        i = 1
        while True:
            if nxt is not None and (nxt <= last or nxt < 1):
                raise ValueError("exponent spec must be strictly increasing "
                                 "and >= 1, got %r after %r" % (nxt, last))
            if nxt == i:
                yield "1"
                last = nxt
                nxt = next(it, None)
            else:
                yield "0"
            i += 1

    return SequenceSource(Alphabet.digits(b), factory, name="lacunary(b=%d)" % b)
