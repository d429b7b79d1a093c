"""Truncate-and-periodize approximants and the rational subspace audit.

A digit prefix a_1..a_{r+s} determines an eventually periodic shadow of the
source; its value is P(b)/(b^r(b^s-1)) for an explicit integer polynomial P.
The audit measures, with exact rational arithmetic and symbolic square
roots, how strongly the vector (b^{r+s}, -b^r, -P(b)) violates the naive
height/product inequality at the places above b and infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .complexity import detect_eventual_period
from .expansions import QuadraticField
from .stammer import (NotApplicable, StammerWitness, WitnessSequence,
                      verify_witness, witness_hunt)
from .words import SequenceSource

Digits = Sequence[int]


class InsufficientDigits(ValueError):
    """Fewer digits supplied than the requested r + s."""


class NeedMoreDigits(RuntimeError):
    """The linear-form enclosure still straddles zero at the digit cap."""

    def __init__(self, message: str, digits_used: int):
        super().__init__(message)
        self.digits_used = digits_used


def poly_eval(coeffs_desc: Sequence, x):
    acc = 0
    for c in coeffs_desc:
        acc = acc * x + c
    return acc


def build_polynomial(a: Digits, r: int, s: int) -> tuple[int, ...]:
    """Coefficients (descending) of the periodization polynomial.

    P(X) = sum_{k=1}^{r} a_k X^(r-k) (X^s - 1) + sum_{k=1}^{s} a_{r+k} X^(s-k),
    so deg P <= r+s-1 and every coefficient is at most 2 max|a_k| in size.
    """
    if r < 0 or s < 1:
        raise ValueError("need r >= 0 and s >= 1")
    if len(a) < r + s:
        raise InsufficientDigits("need %d digits, got %d" % (r + s, len(a)))
    coeffs = [0] * (r + s)  # coeffs[d] is the coefficient of X^d
    for k in range(1, r + 1):
        coeffs[r + s - k] += a[k - 1]
        coeffs[r - k] -= a[k - 1]
    for k in range(1, s + 1):
        coeffs[s - k] += a[r + k - 1]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(reversed(coeffs))


@dataclass(frozen=True)
class PeriodicApproximant:
    """Head a_1..a_r followed by the block a_{r+1}..a_{r+s} repeated forever."""

    r: int
    s: int
    digits: tuple[int, ...]  # a_1..a_{r+s}
    polynomial: tuple[int, ...]  # descending coefficients

    def value(self, base) -> Union[Fraction, "object"]:
        """Exact value of the periodized expansion in the given base.

        Integer or Fraction bases give a Fraction; a QuadraticField gives
        the exact field element P(beta)/(beta^r (beta^s - 1)).
        """
        if isinstance(base, QuadraticField):
            beta = base.beta()
            num = poly_eval(self.polynomial, beta)
            if isinstance(num, int):  # zero polynomial never touched beta
                num = base.element(num)
            br = base.element(1)
            for _ in range(self.r):
                br = br * beta
            bs = base.element(1)
            for _ in range(self.s):
                bs = bs * beta
            return num / (br * (bs - base.element(1)))
        base = Fraction(base)
        if base <= 1:
            raise ValueError("base must exceed 1")
        num = Fraction(poly_eval(self.polynomial, base))
        return num / (base ** self.r * (base ** self.s - 1))


def periodic_approximant(a: Digits, r: int, s: int) -> PeriodicApproximant:
    if len(a) < r + s:
        raise InsufficientDigits("need %d digits, got %d" % (r + s, len(a)))
    head = tuple(int(d) for d in a[:r + s])
    return PeriodicApproximant(r, s, head, build_polynomial(head, r, s))


def periodize(a: SequenceSource, r: int, s: int) -> SequenceSource:
    """Copy a on positions 1..r+s, then repeat positions r+1..r+s forever."""
    if r < 0 or s < 1:
        raise ValueError("need r >= 0 and s >= 1")

    def factory():
        head = a.prefix_symbols(r + s)
        yield from head
        while True:
            yield from head[r:]

    return SequenceSource(a.alphabet, factory,
                          name="periodize(%s,r=%d,s=%d)" % (a.name, r, s))


@dataclass(frozen=True)
class AgreementReport:
    required: int  # |U| + ceil(w |V|)
    first_disagreement: Optional[int]  # 1-based; None if none found
    scan_bound: int
    ok: bool


def agreement_length(a: SequenceSource, ws: StammerWitness,
                     scan_bound: Optional[int] = None) -> AgreementReport:
    """Locate the first position where a leaves its periodized shadow.

    For a verified witness the stammering prefix forces agreement through
    position |U| + ceil(w |V|), so the first disagreement must land strictly
    beyond it.
    """
    if not verify_witness(a, ws):
        raise ValueError("witness does not verify against the source")
    r, s = len(ws.u), len(ws.v)
    required = r + math.ceil(ws.w * s)
    if scan_bound is None:
        scan_bound = 4 * (r + s) + 4 * required + 64
    shadow = periodize(a, r, s)
    left = a.prefix_symbols(scan_bound)
    right = shadow.prefix_symbols(scan_bound)
    first = None
    for idx in range(scan_bound):
        if left[idx] != right[idx]:
            first = idx + 1
            break
    ok = first is None or first > required
    return AgreementReport(required, first, scan_bound, ok)


# ---------------------------------------------------------------------------
# p-adic approximants


def _vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class HenselApproximant:
    """Periodization of a p-adic digit list and how far it matches the list.

    valuation is the p-adic valuation of (truncated source) - value; when
    every supplied digit matches the periodization it is reported as the
    lower bound digits_used + 1.
    """

    p: int
    r: int
    s: int
    numerator: int  # the integer p_n
    value: Fraction  # p_n / (p^s - 1)
    digits_used: int
    valuation: int
    valuation_is_lower_bound: bool
    first_disagreement: Optional[int]

    def certifies(self, w: Fraction) -> bool:
        return self.valuation >= self.r + math.ceil(w * self.s) + 1


def hensel_approximant(a: Digits, r: int, s: int, p: int) -> HenselApproximant:
    """Exact periodization value and valuation of the mismatch.

    p_n = (sum_{k<=r} a_k p^k)(p^s - 1) - sum_{k<=s} a_{r+k} p^{r+k}, and the
    approximant is p_n/(p^s - 1).  The mismatch valuation is computed twice,
    positionally and modulo p^(K+1), and the two must agree.
    """
    if r < 0 or s < 1:
        raise ValueError("need r >= 0 and s >= 1")
    digits = [int(d) for d in a]
    if any(not 0 <= d < p for d in digits):
        raise ValueError("digits must lie in 0..p-1")
    if len(digits) < r + s:
        raise InsufficientDigits("need %d digits, got %d" % (r + s, len(digits)))
    K = len(digits)
    head = sum(digits[k - 1] * p ** k for k in range(1, r + 1))
    tail_top = sum(digits[r + k - 1] * p ** (r + k) for k in range(1, s + 1))
    p_n = head * (p ** s - 1) - tail_top
    value = Fraction(p_n, p ** s - 1)

    block = digits[r:r + s]
    first = None
    for idx in range(r, K):  # positions 1..r agree by construction
        if digits[idx] != block[(idx - r) % s]:
            first = idx + 1
            break

    mod = p ** (K + 1)
    truncated = sum(d * p ** (k + 1) for k, d in enumerate(digits)) % mod
    approx_mod = (p_n * pow(p ** s - 1, -1, mod)) % mod
    diff = (truncated - approx_mod) % mod
    if diff == 0:
        valuation, lower = K + 1, True
    else:
        valuation, lower = _vp(diff, p), False
    if first is not None:
        assert valuation == first and not lower
    else:
        assert lower
    return HenselApproximant(p, r, s, p_n, value, K, valuation, lower, first)


# ---------------------------------------------------------------------------
# places, heights, and the audit


def place_absolute_values(m) -> dict:
    """Normalized absolute values of a nonzero rational at all relevant places.

    Keys: "inf" plus every prime dividing the numerator or denominator.
    """
    from sympy import factorint
    m = Fraction(m)
    if m == 0:
        raise ValueError("zero has no product formula")
    out = {"inf": abs(m)}
    for prime, e in sorted(factorint(abs(m.numerator)).items()):
        out[prime] = Fraction(prime) ** (-e)
    for prime, e in sorted(factorint(m.denominator).items()):
        out[prime] = Fraction(prime) ** e
    return out


def product_over_places(m) -> Fraction:
    prod = Fraction(1)
    for v in place_absolute_values(m).values():
        prod *= v
    return prod


@dataclass(frozen=True)
class RadicalValue:
    """Exact coef * sqrt(radicand); comparisons square out the root."""

    coef: Fraction
    radicand: int

    def __post_init__(self):
        coef = Fraction(self.coef)
        radicand = int(self.radicand)
        if radicand < 0:
            raise ValueError("negative radicand")
        if coef == 0 or radicand == 0:
            coef, radicand = Fraction(0), 1
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "radicand", radicand)

    def squared(self) -> Fraction:
        return self.coef * self.coef * self.radicand

    def sign(self) -> int:
        return (self.coef > 0) - (self.coef < 0)

    @staticmethod
    def _coerce(other) -> "RadicalValue":
        if isinstance(other, RadicalValue):
            return other
        return RadicalValue(Fraction(other), 1)

    def __mul__(self, other):
        o = self._coerce(other)
        return RadicalValue(self.coef * o.coef, self.radicand * o.radicand)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (RadicalValue, int, Fraction)):
            return NotImplemented
        o = self._coerce(other)
        return self.sign() == o.sign() and self.squared() == o.squared()

    def __hash__(self) -> int:
        return hash((self.sign(), self.squared()))

    def __lt__(self, other) -> bool:
        o = self._coerce(other)
        if self.sign() != o.sign():
            return self.sign() < o.sign()
        if self.sign() >= 0:
            return self.squared() < o.squared()
        return self.squared() > o.squared()

    def __le__(self, other) -> bool:
        return self == other or self < other

    def __gt__(self, other) -> bool:
        return self._coerce(other) < self

    def __ge__(self, other) -> bool:
        return self == other or self > other

    def __float__(self) -> float:
        root = Fraction(math.isqrt(self.radicand << 128), 1 << 64)
        return float(self.coef * root)

    def __repr__(self) -> str:
        return "RadicalValue(%s, sqrt(%d))" % (self.coef, self.radicand)


def vector_height(x: Iterable) -> RadicalValue:
    """Height of a nonzero rational vector: Euclidean norm of the primitive
    integer representative, invariant under nonzero rational scaling."""
    xs = [Fraction(v) for v in x]
    if not xs or all(v == 0 for v in xs):
        raise ValueError("need a nonzero vector")
    den = math.lcm(*(v.denominator for v in xs))
    ints = [int(v * den) for v in xs]
    g = math.gcd(*ints)
    prim = [v // g for v in ints]
    return RadicalValue(Fraction(1), sum(v * v for v in prim))


@dataclass(frozen=True)
class SubspaceAuditReport:
    x: tuple[int, int, int]
    b: int
    r: int
    s: int
    digits_used: int
    linear_form_lower: Fraction  # signed enclosure of alpha(x1+x2) + x3
    linear_form_upper: Fraction
    finite_part: Fraction  # product over p | b of |x3|_p / |x|_p^3
    height: RadicalValue
    pi_lower: RadicalValue
    pi_upper: RadicalValue
    exponent_lower: float
    exponent_upper: float

    def exponent_strictly_below(self, threshold: int) -> bool:
        """Exact test Pi < H^threshold for an integer threshold < 0."""
        if threshold >= 0:
            raise ValueError("threshold must be negative")
        lhs = self.pi_upper
        for _ in range(-threshold):
            lhs = lhs * self.height
        return lhs < RadicalValue(Fraction(1), 1)

    def as_record(self) -> dict:
        def frac(f: Fraction) -> str:
            return "%d/%d" % (f.numerator, f.denominator)

        def rad(v: RadicalValue) -> dict:
            return {"coefNum": v.coef.numerator, "coefDen": v.coef.denominator,
                    "radicand": v.radicand, "approx": float(v)}

        return {
            "rPlusS": self.r + self.s,
            "r": self.r,
            "s": self.s,
            "x": list(self.x),
            "digitsUsed": self.digits_used,
            "linearForm": [frac(self.linear_form_lower),
                           frac(self.linear_form_upper)],
            "finitePart": frac(self.finite_part),
            "H_enclosure": rad(self.height),
            "Pi_enclosure": [rad(self.pi_lower), rad(self.pi_upper)],
            "exponent_enclosure": [self.exponent_lower, self.exponent_upper],
            "exponentBelowMinus3": self.exponent_strictly_below(-3),
        }


def _exact_power(n: int, b: int) -> Optional[int]:
    if n < 1:
        return None
    e = 0
    while n % b == 0:
        n //= b
        e += 1
    return e if n == 1 else None


def _iv_frac(ctx, f: Fraction):
    return ctx.mpf(f.numerator) / ctx.mpf(f.denominator)


def subspace_audit(x: tuple[int, int, int], digits: SequenceSource, b: int,
                   precision_bits: int = 128,
                   w: Optional[Fraction] = None,
                   initial_digits: Optional[int] = None,
                   max_digits: int = 1 << 14) -> SubspaceAuditReport:
    """Exact per-place audit of x = (b^{r+s}, -b^r, -P(b)) against the digit
    source alpha = sum a_k b^-k.

    The only inexact quantity is alpha, which is enclosed by partial sums
    [S_N, S_N + b^-N]; N doubles until the linear form's sign is decided
    (NeedMoreDigits at the cap, e.g. when alpha is exactly rational).  The
    height and the product Pi are carried symbolically as rational
    multiples of square roots, so threshold tests are exact; the logarithm
    quotient is reported as a directed-rounding enclosure only.
    """
    from sympy import primefactors
    if b < 2:
        raise ValueError("need b >= 2")
    x1, x2, x3 = (int(v) for v in x)
    if x1 <= 0 or x2 >= 0:
        raise ValueError("expected (b^(r+s), -b^r, -P(b)) with positive b powers")
    rs = _exact_power(x1, b)
    r = _exact_power(-x2, b)
    if rs is None or r is None or rs - r < 1:
        raise ValueError("x1 and -x2 must be powers of b with x1 > -x2")
    s = rs - r
    if x3 == 0:
        raise ValueError("zero approximant polynomial")
    if initial_digits is None:
        if w is not None:
            initial_digits = 4 * (r + math.ceil(Fraction(w) * s))
        else:
            initial_digits = 4 * (r + s) + 16
    N = max(initial_digits, r + s + 8, 8)

    coef = x1 + x2
    while True:
        toks = digits.prefix_symbols(N)
        S = Fraction(0)
        for t in reversed(toks):
            S = (S + int(t)) / b
        lo, hi = S, S + Fraction(1, b ** N)
        cands = sorted((coef * lo + x3, coef * hi + x3))
        L_lo, L_hi = cands
        if L_lo > 0 or L_hi < 0:
            break
        if N >= max_digits:
            raise NeedMoreDigits("linear form straddles zero after %d digits"
                                 % N, N)
        N = min(2 * N, max_digits)

    abs_lo, abs_hi = sorted((abs(L_lo), abs(L_hi)))
    D = x1 * x1 + x2 * x2 + x3 * x3
    g = math.gcd(x1, x2, x3)
    finite = Fraction(1)
    for p in primefactors(b):
        vmin = min(_vp(x1, p), _vp(-x2, p), _vp(abs(x3), p))
        finite *= Fraction(p) ** (3 * vmin - _vp(abs(x3), p))
    pi_lo = RadicalValue(abs_lo * finite / Fraction(D) ** 2, D)
    pi_hi = RadicalValue(abs_hi * finite / Fraction(D) ** 2, D)
    height = RadicalValue(Fraction(1, g), D)
    if not height > 1:
        raise ValueError("height must exceed 1 for the exponent to make sense")

    import mpmath
    ctx = mpmath.iv
    old = ctx.prec
    try:
        ctx.prec = max(64, precision_bits)
        sqrtD = ctx.sqrt(ctx.mpf(D))
        pi_iv_lo = _iv_frac(ctx, pi_lo.coef) * sqrtD
        pi_iv_hi = _iv_frac(ctx, pi_hi.coef) * sqrtD
        pi_iv = ctx.mpf([pi_iv_lo.a, pi_iv_hi.b])
        h_iv = _iv_frac(ctx, Fraction(1, g)) * sqrtD
        e_iv = ctx.log(pi_iv) / ctx.log(h_iv)
        e_lo, e_hi = float(e_iv.a), float(e_iv.b)
    finally:
        ctx.prec = old

    return SubspaceAuditReport(
        x=(x1, x2, x3), b=b, r=r, s=s, digits_used=N,
        linear_form_lower=L_lo, linear_form_upper=L_hi,
        finite_part=finite, height=height,
        pi_lower=pi_lo, pi_upper=pi_hi,
        exponent_lower=e_lo, exponent_upper=e_hi)


def approximant_vector(digits: SequenceSource, b: int, r: int,
                       s: int) -> tuple[int, int, int]:
    """The audit vector (b^{r+s}, -b^r, -P(b)) from the first r+s digits."""
    toks = [int(t) for t in digits.prefix_symbols(r + s)]
    P = build_polynomial(toks, r, s)
    return (b ** (r + s), -(b ** r), -poly_eval(P, b))


# ---------------------------------------------------------------------------
# assembled evidence


def _frac_pair(f: Fraction) -> str:
    return "%d/%d" % (f.numerator, f.denominator)


def _persistent_period(a: SequenceSource,
                       scan: int) -> Optional[tuple[int, int]]:
    """Period candidate from prefix(scan) that still holds on prefix(4*scan).

    Highly repetitive non-periodic words (the Fibonacci word, say) always
    admit some (q, s) on a finite window; demanding persistence at 4x the
    window rejects those while keeping every truly eventually periodic
    stream.
    """
    cand = detect_eventual_period(a.prefix(scan))
    if cand is None:
        return None
    q, s = cand
    ext = a.prefix_symbols(4 * scan)
    for i in range(q, len(ext) - s):
        if ext[i] != ext[i + s]:
            return None
    return cand


def criterion_report(a: SequenceSource, base, witnesses=None,
                     scan_limit: int = 4096,
                     precision_bits: int = 128,
                     hunt_params: Optional[dict] = None) -> dict:
    """Bundle periodicity, witness verification, agreement lengths, and (for
    integer bases) audit exponents into one JSON-ready certificate.

    The certificate necessarily covers finitely many witnesses of a
    hypothesis that quantifies over all window sizes; it is evidence, not a
    proof object.
    """
    period = _persistent_period(a, scan_limit)
    if base is None:
        base_rec = {"kind": "none"}
        int_base = None
    elif isinstance(base, QuadraticField):
        base_rec = {"kind": "quadratic", "p": base.p, "q": base.q}
        int_base = None
    else:  # numeric base
        bfrac = Fraction(base)
        if bfrac.denominator == 1 and bfrac >= 2:
            int_base = int(bfrac)
            base_rec = {"kind": "integer", "b": int_base}
        else:
            int_base = None
            base_rec = {"kind": "rational", "value": _frac_pair(bfrac)}

    report: dict = {
        "source": a.name,
        "base": base_rec,
        "periodicity": ({"scan": scan_limit, "eventuallyPeriodic": False}
                        if period is None else
                        {"scan": scan_limit, "eventuallyPeriodic": True,
                         "preperiod": period[0], "period": period[1]}),
        "note": ("verified witnesses cover finitely many window sizes of a "
                 "hypothesis about all of them; treat this as evidence"),
    }
    if period is not None:
        report["applicable"] = False
        report["status"] = "eventually-periodic"
        report["witnesses"] = []
        report["agreement"] = []
        report["audit"] = []
        return report

    hunted = False
    if isinstance(witnesses, NotApplicable):
        report["constructionStatus"] = "not-applicable"
        report["constructionReason"] = witnesses.reason
        witnesses = None
    if witnesses is None:
        params = {"w_min": Fraction(3, 2), "ratio_cap": Fraction(4),
                  "L": min(scan_limit, 512)}
        params.update(hunt_params or {})
        witnesses = witness_hunt(a, params["w_min"], params["ratio_cap"],
                                 params["L"])
        hunted = True
    if isinstance(witnesses, WitnessSequence):
        witnesses = list(witnesses)
    else:
        witnesses = list(witnesses)

    report["applicable"] = True
    report["status"] = "hunted" if hunted else "constructed"
    wit_records = []
    agreements = []
    audits = []
    for idx, ws in enumerate(witnesses, start=1):
        verified = verify_witness(a, ws)
        rec = ws.as_record(verified)
        rec["index"] = idx
        wit_records.append(rec)
        if not verified:
            agreements.append({"index": idx, "skipped": "unverified witness"})
            continue
        ag = agreement_length(a, ws)
        agreements.append({"index": idx, "required": ag.required,
                           "firstDisagreement": ag.first_disagreement,
                           "scanBound": ag.scan_bound, "ok": ag.ok})
        if int_base is None:
            continue
        r, s = len(ws.u), len(ws.v)
        try:
            toks = [int(t) for t in a.prefix_symbols(r + s)]
        except ValueError:
            audits.append({"index": idx, "skipped": "non-numeric symbols"})
            continue
        if any(not 0 <= t < int_base for t in toks):
            audits.append({"index": idx,
                           "skipped": "symbols outside base range"})
            continue
        vec = approximant_vector(a, int_base, r, s)
        if vec[2] == 0:
            audits.append({"index": idx, "skipped": "zero approximant"})
            continue
        try:
            rep = subspace_audit(vec, a, int_base, precision_bits=precision_bits,
                                 w=ws.w)
        except NeedMoreDigits as exc:
            audits.append({"index": idx, "skipped": "need more digits",
                           "digitsUsed": exc.digits_used})
            continue
        row = rep.as_record()
        row["index"] = idx
        audits.append(row)
    report["witnesses"] = wit_records
    report["agreement"] = agreements
    report["audit"] = audits
    return report
