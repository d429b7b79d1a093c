import json
import random
from fractions import Fraction

import pytest

import stammerlab as sl
from stammerlab import (
    AgreementReport,
    InsufficientDigits,
    NeedMoreDigits,
    RadicalValue,
    StammerWitness,
    agreement_length,
    approximant_vector,
    build_polynomial,
    criterion_report,
    hensel_approximant,
    periodic_approximant,
    periodize,
    place_absolute_values,
    product_over_places,
    subspace_audit,
    vector_height,
)
from stammerlab.approximants import poly_eval

F = Fraction


def test_build_polynomial_example():
    P = build_polynomial([1, 2], 1, 1)
    assert P == (1, 1)  # X + 1
    assert periodic_approximant([1, 2], 1, 1).value(10) == F(11, 90)


def test_build_polynomial_zero():
    assert build_polynomial([0, 0, 0], 1, 2) == (0,)


def test_build_polynomial_needs_enough_digits():
    with pytest.raises(InsufficientDigits):
        build_polynomial([1, 2], 2, 1)


def _oracle_value(a, r, s, b):
    # head + periodic tail summed as a geometric series, no polynomial involved
    head = sum(a[k - 1] * b ** (r - k) for k in range(1, r + 1))
    block = sum(a[r + i - 1] * b ** (s - i) for i in range(1, s + 1))
    return F(head, b**r) + F(block, b**r * (b**s - 1))


def test_lemma_identity_random_instances():
    rng = random.Random(1618)
    for _ in range(1000):
        b = rng.choice([2, 3, 10])
        r = rng.randrange(0, 51)
        s = rng.randrange(1, 51)
        a = [rng.randrange(b) for _ in range(r + s)]
        P = build_polynomial(a, r, s)
        assert len(P) <= max(r + s, 1)  # degree <= r+s-1
        assert max(abs(c) for c in P) <= 2 * max(max(a), 1)
        value = F(poly_eval(P, b), b**r * (b**s - 1))
        assert value == _oracle_value(a, r, s, b)


def test_periodize_constant():
    alt = sl.SequenceSource.from_function(
        sl.Alphabet(("0", "1")), lambda n: "01"[(n - 1) % 2], name="alt"
    )
    assert periodize(alt, 0, 1).prefix(6).text() == "000000"


def test_periodize_fibonacci(fib_word):
    got = periodize(fib_word, 2, 3)
    assert got.prefix(14).text() == "01" + "001" * 4
    # agrees with the source on 1..r+s by construction
    assert got.prefix(5) == fib_word.prefix(5)


def test_agreement_thue_morse(thue_morse):
    rep = agreement_length(thue_morse, StammerWitness("0", "1", 2))
    assert rep == AgreementReport(required=3, first_disagreement=4,
                                  scan_bound=84, ok=True)


def test_agreement_requires_verified_witness(thue_morse):
    with pytest.raises(ValueError):
        agreement_length(thue_morse, StammerWitness("", "0", 2))


def test_agreement_for_extracted_witnesses(fib_word):
    for n in range(5, 40):
        ws, _ = sl.extract_witness(fib_word, n, 2)
        rep = agreement_length(fib_word, ws)
        required = len(ws.u) + -(-(ws.w * len(ws.v)).numerator // (ws.w * len(ws.v)).denominator)
        assert rep.required == required
        assert rep.first_disagreement is None or rep.first_disagreement > required
        assert rep.ok


def test_agreement_periodic_source_never_disagrees():
    alt = sl.SequenceSource.from_function(
        sl.Alphabet(("0", "1")), lambda n: "01"[(n - 1) % 2], name="alt"
    )
    rep = agreement_length(alt, StammerWitness("", "01", 3), scan_bound=500)
    assert rep.first_disagreement is None
    assert rep.ok


def test_truncation_error_bound(fib_word):
    """|alpha - alpha_n| <= max(a) * b^-(r+ceil(ws)) * b/(b-1), exactly."""
    b = 2
    for n in (8, 13, 21):
        ws, _ = sl.extract_witness(fib_word, n, 2)
        r, s = len(ws.u), len(ws.v)
        digits = [int(c) for c in fib_word.prefix_symbols(r + s)]
        alpha_n = periodic_approximant(digits, r, s).value(b)
        need = r + -(-(ws.w * s).numerator // (ws.w * s).denominator)
        N = need + 80
        alpha_N = sum(int(c) * F(1, b**k) for k, c in
                      enumerate(fib_word.prefix_symbols(N), start=1))
        bound = F(1) * F(1, b**need) * F(b, b - 1)
        assert abs(alpha_N - alpha_n) <= bound


def test_hensel_approximant_alternating():
    digits = [1, 0] * 7
    h = hensel_approximant(digits, 0, 2, 2)
    assert h.numerator == -2
    assert h.value == F(-2, 3)
    assert h.first_disagreement is None
    assert h.valuation == 15  # agrees through the window: lower bound only
    assert h.valuation_is_lower_bound


def test_hensel_approximant_disagreement_index():
    h = hensel_approximant([0, 1, 1, 1, 0, 1, 0, 1, 0, 1], 0, 2, 2)
    assert h.valuation == 3
    assert not h.valuation_is_lower_bound
    assert h.first_disagreement == 3
    assert not h.certifies(F(2))  # would need valuation >= 5


def test_hensel_approximant_zero_digits():
    h = hensel_approximant([0] * 10, 1, 2, 3)
    assert h.numerator == 0
    assert h.value == 0


def test_hensel_certifies_hunted_witnesses():
    kempner = sl.lacunary_digits(sl.expansions.powers(2), 2)
    seq = sl.witness_hunt(kempner, F(3, 2), 3, 128)
    picks = [w for w in seq if len(w.v) <= 16][:5]
    assert picks
    for p in (2, 3, 5):
        for w in picks:
            r, s = len(w.u), len(w.v)
            need = r + -(-(w.w * s).numerator // (w.w * s).denominator) + 8
            digits = [int(c) for c in kempner.prefix_symbols(need)]
            h = hensel_approximant(digits, r, s, p)
            assert h.certifies(w.w), (p, r, s)


def test_place_absolute_values_literal():
    got = place_absolute_values(360)
    assert got == {"inf": F(360), 2: F(1, 8), 3: F(1, 9), 5: F(1, 5)}


def test_product_formula_random_integers():
    rng = random.Random(2718)
    for _ in range(1000):
        m = rng.randrange(-10**12, 10**12)
        if m == 0:
            continue
        assert product_over_places(m) == 1


def test_radical_value_algebra():
    assert RadicalValue(F(1, 2), 8) == RadicalValue(F(1), 2)
    assert RadicalValue(F(1), 2) * RadicalValue(F(1), 3) == RadicalValue(F(1), 6)
    assert RadicalValue(F(1), 2) < RadicalValue(F(3, 2), 1)
    assert RadicalValue(F(-2), 3) < RadicalValue(F(0), 5)
    assert RadicalValue(F(0), 77) == RadicalValue(F(0), 1)


def test_vector_height_examples():
    assert vector_height((1, 2, 3)) == RadicalValue(F(1), 14)
    assert vector_height((2, 4, 6)) == vector_height((1, 2, 3))
    assert vector_height((3, -1, -7)) == vector_height((6, -2, -14))


def test_vector_height_scaling_random():
    rng = random.Random(1111)
    for _ in range(100):
        x = tuple(rng.randrange(-99, 100) for _ in range(3))
        if x == (0, 0, 0):
            continue
        lam = F(rng.randrange(1, 20), rng.randrange(1, 20)) * rng.choice([1, -1])
        scaled = tuple(lam * c for c in x)
        assert vector_height(scaled) == vector_height(x)


def test_subspace_audit_fixture(fib_word):
    """Exact regression against the recorded first certified run."""
    with open("tests/data/audit_fixture.json") as fh:
        fixture = json.load(fh)
    seq = sl.witnesses_for_morphic(
        sl.Morphism.parse("source 0 1\ntarget 0 1\nmap 0 -> 01\nmap 1 -> 0\n"), "0", 10
    )
    for w in seq:
        s = len(w.v)
        if str(s) not in fixture:
            continue
        rep = subspace_audit(approximant_vector(fib_word, 2, len(w.u), s),
                             fib_word, 2, w=w.w)
        want = fixture[str(s)]
        assert rep.digits_used == want["digitsUsed"]
        assert str(rep.x[2]) == want["x3"]
        got_lo = "%d/%d" % (rep.linear_form_lower.numerator,
                            rep.linear_form_lower.denominator)
        assert got_lo == want["linearFormLower"]
        assert repr(rep.exponent_lower) == want["exponentLower"]
        assert repr(rep.exponent_upper) == want["exponentUpper"]
        assert rep.exponent_strictly_below(-3) is want["belowMinus3"]
        assert rep.exponent_strictly_below(-5) is False


def test_subspace_audit_rational_alpha_never_separates():
    digits = sl.b_adic_digits(F(1, 3), 2)
    x = approximant_vector(digits, 2, 0, 2)  # exact: L vanishes identically
    with pytest.raises(NeedMoreDigits):
        subspace_audit(x, digits, 2, max_digits=256)


def test_criterion_report_shapes(fib_word, ternary_morphism):
    rep = criterion_report(fib_word, 2, scan_limit=512)
    assert rep["status"] == "constructed" or rep["status"] == "hunted"
    assert rep["periodicity"]["eventuallyPeriodic"] is False
    assert rep["witnesses"]
    assert len(rep["agreement"]) == len(rep["witnesses"])
    json.dumps(rep)

    rep3 = criterion_report(sl.b_adic_digits(F(1, 3), 10), 10, scan_limit=256)
    assert rep3["status"] == "eventually-periodic"
    assert rep3["periodicity"]["period"] == 1
    assert rep3["applicable"] is False

    tern = sl.fixed_point(ternary_morphism, "0")
    na = sl.witnesses_for_morphic(ternary_morphism, "0", 5)
    rep2 = criterion_report(tern, 2, witnesses=na, scan_limit=256)
    assert rep2["status"] == "hunted"
    assert rep2["constructionStatus"] == "not-applicable"
    json.dumps(rep2)
