"""Acceptance checks, one test per shipped guarantee.

Each test prints a single "criterion NN PASS/FAIL" line (run with
``pytest -s tests/test_acceptance.py`` to see them live) and pins the
exact values and time budgets the package promises.
"""

import io
import json
import math
import random
import time
from contextlib import contextmanager, redirect_stderr, redirect_stdout
from fractions import Fraction

from stammerlab import (
    AlgebraicIntegerSpec,
    KAutomaton,
    Morphism,
    NotApplicable,
    QuadraticField,
    automata,
    cli,
    complexity,
    morphisms,
    stammer,
)
from stammerlab.approximants import (
    approximant_vector,
    hensel_approximant,
    periodic_approximant,
    product_over_places,
    subspace_audit,
    vector_height,
)
from stammerlab.expansions import (
    beta_orbit_period,
    classify_algebraic_integer,
    pattern_count_digits,
    periodic_beta_value,
)
from stammerlab.morphisms import Recurrence

F = Fraction

TM_AUT = """\
k 2
states q0 q1
initial q0
output q0:0 q1:1
delta q0 0 q0
delta q0 1 q1
delta q1 0 q1
delta q1 1 q0
"""

FIB_MOR = "source 0 1\ntarget 0 1\nmap 0 -> 01\nmap 1 -> 0\nstart 0\n"

TERNARY_MOR = ("source 0 1 2\ntarget 0 1 2\n"
               "map 0 -> 012\nmap 1 -> 12\nmap 2 -> 2\nstart 0\n")


@contextmanager
def criterion(num: int, label: str):
    verdict = "FAIL"
    try:
        yield
        verdict = "PASS"
    finally:
        print("criterion %02d %s %s" % (num, verdict, label), flush=True)


def _fib_source():
    return morphisms.fixed_point(Morphism.parse(FIB_MOR), "0")


def test_01_thue_morse_generation(tmp_path):
    with criterion(1, "Thue-Morse automaton prefix(13)"):
        path = tmp_path / "tm.aut"
        path.write_text(TM_AUT)
        start = time.perf_counter()
        A = KAutomaton.parse_file(str(path))
        got = automata.generate(A).prefix(13).text()
        elapsed = time.perf_counter() - start
        assert got == "0110100110010"
        assert elapsed < 1.0


def test_02_fibonacci_prefix_and_complexity():
    with criterion(2, "Fibonacci prefix(18) and p(n) = n + 1"):
        start = time.perf_counter()
        fib = _fib_source()
        assert fib.prefix(18).text() == "010010100100101001"
        profile = complexity.complexity_profile(fib, 30, L=10 ** 4)
        elapsed = time.perf_counter() - start
        rows = list(profile.rows())
        assert [n for n, _, _ in rows] == list(range(1, 31))
        assert all(p == n + 1 for n, p, _ in rows)
        assert all(stable for _, _, stable in rows)
        assert elapsed < 5.0


def test_03_ternary_counterexample(tmp_path):
    with criterion(3, "ternary fixed point is out of scope, exit 2"):
        phi = Morphism.parse(TERNARY_MOR)
        word = morphisms.fixed_point(phi, "0")
        assert word.prefix(32).text() == "01212212221222212222212222221222"
        assert morphisms.recurrence_status(phi, "0") == \
            Recurrence("NotRecurrent", "0")
        assert isinstance(stammer.witnesses_for_morphic(phi, "0", 4),
                          NotApplicable)
        path = tmp_path / "ternary.mor"
        path.write_text(TERNARY_MOR)
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = cli.main(["witness", "--morphism", str(path),
                             "--depth", "4"])
        assert code == 2
        assert out.getvalue().startswith("NotApplicable:")


def test_04_three_case_extraction_bounds():
    with criterion(4, "extraction bounds on Fibonacci, n = 5..200"):
        fib = _fib_source()
        start = time.perf_counter()
        for n in range(5, 201):
            ws, _ = stammer.extract_witness(fib, n, kappa=2)
            assert stammer.verify_witness(fib, ws)
            assert len(ws.u) <= 2 * n
            assert 4 * len(ws.v) >= n
            assert ws.w >= F(3, 2)
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0


def test_05_uniform_morphism_witnesses():
    with criterion(5, "Thue-Morse witnesses, w = 3/2, ratio <= 1"):
        A = KAutomaton.parse(TM_AUT)
        sigma, coding = automata.to_uniform_morphism(A)
        seq = stammer.witnesses_for_automatic(sigma, coding, 15)
        word = automata.generate(A)
        assert len(seq) == 15
        for ws in seq:
            assert ws.w == F(3, 2)
            assert ws.ratio <= 1
            assert stammer.verify_witness(word, ws)


def test_06_polynomial_identity_random_instances():
    with criterion(6, "closed-form value of periodized digits, 1000 draws"):
        rng = random.Random(1618)
        start = time.perf_counter()
        for _ in range(1000):
            b = rng.choice((2, 3, 10))
            r = rng.randrange(0, 51)
            s = rng.randrange(1, 51)
            a = [rng.randrange(b) for _ in range(r + s)]
            ap = periodic_approximant(a, r, s)
            head = sum(a[k - 1] * b ** (r - k) for k in range(1, r + 1))
            block = sum(a[r + i - 1] * b ** (s - i) for i in range(1, s + 1))
            oracle = F(head, b ** r) + F(block, b ** r * (b ** s - 1))
            assert ap.value(b) == oracle
            assert len(ap.polynomial) - 1 <= r + s - 1
            bound = 2 * max(a) if any(a) else 0
            assert all(abs(c) <= bound for c in ap.polynomial)
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0


def test_07_pattern_counting_series():
    with criterion(7, "parity of digit 1 in base 3 sums to 2/3"):
        src = pattern_count_digits(3, "1", 2)
        e = [int(t) for t in src.prefix_symbols(3 ** 8)]
        total = sum(F(e[n], 2 ** n) for n in range(61))
        assert abs(total - F(2, 3)) <= F(1, 2 ** 58)
        for n in range(3 ** 8):
            digits = "0" if n == 0 else ""
            m = n
            while m:
                digits = str(m % 3) + digits
                m //= 3
            assert e[n] == digits.count("1") % 2 == n % 2


def test_08_padic_valuation_of_periodization():
    with criterion(8, "p-adic valuation >= r + ceil(w*s) + 1"):
        fib = _fib_source()
        witnesses = list(stammer.witnesses_for_morphic(
            Morphism.parse(FIB_MOR), "0", 8))
        for n in (5, 10, 20, 40):
            ws, _ = stammer.extract_witness(fib, n, kappa=2)
            witnesses.append(ws)
        for p in (2, 3, 5):
            for ws in witnesses:
                r, s = len(ws.u), len(ws.v)
                digits = [int(t) for t in fib.prefix_symbols(r + 3 * s + 8)]
                ha = hensel_approximant(digits, r, s, p)
                need = r + math.ceil(ws.w * s) + 1
                assert ha.valuation >= need
                assert ha.certifies(ws.w)


def test_09_heights_and_product_formula():
    with criterion(9, "product formula and scale-invariant height"):
        rng = random.Random(2718)
        for _ in range(1000):
            m = rng.randint(1, 10 ** 9) * rng.choice((1, -1))
            assert product_over_places(m) == 1
        for _ in range(100):
            x = tuple(rng.randint(-999, 999) for _ in range(3))
            if not any(x):
                x = (1, 0, 0)
            lam = F(rng.randint(1, 99), rng.randint(1, 99))
            if rng.random() < 0.5:
                lam = -lam
            scaled = tuple(lam * c for c in x)
            assert vector_height(scaled) == vector_height(x)
        assert vector_height((2, 4, 6)) == vector_height((1, 2, 3))


def test_10_subspace_audit_regression():
    with criterion(10, "audit enclosures reproduce the frozen run"):
        with open("tests/data/audit_fixture.json") as fh:
            fixture = json.load(fh)
        fib = _fib_source()
        seq = stammer.witnesses_for_morphic(Morphism.parse(FIB_MOR), "0", 10)
        audited = []
        for ws in seq:
            s = len(ws.v)
            if s < 30:
                continue
            audited.append(s)
            rep = subspace_audit(approximant_vector(fib, 2, len(ws.u), s),
                                 fib, 2, w=ws.w)
            assert rep.exponent_strictly_below(-3)
            want = fixture[str(s)]
            assert rep.digits_used == want["digitsUsed"]
            assert str(rep.x[2]) == want["x3"]
            got_lo = "%d/%d" % (rep.linear_form_lower.numerator,
                                rep.linear_form_lower.denominator)
            got_hi = "%d/%d" % (rep.linear_form_upper.numerator,
                                rep.linear_form_upper.denominator)
            assert got_lo == want["linearFormLower"]
            assert got_hi == want["linearFormUpper"]
            assert repr(rep.exponent_lower) == want["exponentLower"]
            assert repr(rep.exponent_upper) == want["exponentUpper"]
            assert want["belowMinus3"] is True
        assert sorted(audited) == sorted(int(k) for k in fixture)


def test_11_beta_expansion_periodicity_and_classification():
    with criterion(11, "golden-ratio orbits repeat and re-sum exactly"):
        fld = QuadraticField(1, 1)
        rng = random.Random(1729)
        seen = set()
        while len(seen) < 20:
            den = rng.randint(2, 40)
            num = rng.randint(1, den - 1)
            seen.add(F(num, den))
        for xi in sorted(seen):
            orbit = beta_orbit_period(xi, fld)
            assert orbit.period >= 1
            value = periodic_beta_value(fld, orbit.digits,
                                        orbit.preperiod, orbit.period)
            assert value == fld.element(xi)
        assert classify_algebraic_integer(
            AlgebraicIntegerSpec((1, -1, -1))).kind == "Pisot"
        assert classify_algebraic_integer(
            AlgebraicIntegerSpec((1, -2))).kind == "Pisot"
        assert classify_algebraic_integer(
            AlgebraicIntegerSpec((1, -1, -1, -1, 1))).kind == "Salem"
