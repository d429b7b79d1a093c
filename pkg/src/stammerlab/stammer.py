"""Extraction and verification of stammering repetition witnesses.

A witness (U, V, w) certifies that U·V^w is a prefix of a sequence, with
w > 1 an exact rational.  Witness sequences with bounded |U|/|V| and
strictly increasing |V| are the combinatorial evidence consumed by the
transcendence audits in the approximants module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .morphisms import (Morphism, NotProlongable, fixed_point, growth_table,
                        is_prolongable, morphic_image)
from .words import (Rational, SequenceSource, Word, _max_power_in,
                    fractional_power, is_prefix)


class NoRepeat(ValueError):
    """All length-n factors of the prefix are distinct.

    Doubles as an empirical complexity probe: no repeat in prefix((k+1)n)
    means p(n) > k*n on that prefix.
    """


class ExtractionBug(RuntimeError):
    """An internal reconstruction identity failed; must never happen."""


@dataclass(frozen=True)
class StammerWitness:
    u: Word
    v: Word
    w: Fraction
    source_id: str = ""
    index_parameter: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "u", Word(self.u))
        object.__setattr__(self, "v", Word(self.v))
        object.__setattr__(self, "w", Fraction(self.w))
        if len(self.v) < 1:
            raise ValueError("witness needs |V| >= 1")
        if self.w <= 1:
            raise ValueError("witness needs w > 1, got %s" % self.w)

    @property
    def ratio(self) -> Fraction:
        return Fraction(len(self.u), len(self.v))

    def prefix_word(self) -> Word:
        return self.u + fractional_power(self.v, self.w)

    def as_record(self, verified: Optional[bool] = None) -> dict:
        rec = {
            "source": self.source_id,
            "n": self.index_parameter,
            "uLen": len(self.u),
            "vLen": len(self.v),
            "w": {"num": self.w.numerator, "den": self.w.denominator},
            "ratio": {"num": self.ratio.numerator, "den": self.ratio.denominator},
        }
        if verified is not None:
            rec["verified"] = verified
        return rec


@dataclass(frozen=True)
class WitnessSequence:
    """Ordered witnesses with strictly increasing |V|."""

    witnesses: tuple[StammerWitness, ...]

    def __post_init__(self):
        object.__setattr__(self, "witnesses", tuple(self.witnesses))
        lengths = [len(ws.v) for ws in self.witnesses]
        if any(b <= a for a, b in zip(lengths, lengths[1:])):
            raise ValueError("|V| must be strictly increasing, got %r" % lengths)

    @property
    def ratio_bound(self) -> Fraction:
        if not self.witnesses:
            return Fraction(0)
        return max(ws.ratio for ws in self.witnesses)

    @property
    def shared_w(self) -> Optional[Fraction]:
        if not self.witnesses:
            return None
        return min(ws.w for ws in self.witnesses)

    def __len__(self) -> int:
        return len(self.witnesses)

    def __iter__(self):
        return iter(self.witnesses)


@dataclass(frozen=True)
class NotApplicable:
    """Constructive witness extraction does not apply to this input."""

    reason: str


def verify_witness(a: SequenceSource, ws: StammerWitness) -> bool:
    return is_prefix(ws.prefix_word(), a)


def pigeonhole_repeat(P: Union[str, Word], n: int) -> tuple[int, int, Word]:
    """Leftmost pair (i, j), i < j, of occurrences of a repeated length-n factor.

    Minimizes i first, then j.  Raises NoRepeat when all factors are distinct.
    """
    P = Word(P)
    if n < 1 or n > len(P):
        raise ValueError("need 1 <= n <= |P|")
    first: dict[tuple[str, ...], int] = {}
    best: Optional[tuple[int, int]] = None
    for k in range(len(P) - n + 1):
        f = P.symbols[k:k + n]
        at = first.get(f)
        if at is None:
            first[f] = k
        elif at >= 0:
            pair = (at, k)
            if best is None or pair < best:
                best = pair
            first[f] = -1  # later occurrences can only give worse pairs
    if best is None:
        raise NoRepeat("all %d-factors distinct in prefix of length %d"
                       % (n, len(P)))
    i, j = best
    return i, j, P[i:i + n]


@dataclass(frozen=True)
class ExtractionTrace:
    """Decomposition bookkeeping for one witness extraction.

    The scanned prefix always factors as a·m·c·d = a·b·m·d with the two
    occurrences of m at offsets i < j.  Which of e, f, t, reps are set
    depends on the fired case.
    """

    n: int
    kappa: int
    case: str  # "i" | "ii" | "iii"
    i: int
    j: int
    m: Word
    a: Word
    b: Word
    c: Word
    d: Word
    e: Optional[Word] = None
    f: Optional[Word] = None
    t: Optional[int] = None
    reps: Optional[int] = None


def extract_witness(a: SequenceSource, n: int,
                    kappa: int = 2) -> tuple[StammerWitness, ExtractionTrace]:
    """Witness from a repeated length-n factor in prefix((kappa+1)*n).

    Three cases on the gap B between the two occurrences of the repeat M:
    disjoint occurrences give (A, M·E, 1 + 1/kappa); heavily overlapping
    ones give local periodicity and exponent 2.  Every returned witness
    satisfies |U| <= kappa*n, |V| >= n/4, w >= 1 + 1/kappa and verifies.
    """
    if kappa < 2:
        raise ValueError("kappa must be >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    L = (kappa + 1) * n
    P = a.prefix(L)
    i, j, M = pigeonhole_repeat(P, n)
    A = P[:i]
    B = P[i:j]
    C = P[i + n:j + n]
    D = P[j + n:]
    third = -(-n // 3)

    if len(B) > n:
        # occurrences are disjoint: prefix = A M E M D, take V = M E
        E = P[i + n:j]
        if P != A + M + E + M + D:
            raise ExtractionBug("case i reconstruction failed at n=%d" % n)
        V = M + E
        w = 1 + Fraction(1, kappa)
        trace = ExtractionTrace(n, kappa, "i", i, j, M, A, B, C, D, e=E)
    elif len(B) >= third:
        # overlap with a long shift: B repeats immediately after itself
        E = P[i + third:j]
        F = P[j + len(B):]
        M13 = M[:third]
        if P != A + M13 + E + M13 + E + F:
            raise ExtractionBug("case ii reconstruction failed at n=%d" % n)
        V = M13 + E
        w = Fraction(2)
        trace = ExtractionTrace(n, kappa, "ii", i, j, M, A, B, C, D, e=E, f=F)
    else:
        # tiny shift: M itself is B-periodic, take V = B^(t//2)
        t = n // len(B)
        reps = t // 2
        if t < 3:
            raise ExtractionBug("case iii with t=%d < 3 at n=%d" % (t, n))
        if M[:t * len(B)] != B * t:
            raise ExtractionBug("case iii periodicity failed at n=%d" % n)
        V = B * reps
        w = Fraction(2)
        if P[i:i + 2 * len(V)] != V + V:
            raise ExtractionBug("case iii square failed at n=%d" % n)
        trace = ExtractionTrace(n, kappa, "iii", i, j, M, A, B, C, D,
                                t=t, reps=reps)

    witness = StammerWitness(A, V, w, source_id=a.name, index_parameter=n)
    if not verify_witness(a, witness):
        raise ExtractionBug("witness failed verification at n=%d" % n)
    if len(A) > kappa * n or 4 * len(V) < n or w < 1 + Fraction(1, kappa):
        raise ExtractionBug("witness bounds violated at n=%d" % n)
    return witness, trace


def witnesses_for_automatic(sigma: Morphism, coding: Morphism, m: int,
                            start: Optional[str] = None) -> WitnessSequence:
    """Witnesses for the coding of a uniform fixed point, w = 1 + 1/r.

    Over an r-letter alphabet some letter repeats within the first r+1
    letters of the fixed point, giving a prefix W1·x·W2·x.  Iterating sigma
    on (W1, x·W2) yields witnesses with |U|/|V| <= r-1.
    """
    k = sigma.uniform_length()
    if k is None:
        raise ValueError("sigma must be uniform")
    start = start if start is not None else sigma.start
    if start is None:
        raise ValueError("no start letter given and none recorded on sigma")
    if not is_prolongable(sigma, start):
        raise NotProlongable("sigma is not prolongable at %r" % start)
    r = len(sigma.source)
    u = fixed_point(sigma, start)
    head = u.prefix_symbols(r + 1)
    seen: dict[str, int] = {}
    i = j = -1
    for idx, letter in enumerate(head):
        if letter in seen:
            i, j = seen[letter], idx
            break
        seen[letter] = idx
    assert j >= 0, "pigeonhole cannot fail on r+1 letters"
    W1 = Word(head[:i])
    core = Word(head[i:j])  # the repeated letter followed by W2
    coded = morphic_image(coding, u)
    w = 1 + Fraction(1, r)
    out = []
    cur1, cur2 = W1, core
    for idx_n in range(1, m + 1):
        cur1 = sigma.apply(cur1)
        cur2 = sigma.apply(cur2)
        witness = StammerWitness(coding.apply(cur1), coding.apply(cur2), w,
                                 source_id=coded.name, index_parameter=idx_n)
        if not verify_witness(coded, witness):
            raise ExtractionBug("uniform witness failed at n=%d" % idx_n)
        if witness.ratio > r - 1:
            raise ExtractionBug("ratio bound broken at n=%d" % idx_n)
        out.append(witness)
    return WitnessSequence(tuple(out))


def witnesses_for_morphic(phi: Morphism, start: str, m: int,
                          scan_limit: int = 10 ** 4
                          ) -> Union[WitnessSequence, NotApplicable]:
    """Witnesses from two occurrences of a maximal-growth letter.

    Picks the letter a* maximizing |phi^m(.)| (ties by alphabet order) and
    emits witnesses at every depth n <= m where a* attains the row maximum,
    provided a* occurs at least twice in prefix(scan_limit) of the fixed
    point; otherwise the construction does not apply.
    """
    if not is_prolongable(phi, start):
        raise NotProlongable("phi is not prolongable at %r" % start)
    gt = growth_table(phi, m)
    a_star = gt.argmax_letter(m)
    col = gt.letters.index(a_star)
    depths = [n for n in range(1, m + 1) if gt.rows[n][col] == max(gt.rows[n])]
    u = fixed_point(phi, start)
    head = u.prefix_symbols(scan_limit)
    occurrences = [idx for idx, s in enumerate(head) if s == a_star]
    if len(occurrences) < 2:
        return NotApplicable(
            "max-growth letter %r occurs %d time(s) in prefix(%d)"
            % (a_star, len(occurrences), scan_limit))
    i1, i2 = occurrences[0], occurrences[1]
    W1 = Word(head[:i1])
    W2 = Word(head[i1 + 1:i2])
    w = 1 + Fraction(1, len(W2) + 1)
    out = []
    cur1, cur2 = W1, Word([a_star]) + W2
    prev_len = 0
    for n in range(1, m + 1):
        cur1 = phi.apply(cur1)
        cur2 = phi.apply(cur2)
        if n not in depths:
            continue
        if len(cur2) <= prev_len:
            continue  # keep |V| strictly increasing
        witness = StammerWitness(cur1, cur2, w, source_id=u.name,
                                 index_parameter=n)
        if not verify_witness(u, witness):
            raise ExtractionBug("morphic witness failed at n=%d" % n)
        out.append(witness)
        prev_len = len(cur2)
    if not out:
        return NotApplicable("no verified witness up to depth %d" % m)
    return WitnessSequence(tuple(out))


def witness_hunt(a: SequenceSource, w_min: Rational, ratio_cap: Rational,
                 L: int, budget: Optional[int] = None) -> WitnessSequence:
    """Brute-force search for witnesses inside prefix(L).

    Scans splits by increasing |V| then increasing |U|, keeping for each
    |V| the first split whose maximal exponent reaches w_min with
    |U|/|V| <= ratio_cap.  Work is capped at roughly `budget` symbol
    comparisons (default 4*L^2) for predictable runtime; the scan order is
    fixed, so results are deterministic.
    """
    w_min = Fraction(w_min)
    ratio_cap = Fraction(ratio_cap)
    if w_min <= 1:
        raise ValueError("wMin must be > 1")
    if budget is None:
        budget = 4 * L * L
    t = a.prefix_symbols(L)
    out = []
    spent = 0
    for v_len in range(1, L // 2 + 1):
        if spent >= budget:
            break
        u_max = min(int(ratio_cap * v_len), L - v_len)
        for u_len in range(0, u_max + 1):
            matched, _ = _max_power_in(t, u_len, v_len)
            spent += matched
            if matched >= w_min * v_len:
                out.append(StammerWitness(Word(t[:u_len]),
                                          Word(t[u_len:u_len + v_len]),
                                          Fraction(matched, v_len),
                                          source_id=a.name))
                break
            if spent >= budget:
                break
    return WitnessSequence(tuple(out))
