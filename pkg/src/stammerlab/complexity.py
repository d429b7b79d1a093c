"""Subword complexity on prefixes and eventual-periodicity detection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .words import SequenceSource, Word


class WindowTooShort(ValueError):
    """The word is shorter than the requested factor length."""


def _encode(symbols: tuple[str, ...]) -> str:
    """Injective symbol-to-char encoding so factor sets become substring sets."""
    if all(len(s) == 1 for s in symbols):
        return "".join(symbols)
    table = {s: chr(i) for i, s in enumerate(sorted(set(symbols)))}
    return "".join(table[s] for s in symbols)


def factor_count(P: Union[str, Word], n: int) -> int:
    """Number of distinct length-n factors of P."""
    P = Word(P)
    if n < 1 or n > len(P):
        raise WindowTooShort("need 1 <= n <= |P|, got n=%d |P|=%d" % (n, len(P)))
    s = _encode(P.symbols)
    return len({s[i:i + n] for i in range(len(s) - n + 1)})


@dataclass(frozen=True)
class ComplexityProfile:
    """p_L(n) for n = 1..nMax over prefix(L); a lower bound for the true p(n).

    stable[n-1] is set when the count did not change between window L//2
    and window L.
    """

    n_max: int
    window_length: int
    counts: tuple[int, ...]
    stable: tuple[bool, ...]

    def count(self, n: int) -> int:
        return self.counts[n - 1]

    def rows(self) -> list[tuple[int, int, bool]]:
        return [(n, self.counts[n - 1], self.stable[n - 1])
                for n in range(1, self.n_max + 1)]


def complexity_profile(a: SequenceSource, n_max: int,
                       L: Optional[int] = None) -> ComplexityProfile:
    if n_max < 1:
        raise ValueError("nMax must be >= 1")
    if L is None:
        L = max(10 ** 5, 64 * n_max)
    if L < 2 * n_max:
        raise ValueError("window L=%d too short for nMax=%d (need L >= 2*nMax)"
                         % (L, n_max))
    full = _encode(a.prefix_symbols(L))
    half = full[:L // 2]
    counts = []
    stable = []
    for n in range(1, n_max + 1):
        c_full = len({full[i:i + n] for i in range(len(full) - n + 1)})
        c_half = len({half[i:i + n] for i in range(len(half) - n + 1)}) \
            if n <= len(half) else 0
        counts.append(c_full)
        stable.append(c_full == c_half)
    return ComplexityProfile(n_max, L, tuple(counts), tuple(stable))


def detect_eventual_period(P: Union[str, Word]) -> Optional[tuple[int, int]]:
    """Smallest (q, s) by q+s then s with P[i] = P[i+s] for all i > q.

    Only reported when the period repeats at least twice in the scanned
    suffix (q + 2s <= |P|); returns None otherwise.
    """
    P = Word(P)
    N = len(P)
    if N < 2:
        raise ValueError("need |P| >= 2")
    s_enc = _encode(P.symbols)

    def min_preperiod(s: int) -> int:
        # P[q:N-s] == P[q+s:N] is monotone in q, so binary search the cutoff
        if s_enc[0:N - s] == s_enc[s:N]:
            return 0
        lo, hi = 0, N - s  # holds at hi (empty suffix), fails at lo
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if s_enc[mid:N - s] == s_enc[mid + s:N]:
                hi = mid
            else:
                lo = mid
        return hi

    best: Optional[tuple[int, int]] = None  # (q+s, s)
    for s in range(1, N // 2 + 1):
        q = min_preperiod(s)
        if q + 2 * s > N:
            continue
        key = (q + s, s)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    total, s = best
    return total - s, s
