"""Alphabets, finite words, fractional powers, and lazy infinite sequences.

Infinite sequences are indexed from 1; finite words from 0.  All exponents
are exact rationals (fractions.Fraction), never floats.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import ceil, floor
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, Union


class InvalidWord(ValueError):
    """A word fails a structural precondition (empty where nonempty needed)."""


class InvalidExponent(ValueError):
    """A fractional-power exponent is zero or negative."""


Rational = Union[int, Fraction]


class Alphabet:
    """Ordered finite set of distinct symbol tokens."""

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: Iterable[str]):
        syms = tuple(symbols)
        if not syms:
            raise ValueError("alphabet must be nonempty")
        if any(not isinstance(s, str) or not s for s in syms):
            raise ValueError("alphabet symbols must be nonempty strings")
        if len(set(syms)) != len(syms):
            raise ValueError("duplicate alphabet symbols: %r" % (syms,))
        self.symbols = syms
        self._index = {s: i for i, s in enumerate(syms)}

    @classmethod
    def digits(cls, b: int) -> "Alphabet":
        """The digit alphabet {0, 1, ..., b-1} as decimal tokens."""
        if b < 2:
            raise ValueError("need b >= 2")
        return cls(str(d) for d in range(b))

    def index(self, symbol: str) -> int:
        return self._index[symbol]

    def word(self, symbols: Iterable[str]) -> "Word":
        """Build a word, validating membership of every symbol."""
        w = Word(symbols)
        bad = [s for s in w.symbols if s not in self._index]
        if bad:
            raise InvalidWord("symbols %r not in alphabet %r" % (bad, self.symbols))
        return w

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._index

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return "Alphabet(%s)" % ", ".join(self.symbols)


class Word:
    """Immutable finite sequence of symbol tokens, indexed from 0."""

    __slots__ = ("symbols",)

    def __init__(self, symbols: Union[str, Iterable[str]] = ()):
        if isinstance(symbols, str):
            # a plain string means one single-character symbol per character
            self.symbols = tuple(symbols)
        elif isinstance(symbols, Word):
            self.symbols = symbols.symbols
        else:
            self.symbols = tuple(symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.symbols[i])
        return self.symbols[i]

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.symbols + Word(other).symbols)

    def __mul__(self, n: int) -> "Word":
        return Word(self.symbols * n)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Word):
            return self.symbols == other.symbols
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __bool__(self) -> bool:
        return bool(self.symbols)

    def text(self) -> str:
        """Render as a string: concatenated if all symbols are single chars."""
        if all(len(s) == 1 for s in self.symbols):
            return "".join(self.symbols)
        return " ".join(self.symbols)

    def __repr__(self) -> str:
        return "Word(%r)" % (self.text(),)


EMPTY_WORD = Word()


def fractional_power(W: Word, x: Rational) -> Word:
    """W^x: W repeated floor(x) times, then the prefix of ceil(frac(x)*|W|) symbols."""
    W = Word(W)
    if len(W) == 0:
        raise InvalidWord("cannot raise the empty word to a power")
    x = Fraction(x)
    if x <= 0:
        raise InvalidExponent("exponent must be positive, got %s" % x)
    whole = floor(x)
    rest = ceil((x - whole) * len(W))
    return W * whole + W[:rest]


class SequenceSource:
    """Deterministic infinite symbol sequence with 1-based indexed access.

    Wraps an infinite-iterator factory behind a memo buffer; the buffer only
    grows (by doubling), so repeated reads of an index always agree.  Buffer
    extension holds a lock, making concurrent reads safe.
    """

    def __init__(self, alphabet: Alphabet, factory: Callable[[], Iterator[str]],
                 name: str = "sequence"):
        self.alphabet = alphabet
        self.name = name
        self._factory = factory
        self._iter: Optional[Iterator[str]] = None
        self._buf: list[str] = []
        self._lock = threading.Lock()

    @classmethod
    def from_function(cls, alphabet: Alphabet, fn: Callable[[int], str],
                      name: str = "sequence") -> "SequenceSource":
        """Source whose index-i symbol (i >= 1) is fn(i)."""
        def factory() -> Iterator[str]:
            i = 1
            while True:
                yield fn(i)
                i += 1
        return cls(alphabet, factory, name)

    def _ensure(self, n: int) -> None:
        if len(self._buf) >= n:
            return
        with self._lock:
            if len(self._buf) >= n:
                return
            if self._iter is None:
                self._iter = self._factory()
            target = max(n, 2 * len(self._buf))
            buf = self._buf
            it = self._iter
            while len(buf) < target:
                buf.append(next(it))

    def symbol_at(self, i: int) -> str:
        if i < 1:
            raise IndexError("sequence indices start at 1, got %d" % i)
        self._ensure(i)
        return self._buf[i - 1]

    def prefix(self, L: int) -> Word:
        if L < 0:
            raise IndexError("prefix length must be >= 0")
        self._ensure(L)
        return Word(self._buf[:L])

    def prefix_symbols(self, L: int) -> tuple[str, ...]:
        """Like prefix() but returns the raw symbol tuple (no Word wrapper)."""
        self._ensure(L)
        return tuple(self._buf[:L])

    def __repr__(self) -> str:
        return "SequenceSource(%s)" % self.name


def is_prefix(P: Word, a: SequenceSource) -> bool:
    """True iff P equals the first |P| symbols of a."""
    P = Word(P)
    return P.symbols == a.prefix_symbols(len(P))


class MaxPower(NamedTuple):
    """Result of max_power_at: w = matched/vLen, with a truncation flag."""

    w: Fraction
    truncated: bool
    matched: int


def _max_power_in(t: tuple[str, ...], u_len: int, v_len: int) -> tuple[int, bool]:
    """Longest m with t[u_len:u_len+m] periodic of period v_len, m counted in symbols.

    Returns (m, hit_end): hit_end is true when the match ran off the end of t.
    """
    v = t[u_len:u_len + v_len]
    limit = len(t)
    pos = u_len + v_len
    matched = v_len
    # bulk compare one period at a time; slice equality is a memcmp
    while pos + v_len <= limit and t[pos:pos + v_len] == v:
        matched += v_len
        pos += v_len
    # trailing partial period, symbol by symbol
    k = 0
    while pos + k < limit and t[pos + k] == v[k % v_len]:
        k += 1
    matched += k
    return matched, pos + k >= limit


def max_power_at(a: SequenceSource, u_len: int, v_len: int,
                 scan_limit: int) -> MaxPower:
    """Largest w = m/vLen with prefix(uLen)·V^w a prefix of a, V = a[uLen+1..uLen+vLen].

    Scans at most scan_limit symbols; if no mismatch occurs before the limit
    the returned w is a lower bound and truncated is set.
    """
    if v_len < 1:
        raise ValueError("vLen must be >= 1")
    if u_len < 0 or u_len + v_len > scan_limit:
        raise ValueError("need 0 <= uLen and uLen + vLen <= scanLimit")
    t = a.prefix_symbols(scan_limit)
    matched, hit_end = _max_power_in(t, u_len, v_len)
    return MaxPower(Fraction(matched, v_len), hit_end, matched)
