"""Deterministic base-k automata reading digits least-significant-first.

File format (plain text, '#' comments), all transitions required:

    k 2
    states q0 q1
    initial q0
    output q0:0 q1:1
    delta q0 0 q0
    delta q0 1 q1
    delta q1 0 q1
    delta q1 1 q0
"""

from __future__ import annotations

from typing import Iterator, Optional

from .morphisms import Morphism, NotProlongable
from .words import Alphabet, SequenceSource


class AutomatonParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None,
                 filename: Optional[str] = None):
        self.line = line
        self.filename = filename
        where = ""
        if filename is not None:
            where += str(filename) + ":"
        if line is not None:
            where += "%d:" % line
        super().__init__((where + " " if where else "") + message)


class KAutomaton:
    """States, base k, total transition map, initial state, output map."""

    def __init__(self, k: int, states: tuple[str, ...], initial: str,
                 delta: dict[tuple[str, int], str], output: dict[str, str]):
        if k < 2:
            raise ValueError("need k >= 2")
        if len(set(states)) != len(states) or not states:
            raise ValueError("states must be nonempty and distinct")
        if initial not in states:
            raise ValueError("initial state %r unknown" % initial)
        for q in states:
            if q not in output:
                raise ValueError("no output symbol for state %r" % q)
            for d in range(k):
                if (q, d) not in delta:
                    raise ValueError("missing transition delta(%s, %d)" % (q, d))
                if delta[(q, d)] not in states:
                    raise ValueError("transition delta(%s, %d) -> unknown state %r"
                                     % (q, d, delta[(q, d)]))
        if len(delta) != len(states) * k:
            extra = [key for key in delta if key[0] not in states or not
                     (0 <= key[1] < k)]
            raise ValueError("unexpected transitions: %r" % extra)
        self.k = k
        self.states = states
        self.initial = initial
        self.delta = dict(delta)
        self.output = dict(output)
        # distinct output symbols, in first-use order over the state list
        seen: list[str] = []
        for q in states:
            if output[q] not in seen:
                seen.append(output[q])
        self.output_alphabet = Alphabet(seen)

    def run(self, n: int) -> str:
        """Output symbol for n: feed base-k digits of n, lowest first.

        The canonical expansion of 0 is the single digit 0.
        """
        if n < 0:
            raise ValueError("n must be >= 0")
        q = self.initial
        if n == 0:
            q = self.delta[(q, 0)]
        else:
            while n:
                q = self.delta[(q, n % self.k)]
                n //= self.k
        return self.output[q]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KAutomaton):
            return NotImplemented
        return (self.k == other.k and self.states == other.states
                and self.initial == other.initial and self.delta == other.delta
                and self.output == other.output)

    # -- serialization ----------------------------------------------------

    def serialize(self) -> str:
        lines = ["k %d" % self.k,
                 "states " + " ".join(self.states),
                 "initial " + self.initial,
                 "output " + " ".join("%s:%s" % (q, self.output[q])
                                      for q in self.states)]
        for q in self.states:
            for d in range(self.k):
                lines.append("delta %s %d %s" % (q, d, self.delta[(q, d)]))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, filename: Optional[str] = None) -> "KAutomaton":
        k = None
        states: Optional[list[str]] = None
        initial = None
        output: dict[str, str] = {}
        delta: dict[tuple[str, int], str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            kw = parts[0]
            if kw == "k":
                if len(parts) != 2 or not parts[1].isdigit():
                    raise AutomatonParseError("expected 'k <int>'", lineno, filename)
                k = int(parts[1])
            elif kw == "states":
                states = parts[1:]
            elif kw == "initial":
                if len(parts) != 2:
                    raise AutomatonParseError("expected 'initial <id>'",
                                              lineno, filename)
                initial = parts[1]
            elif kw == "output":
                for item in parts[1:]:
                    if ":" not in item:
                        raise AutomatonParseError("expected '<id>:<symbol>' in "
                                                  "output line", lineno, filename)
                    q, sym = item.split(":", 1)
                    if q in output:
                        raise AutomatonParseError("duplicate output for %r" % q,
                                                  lineno, filename)
                    output[q] = sym
            elif kw == "delta":
                if len(parts) != 4 or not parts[2].isdigit():
                    raise AutomatonParseError("expected 'delta <id> <digit> <id>'",
                                              lineno, filename)
                key = (parts[1], int(parts[2]))
                if key in delta:
                    raise AutomatonParseError("duplicate transition for "
                                              "(%s, %s)" % key, lineno, filename)
                delta[key] = parts[3]
            else:
                raise AutomatonParseError("unknown directive %r" % kw,
                                          lineno, filename)
        if k is None or states is None or initial is None:
            raise AutomatonParseError("missing 'k', 'states' or 'initial' line",
                                      None, filename)
        try:
            return cls(k, tuple(states), initial, delta, output)
        except ValueError as e:
            raise AutomatonParseError(str(e), None, filename)

    @classmethod
    def parse_file(cls, path) -> "KAutomaton":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.parse(fh.read(), filename=str(path))


def run(A: KAutomaton, n: int) -> str:
    return A.run(n)


def generate(A: KAutomaton, N: int = 0, align: int = 1) -> SequenceSource:
    """Sequence source over A's outputs; prefill the first N symbols.

    The machine family is naturally indexed from 0 while sources are indexed
    from 1.  With align=1 (default) the source's index-i symbol is run(A, i-1),
    i.e. the n=0 term comes first; align=0 drops it, putting run(A, i) at
    index i as a digit stream starting at n=1.
    """
    if align not in (0, 1):
        raise ValueError("align must be 0 or 1")
    offset = 1 - align

    def factory() -> Iterator[str]:
        n = offset
        while True:
            yield A.run(n)
            n += 1

    src = SequenceSource(A.output_alphabet, factory,
                         name="automaton(k=%d,align=%d)" % (A.k, align))
    if N > 0:
        src.prefix_symbols(N)
    return src


def to_uniform_morphism(A: KAutomaton) -> tuple[Morphism, Morphism]:
    """(sigma, coding) whose coded fixed point reproduces generate(A).

    Digits are fed least-significant-first, so position kn+d of the fixed
    point must extend position n on the inside of the run.  Plain states
    cannot express that; the digit-composition maps of A can.  Each state of
    sigma is a map h over the reachable part of A, following digit d sends h
    to q -> h(delta(q, d)), and the coding reads off output(h(q0)).  When
    delta(., 0) is not the identity map, a fresh seed state stands in for the
    identity with its 0-step redirected to itself, keeping sigma prolongable
    without disturbing any run (canonical digit strings never revisit it).
    For digit-order-insensitive automata such as Thue-Morse this collapses to
    sigma(q) = delta(q,0)...delta(q,k-1) over the original states.
    """
    if A.delta[(A.initial, 0)] != A.initial:
        raise NotProlongable("delta(q0, 0) must fix the initial state; "
                             "normalize the automaton first")
    reach = [A.initial]
    seen = {A.initial}
    for q in reach:
        for d in range(A.k):
            nxt = A.delta[(q, d)]
            if nxt not in seen:
                seen.add(nxt)
                reach.append(nxt)
    reach = tuple(sorted(reach, key=A.states.index))
    pos = {q: i for i, q in enumerate(reach)}
    ident = reach
    step = [tuple(A.delta[(q, d)] for q in reach) for d in range(A.k)]

    def follow(h, d):
        if h is None:  # seed: identity with a pinned 0-step
            return None if d == 0 else step[d]
        return tuple(h[pos[q]] for q in step[d])

    seed = ident if step[0] == ident else None
    order = [seed]
    names = {seed: "q0"}
    for h in order:
        for d in range(A.k):
            nxt = follow(h, d)
            if nxt not in names:
                names[nxt] = "q%d" % len(names)
                order.append(nxt)

    letters = Alphabet(tuple(names[h] for h in order))
    images = {names[h]: [names[follow(h, d)] for d in range(A.k)]
              for h in order}
    sigma = Morphism(letters, letters, images, start="q0")

    def value(h):
        q = A.initial if h is None else h[pos[A.initial]]
        return A.output[q]

    coding = Morphism(letters, A.output_alphabet,
                      {names[h]: [value(h)] for h in order})
    return sigma, coding


THUE_MORSE = KAutomaton(
    k=2,
    states=("q0", "q1"),
    initial="q0",
    delta={("q0", 0): "q0", ("q0", 1): "q1",
           ("q1", 0): "q1", ("q1", 1): "q0"},
    output={"q0": "0", "q1": "1"},
)
