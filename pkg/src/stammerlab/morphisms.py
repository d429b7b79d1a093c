"""Morphisms between free monoids, fixed points, growth tables, recurrence.

File format (plain text, '#' comments):

    source 0 1
    target 0 1
    map 0 -> 01
    map 1 -> 0
    start 0

Images are written concatenated when every target symbol is a single
character, space-separated otherwise; the empty word is spelled "eps".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .words import Alphabet, SequenceSource, Word


class NotProlongable(ValueError):
    """The morphism does not generate an infinite fixed point at this letter."""


class FiniteImage(ValueError):
    """An erasing morphism maps the remaining input to the empty word."""


class MorphismParseError(ValueError):
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


class Morphism:
    """Letter-to-word substitution from a source alphabet into a target one."""

    def __init__(self, source: Alphabet, target: Alphabet,
                 images: dict[str, Union[str, Word]],
                 start: Optional[str] = None):
        self.source = source
        self.target = target
        imgs = {}
        for letter in source:
            if letter not in images:
                raise ValueError("no image for letter %r" % letter)
            imgs[letter] = target.word(Word(images[letter]))
        extra = set(images) - set(source.symbols)
        if extra:
            raise ValueError("images for symbols outside the source alphabet: %r"
                             % sorted(extra))
        if start is not None and start not in source:
            raise ValueError("start letter %r not in source alphabet" % start)
        self.images = imgs
        self.start = start

    def __call__(self, w: Union[str, Word]) -> Word:
        return self.apply(w)

    def apply(self, w: Union[str, Word]) -> Word:
        out: list[str] = []
        for c in Word(w):
            out.extend(self.images[c].symbols)
        return Word(out)

    def apply_letter(self, c: str) -> Word:
        return self.images[c]

    def uniform_length(self) -> Optional[int]:
        """k if every image has length exactly k, else None."""
        lengths = {len(img) for img in self.images.values()}
        return lengths.pop() if len(lengths) == 1 else None

    def is_erasing(self) -> bool:
        return any(len(img) == 0 for img in self.images.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.images == other.images and self.start == other.start)

    def __repr__(self) -> str:
        maps = ", ".join("%s->%s" % (c, self.images[c].text() or "eps")
                         for c in self.source)
        return "Morphism(%s)" % maps

    # -- serialization ----------------------------------------------------

    def serialize(self) -> str:
        lines = ["source " + " ".join(self.source.symbols),
                 "target " + " ".join(self.target.symbols)]
        single = all(len(s) == 1 for s in self.target.symbols)
        for letter in self.source:
            img = self.images[letter]
            if len(img) == 0:
                spelled = "eps"
            elif single:
                spelled = "".join(img.symbols)
            else:
                spelled = " ".join(img.symbols)
            lines.append("map %s -> %s" % (letter, spelled))
        if self.start is not None:
            lines.append("start " + self.start)
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, filename: Optional[str] = None) -> "Morphism":
        source = target = None
        raw_maps: list[tuple[str, str, int]] = []
        start = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            kw = parts[0]
            if kw == "source":
                source = parts[1:]
            elif kw == "target":
                target = parts[1:]
            elif kw == "map":
                if len(parts) < 4 or parts[2] != "->":
                    raise MorphismParseError("expected 'map <letter> -> <word>'",
                                             lineno, filename)
                raw_maps.append((parts[1], " ".join(parts[3:]), lineno))
            elif kw == "start":
                if len(parts) != 2:
                    raise MorphismParseError("expected 'start <letter>'",
                                             lineno, filename)
                start = parts[1]
            else:
                raise MorphismParseError("unknown directive %r" % kw,
                                         lineno, filename)
        if source is None or target is None:
            raise MorphismParseError("missing 'source' or 'target' line",
                                     None, filename)
        try:
            src, tgt = Alphabet(source), Alphabet(target)
        except ValueError as e:
            raise MorphismParseError(str(e), None, filename)
        single = all(len(s) == 1 for s in tgt.symbols)
        images: dict[str, Word] = {}
        for letter, spelled, lineno in raw_maps:
            if letter in images:
                raise MorphismParseError("duplicate map for %r" % letter,
                                         lineno, filename)
            if spelled == "eps":
                images[letter] = Word()
                continue
            tokens = spelled.split()
            if single and len(tokens) == 1:
                tokens = list(tokens[0])
            bad = [t for t in tokens if t not in tgt]
            if bad:
                raise MorphismParseError("symbols %r not in target alphabet" % bad,
                                         lineno, filename)
            images[letter] = Word(tokens)
        missing = [c for c in src if c not in images]
        if missing:
            raise MorphismParseError("missing images for %r" % missing,
                                     None, filename)
        try:
            return cls(src, tgt, images, start=start)
        except ValueError as e:
            raise MorphismParseError(str(e), None, filename)

    @classmethod
    def parse_file(cls, path) -> "Morphism":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.parse(fh.read(), filename=str(path))


def mortal_letters(phi: Morphism) -> frozenset[str]:
    """Letters whose iterated image is eventually empty (exact fixpoint)."""
    if phi.source != phi.target:
        raise ValueError("mortality needs source == target")
    mortal = {c for c in phi.source if len(phi.images[c]) == 0}
    changed = True
    while changed:
        changed = False
        for c in phi.source:
            if c not in mortal and all(s in mortal for s in phi.images[c]):
                mortal.add(c)
                changed = True
    return frozenset(mortal)


def is_prolongable(phi: Morphism, a: str) -> bool:
    """True iff phi(a) = a·W with W nonempty and not entirely mortal."""
    if phi.source != phi.target:
        raise ValueError("prolongability needs source == target")
    if a not in phi.source:
        raise ValueError("letter %r not in alphabet" % a)
    img = phi.images[a]
    if len(img) < 2 or img[0] != a:
        return False
    dead = mortal_letters(phi)
    return any(s not in dead for s in img[1:])


def fixed_point(phi: Morphism, a: str) -> SequenceSource:
    """The infinite fixed point of phi starting at a, generated lazily.

    Pointer method: keep a buffer that always equals phi(first k letters of
    the buffer itself).  For a prolongable morphism |phi(u_1..u_k)| > k for
    every k (otherwise some prefix would be a finite fixed word, impossible
    since |phi^n(a)| is unbounded), so the read pointer never catches up.
    """
    if not is_prolongable(phi, a):
        raise NotProlongable("morphism is not prolongable at %r" % a)

    images = {c: phi.images[c].symbols for c in phi.source}

    def factory() -> Iterator[str]:
        buf = list(images[a])
        pos = 1
        emitted = 0
        while True:
            while emitted < len(buf):
                yield buf[emitted]
                emitted += 1
            assert pos < len(buf), "pointer overtook buffer on prolongable input"
            buf.extend(images[buf[pos]])
            pos += 1

    return SequenceSource(phi.source, factory,
                          name="fixpoint(%s,%s)" % (_short(phi), a))


def _short(phi: Morphism) -> str:
    return ",".join("%s>%s" % (c, phi.images[c].text() or "eps")
                    for c in phi.source)


@dataclass(frozen=True)
class Recurrence:
    """Outcome of a bounded recurrence scan."""

    kind: str  # "Recurrent" | "NotRecurrent" | "Undetermined"
    letter: Optional[str] = None

    def __str__(self) -> str:
        if self.kind == "NotRecurrent":
            return "NotRecurrent(%s)" % self.letter
        return self.kind


RECURRENT = Recurrence("Recurrent")
UNDETERMINED = Recurrence("Undetermined")


def recurrence_status(phi: Morphism, a: str, scan_limit: int = 10 ** 5) -> Recurrence:
    """Scan prefix(scan_limit) of the fixed point for letters occurring once.

    Claims are relative to the scanned prefix: "Recurrent" means every letter
    seen so far was seen at least twice.  NotRecurrent(x) is only reported
    with a certificate that x cannot reappear: x occurs once, at position 1,
    x appears in no image except phi(x), and there only as the first letter
    (then any later occurrence would be generated by an earlier one, and
    there is none).  Anything else is Undetermined.
    """
    u = fixed_point(phi, a)
    prefix = u.prefix_symbols(scan_limit)
    counts: dict[str, int] = {}
    first_pos: dict[str, int] = {}
    for idx, s in enumerate(prefix, start=1):
        counts[s] = counts.get(s, 0) + 1
        first_pos.setdefault(s, idx)
    singles = [s for s, c in counts.items() if c == 1]
    if not singles:
        return RECURRENT
    for x in sorted(singles, key=phi.source.index):
        if first_pos[x] != 1 or x != a:
            continue
        in_other_image = any(x in phi.images[y].symbols
                             for y in phi.source if y != x)
        own = phi.images[x].symbols
        if not in_other_image and own.count(x) == 1 and own[0] == x \
                and not phi.is_erasing():
            return Recurrence("NotRecurrent", x)
    return UNDETERMINED


@dataclass(frozen=True)
class GrowthTable:
    """Exact image lengths |phi^n(j)| for n = 0..N, one row per n."""

    letters: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]

    def length(self, n: int, letter: str) -> int:
        return self.rows[n][self.letters.index(letter)]

    def argmax_letter(self, n: int) -> str:
        """Letter with the largest |phi^n(.)|; ties go to alphabet order."""
        row = self.rows[n]
        best = max(row)
        return self.letters[row.index(best)]


def growth_table(phi: Morphism, N: int) -> GrowthTable:
    if phi.source != phi.target:
        raise ValueError("growth table needs source == target")
    letters = phi.source.symbols
    # counts[j][c] = multiplicity of letter c in phi(j)
    counts = []
    for j in letters:
        img = phi.images[j].symbols
        counts.append(tuple(img.count(c) for c in letters))
    rows = [tuple(1 for _ in letters)]
    for _ in range(N):
        prev = rows[-1]
        rows.append(tuple(sum(m * prev[ci] for ci, m in enumerate(counts[ji]))
                          for ji in range(len(letters))))
    return GrowthTable(letters, tuple(rows))


def morphic_image(psi: Morphism, u: SequenceSource,
                  erasure_cap: int = 10 ** 6) -> SequenceSource:
    """The lazy image psi(u_1)psi(u_2)...

    For an erasing psi the stream may be finite; generation raises
    FiniteImage after erasure_cap consecutive input letters produce nothing.
    """
    if u.alphabet != psi.source:
        raise ValueError("source alphabet mismatch: %r vs %r"
                         % (u.alphabet, psi.source))
    images = {c: psi.images[c].symbols for c in psi.source}
    erasing = psi.is_erasing()

    def factory() -> Iterator[str]:
        i = 1
        barren = 0
        while True:
            img = images[u.symbol_at(i)]
            i += 1
            if img:
                barren = 0
                yield from img
            elif erasing:
                barren += 1
                if barren >= erasure_cap:
                    raise FiniteImage(
                        "no output after %d erased input letters" % barren)

    return SequenceSource(psi.target, factory,
                          name="image(%s,%s)" % (_short(psi), u.name))
