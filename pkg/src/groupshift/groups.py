"""Finitely generated groups with decidable word problem.

Each group carries an ordered generator list (index = generator id) that is
closed under inverses and contains a distinguished identity symbol at id 0.
The declaration order is part of the group's identity: every lexicographic
construction in the library (word enumeration, ball scans, path direction
order) derives from it.

Elements are identified by a compact per-kind canonical key (reduced word,
exponent vector, affine pair, ...) rather than by materialized normal-form
words: words equal in the group map to the same key, and the canonical word
is derived from the key on demand.  This matters for machine runs, where
e.g. a 500-step walk in BS(1,2) reaches elements whose normal-form words
have exponentially many letters.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import MalformedInputError, SolverBudgetError

DEFAULT_REWRITE_BUDGET = 100_000
MAX_WORD_LETTERS = 1_000_000

Letters = tuple[int, ...]


@dataclass(frozen=True)
class GeneratorSymbol:
    id: int
    display: str
    inverse: int
    is_identity: bool = False


class Element:
    """A group element, identified by its canonical key."""

    __slots__ = ("key", "_hash")

    def __init__(self, key):
        object.__setattr__(self, "key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("Element is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Element) and self._hash == other._hash \
            and self.key == other.key

    def __repr__(self):  # pragma: no cover
        return f"Element({self.key!r})"


class ConsWord:
    """A persistent word (linked list) with O(1) append and cached hash.

    Used as the canonical key for free-group elements so that long machine
    runs extend tape keys in constant time instead of copying tuples.
    Pushes are hash-consed: equal words built by pushes from the same root
    are the same object, making equality checks effectively constant.
    """

    __slots__ = ("parent", "letter", "length", "_hash", "_kids")

    EMPTY: "ConsWord"

    def __init__(self, parent: Optional["ConsWord"], letter: int):
        self.parent = parent
        self.letter = letter
        self._kids: Optional[dict] = None
        if parent is None:
            self.length = 0
            self._hash = hash(("cons",))
        else:
            self.length = parent.length + 1
            self._hash = hash((parent._hash, letter))

    def push(self, letter: int) -> "ConsWord":
        if self._kids is None:
            self._kids = {}
        node = self._kids.get(letter)
        if node is None:
            node = ConsWord(self, letter)
            self._kids[letter] = node
        return node

    def letters(self) -> Letters:
        out = []
        node = self
        while node.parent is not None:
            out.append(node.letter)
            node = node.parent
        out.reverse()
        return tuple(out)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, ConsWord):
            return NotImplemented
        if self.length != other.length or self._hash != other._hash:
            return False
        a, b = self, other
        while a.parent is not None:
            if a is b:
                return True
            if a.letter != b.letter:
                return False
            a, b = a.parent, b.parent
        return b.parent is None

    def __repr__(self):  # pragma: no cover
        return f"ConsWord{self.letters()!r}"


ConsWord.EMPTY = ConsWord(None, -1)


def _paired_generators(names: Sequence[str]) -> list[GeneratorSymbol]:
    """Build the generator list e, g1, g1^-1, g2, g2^-1, ... from base names."""
    gens = [GeneratorSymbol(0, "e", 0, is_identity=True)]
    for i, name in enumerate(names):
        a = 1 + 2 * i
        gens.append(GeneratorSymbol(a, name, a + 1))
        gens.append(GeneratorSymbol(a + 1, name + "^-1", a))
    return gens


class Group:
    """Base class: a finitely generated group with a word-problem solver."""

    kind: str = "abstract"

    def __init__(self, generators: Sequence[GeneratorSymbol]):
        self.generators: tuple[GeneratorSymbol, ...] = tuple(generators)
        if not self.generators or not self.generators[0].is_identity:
            raise MalformedInputError("generator 0 must be the identity symbol")
        if sum(1 for g in self.generators if g.is_identity) != 1:
            raise MalformedInputError("exactly one identity generator expected")
        for g in self.generators:
            inv = self.generators[g.inverse]
            if inv.inverse != g.id:
                raise MalformedInputError(f"inverse of {g.display} is not an involution")
        self.identity = Element(self.identity_key())
        self._display_to_id = {g.display: g.id for g in self.generators}
        self._ball_cache: dict = {}

    # -- key algebra (implemented per kind) --------------------------------

    def identity_key(self):
        raise NotImplementedError

    def key_of_letters(self, letters: Iterable[int]):
        key = self.identity_key()
        for letter in letters:
            key = self.key_append(key, letter)
        return key

    def key_append(self, key, letter: int):
        raise NotImplementedError

    def key_multiply(self, a, b):
        raise NotImplementedError

    def key_inverse(self, a):
        raise NotImplementedError

    def key_letters(self, key) -> Letters:
        raise NotImplementedError

    def key_length(self, key) -> int:
        return len(self.key_letters(key))

    # -- word plumbing ------------------------------------------------------

    @property
    def nonidentity_ids(self) -> tuple[int, ...]:
        return tuple(g.id for g in self.generators if not g.is_identity)

    def check_word(self, word: Iterable[int]) -> Letters:
        w = tuple(word)
        n = len(self.generators)
        for letter in w:
            if not isinstance(letter, int) or not 0 <= letter < n:
                raise MalformedInputError(f"invalid letter id {letter!r}")
        return w

    def inverse_letter(self, letter: int) -> int:
        return self.generators[letter].inverse

    def inverse_word(self, word: Iterable[int]) -> Letters:
        return tuple(self.inverse_letter(x) for x in reversed(tuple(word)))

    def parse_word(self, text: str) -> Letters:
        """Parse a whitespace-separated word; the empty string is epsilon."""
        text = text.strip()
        if not text:
            return ()
        out: list[int] = []
        for token in text.split():
            if token in self._display_to_id:
                out.append(self._display_to_id[token])
                continue
            base, _, power = token.partition("^")
            if power and power.lstrip("-").isdigit() and power not in ("-1",):
                n = int(power)
                name = base if n >= 0 else base + "^-1"
                if name not in self._display_to_id:
                    raise MalformedInputError(f"unknown generator {token!r}")
                out.extend([self._display_to_id[name]] * abs(n))
                continue
            raise MalformedInputError(f"unknown generator {token!r}")
        return tuple(out)

    def format_word(self, word: Iterable[int]) -> str:
        """Plain whitespace-separated labels (the wire format)."""
        return " ".join(self.generators[x].display for x in word)

    def format_word_compressed(self, word: Iterable[int]) -> str:
        """Run-length rendering for display: 'a a a' -> 'a^3'."""
        parts = []
        for letter, run in itertools.groupby(word):
            n = len(list(run))
            g = self.generators[letter]
            if n == 1:
                parts.append(g.display)
            elif g.display.endswith("^-1"):
                parts.append(f"{g.display[:-3]}^-{n}")
            else:
                parts.append(f"{g.display}^{n}")
        return " ".join(parts)

    # -- elements ------------------------------------------------------------

    def canonical(self, word: Iterable[int]) -> Letters:
        """Normal-form word (materialized; prefer keys for heavy loops)."""
        return self.key_letters(self.key_of_letters(word))

    def element(self, word: Iterable[int]) -> Element:
        return Element(self.key_of_letters(self.check_word(word)))

    def word_of(self, e: Element) -> Letters:
        return self.key_letters(e.key)

    def length_of(self, e: Element) -> int:
        return self.key_length(e.key)

    def shortlex_key(self, e: Element) -> tuple[int, Letters]:
        w = self.word_of(e)
        return (len(w), w)

    def format_element(self, e: Element) -> str:
        w = self.word_of(e)
        return self.format_word_compressed(w) if w else "e"

    def multiply(self, a: Element, b: Element) -> Element:
        return Element(self.key_multiply(a.key, b.key))

    def multiply_letter(self, a: Element, letter: int) -> Element:
        if letter == 0:
            return a
        return Element(self.key_append(a.key, letter))

    def inverse_element(self, a: Element) -> Element:
        return Element(self.key_inverse(a.key))

    def is_identity_word(self, word: Iterable[int]) -> bool:
        return self.key_of_letters(self.check_word(word)) == self.identity_key()

    def is_finite(self) -> bool:
        return False

    # -- left-action frame keys (used by the literal-shift oracle) ---------

    def frame_identity(self):
        return self.identity_key()

    def frame_prepend(self, letter: int, lkey):
        """The key of letter * (element of lkey); letters act on the left."""
        if letter == 0:
            return lkey
        return self.key_multiply(self.key_of_letters((letter,)), lkey)

    def frame_of_element(self, e: Element):
        lkey = self.frame_identity()
        for letter in reversed(self.key_letters(e.key)):
            lkey = self.frame_prepend(letter, lkey)
        return lkey

    def geodesic_normal_form(self) -> bool:
        """Whether canonical-word length equals the word metric."""
        return False

    def geodesics_extend(self) -> bool:
        """Whether every element has arbitrarily long geodesic extensions
        (|g*b| = |g| + |b| for some b of any length).  Enables sound
        pruning in ball-cover scans."""
        return False

    def __repr__(self) -> str:  # pragma: no cover
        return f"<{type(self).__name__} S={[g.display for g in self.generators]}>"


def _default_name(i: int) -> str:
    base = "abcdefghijklmnopqrstuvwxyz"
    return base[i] if i < len(base) else f"g{i}"


class FreeGroup(Group):
    """Free group of given rank; canonical form is the freely reduced word."""

    kind = "free"

    def __init__(self, rank: int, names: Optional[Sequence[str]] = None):
        if rank < 1:
            raise MalformedInputError("free group rank must be >= 1")
        self.rank = rank
        names = list(names) if names else [_default_name(i) for i in range(rank)]
        self._inv = [0] + [1 + (i ^ 1) for i in range(2 * rank)]
        super().__init__(_paired_generators(names))

    def identity_key(self):
        return ConsWord.EMPTY

    def key_append(self, key: ConsWord, letter: int) -> ConsWord:
        if letter == 0:
            return key
        if key.parent is not None and key.letter == self.generators[letter].inverse:
            return key.parent
        return key.push(letter)

    def key_multiply(self, a: ConsWord, b: ConsWord) -> ConsWord:
        key = a
        for letter in b.letters():
            key = self.key_append(key, letter)
        return key

    def key_inverse(self, a: ConsWord) -> ConsWord:
        key = ConsWord.EMPTY
        node = a
        while node.parent is not None:
            key = key.push(self.generators[node.letter].inverse)
            node = node.parent
        return key

    def key_letters(self, key: ConsWord) -> Letters:
        return key.letters()

    def key_length(self, key: ConsWord) -> int:
        return key.length

    def frame_identity(self):
        # frame keys store the word reversed, so prepending is a push
        return ConsWord.EMPTY

    def frame_prepend(self, letter: int, lkey: ConsWord):
        if letter == 0:
            return lkey
        if lkey.parent is not None and lkey.letter == self.generators[letter].inverse:
            return lkey.parent
        return lkey.push(letter)

    def geodesic_normal_form(self) -> bool:
        return True

    def geodesics_extend(self) -> bool:
        return True


class FreeAbelianGroup(Group):
    """Z^rank; canonical form lists axes in order, each as a signed power."""

    kind = "free_abelian"

    def __init__(self, rank: int, names: Optional[Sequence[str]] = None):
        if rank < 1:
            raise MalformedInputError("free abelian rank must be >= 1")
        self.rank = rank
        default = ["x", "y", "z"] + [f"x{i}" for i in range(3, rank)]
        names = list(names) if names else default[:rank]
        super().__init__(_paired_generators(names))

    def identity_key(self):
        return (0,) * self.rank

    def key_append(self, key, letter: int):
        if letter == 0:
            return key
        axis, sign = divmod(letter - 1, 2)
        vec = list(key)
        vec[axis] += 1 if sign == 0 else -1
        return tuple(vec)

    def key_multiply(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def key_inverse(self, a):
        return tuple(-x for x in a)

    def key_letters(self, key) -> Letters:
        out: list[int] = []
        for axis, e in enumerate(key):
            letter = 1 + 2 * axis + (0 if e > 0 else 1)
            out.extend([letter] * abs(e))
        return tuple(out)

    def key_length(self, key) -> int:
        return sum(abs(x) for x in key)

    def exponents(self, word: Iterable[int]) -> tuple[int, ...]:
        return self.key_of_letters(word)

    def geodesic_normal_form(self) -> bool:
        return True

    def geodesics_extend(self) -> bool:
        return True


class BaumslagSolitarGroup(Group):
    """BS(1, n) with the relation a b = b a^n (equivalently b^-1 a b = a^n).

    Elements are affine maps x -> n^scale * x + t with t in Z[1/n]; keys are
    (scale, c, d) with t = c / n^d in lowest n-adic terms (no general gcd is
    ever taken, so long machine runs stay cheap).  The canonical word is
    b^p a^q b^-r with p, r >= 0 and n not dividing q when both p and r are
    positive.
    """

    kind = "bs"

    A, A_INV, B, B_INV = 1, 2, 3, 4

    def __init__(self, n: int):
        if n < 2:
            raise MalformedInputError("BS(1, n) requires n >= 2")
        self.n = n
        super().__init__(_paired_generators(["a", "b"]))

    def _norm(self, c: int, d: int) -> tuple[int, int]:
        n = self.n
        if c == 0:
            return (0, 0)
        while d > 0 and c % n == 0:
            c //= n
            d -= 1
        return (c, d)

    def _add(self, c1: int, d1: int, c2: int, d2: int) -> tuple[int, int]:
        n = self.n
        m = max(d1, d2)
        return self._norm(c1 * n ** (m - d1) + c2 * n ** (m - d2), m)

    def identity_key(self):
        return (0, 0, 0)

    def key_append(self, key, letter: int):
        if letter == 0:
            return key
        n = self.n
        scale, c, d = key
        if letter == self.B:
            return (scale - 1, c, d)
        if letter == self.B_INV:
            return (scale + 1, c, d)
        sign = 1 if letter == self.A else -1
        # t +/- n^scale
        if scale >= 0:
            c2, d2 = sign * n ** scale, 0
        else:
            c2, d2 = sign, -scale
        c, d = self._add(c, d, c2, d2)
        return (scale, c, d)

    def key_multiply(self, a, b):
        n = self.n
        s1, c1, d1 = a
        s2, c2, d2 = b
        # t = t1 + n^{s1} * t2
        if s1 >= d2:
            c2, d2 = c2 * n ** (s1 - d2), 0
        else:
            d2 = d2 - s1
        c, d = self._add(c1, d1, c2, d2)
        return (s1 + s2, c, d)

    def key_inverse(self, a):
        n = self.n
        s, c, d = a
        # t -> -n^{-s} * t
        d2 = d + s
        if d2 >= 0:
            c2, d2 = -c, d2
        else:
            c2, d2 = -c * n ** (-d2), 0
        return (-s, *self._norm(c2, d2))

    def _normal_form(self, key) -> tuple[int, int, int]:
        """(p, q, r) with the element equal to b^p a^q b^-r."""
        scale, c, d = key
        n = self.n
        if d >= -scale:
            return (d, c, scale + d)
        return (-scale, c * n ** (-scale - d), 0)

    def key_letters(self, key) -> Letters:
        p, q, r = self._normal_form(key)
        if p + abs(q) + r > MAX_WORD_LETTERS:
            raise MalformedInputError(
                "normal-form word too long to materialize; use keys")
        a_letter = self.A if q > 0 else self.A_INV
        return (self.B,) * p + (a_letter,) * abs(q) + (self.B_INV,) * r

    def key_length(self, key) -> int:
        p, q, r = self._normal_form(key)
        return p + abs(q) + r

    def format_element(self, e: Element) -> str:
        p, q, r = self._normal_form(e.key)
        parts = []
        if p:
            parts.append("b" if p == 1 else f"b^{p}")
        if q:
            parts.append("a" if q == 1 else f"a^{q}")
        if r:
            parts.append("b^-1" if r == 1 else f"b^-{r}")
        return " ".join(parts) if parts else "e"


class FiniteGroup(Group):
    """A finite group given by its full multiplication table.

    Element i of the table is generator id i; id 0 is the identity.  The
    canonical word of a non-identity element is the single letter naming it.
    """

    kind = "finite"

    def __init__(self, table: Sequence[Sequence[int]], names: Optional[Sequence[str]] = None):
        m = len(table)
        if m == 0:
            raise MalformedInputError("empty multiplication table")
        rows = [tuple(row) for row in table]
        for row in rows:
            if len(row) != m or any(not 0 <= v < m for v in row):
                raise MalformedInputError("multiplication table is not square over 0..m-1")
        for i in range(m):
            if rows[0][i] != i or rows[i][0] != i:
                raise MalformedInputError("row/column 0 must act as the identity")
        inverses: list[Optional[int]] = [None] * m
        for i in range(m):
            for j in range(m):
                if rows[i][j] == 0:
                    inverses[i] = j
        if any(v is None for v in inverses):
            raise MalformedInputError("table has an element without inverse")
        if m <= 64:
            for i in range(m):
                for j in range(m):
                    for k in range(m):
                        if rows[rows[i][j]][k] != rows[i][rows[j][k]]:
                            raise MalformedInputError("table is not associative")
        self.table = rows
        if names is None:
            names = ["e"] + [f"t{i}" for i in range(1, m)]
        gens = [GeneratorSymbol(0, names[0], 0, is_identity=True)]
        for i in range(1, m):
            gens.append(GeneratorSymbol(i, names[i], inverses[i]))
        super().__init__(gens)

    @property
    def order(self) -> int:
        return len(self.table)

    def identity_key(self):
        return 0

    def key_append(self, key, letter: int):
        return self.table[key][letter]

    def key_multiply(self, a, b):
        return self.table[a][b]

    def key_inverse(self, a):
        return self.generators[a].inverse if a else 0

    def key_letters(self, key) -> Letters:
        return () if key == 0 else (key,)

    def is_finite(self) -> bool:
        return True

    def geodesic_normal_form(self) -> bool:
        return True


class _ProductBase(Group):
    """Shared generator-embedding plumbing for direct and free products."""

    def __init__(self, factors: Sequence[Group]):
        self.factors = tuple(factors)
        gens = [GeneratorSymbol(0, "e", 0, is_identity=True)]
        self._offsets: list[int] = []
        self._letter_factor: dict[int, tuple[int, int]] = {}
        next_id = 1
        for fi, f in enumerate(self.factors):
            self._offsets.append(next_id)
            clash = _name_clash(self.factors)
            for g in f.generators:
                if g.is_identity:
                    continue
                local = f.nonidentity_ids.index(g.id)
                inv_local = f.nonidentity_ids.index(g.inverse)
                display = f"{g.display}.{fi}" if g.display in clash else g.display
                gens.append(GeneratorSymbol(next_id + local, display, next_id + inv_local))
                self._letter_factor[next_id + local] = (fi, g.id)
            next_id += len(f.nonidentity_ids)
        gens.sort(key=lambda g: g.id)
        super().__init__(gens)

    def embed_word(self, fi: int, word: Iterable[int]) -> Letters:
        f = self.factors[fi]
        off = self._offsets[fi]
        return tuple(off + f.nonidentity_ids.index(x) for x in word if x != 0)

    def factor_of_letter(self, letter: int) -> tuple[int, int]:
        return self._letter_factor[letter]


def _name_clash(factors: Sequence[Group]) -> set[str]:
    seen: set[str] = set()
    clash: set[str] = set()
    for f in factors:
        mine = {g.display for g in f.generators if not g.is_identity}
        clash |= seen & mine
        seen |= mine
    return clash


class DirectProductGroup(_ProductBase):
    """Direct product; canonical words list each factor's block in order."""

    kind = "direct_product"

    def identity_key(self):
        return tuple(f.identity_key() for f in self.factors)

    def key_append(self, key, letter: int):
        if letter == 0:
            return key
        fi, local = self._letter_factor[letter]
        out = list(key)
        out[fi] = self.factors[fi].key_append(out[fi], local)
        return tuple(out)

    def key_multiply(self, a, b):
        return tuple(f.key_multiply(x, y) for f, x, y in zip(self.factors, a, b))

    def key_inverse(self, a):
        return tuple(f.key_inverse(x) for f, x in zip(self.factors, a))

    def key_letters(self, key) -> Letters:
        out: list[int] = []
        for fi, sub in enumerate(key):
            out.extend(self.embed_word(fi, self.factors[fi].key_letters(sub)))
        return tuple(out)

    def key_length(self, key) -> int:
        return sum(f.key_length(sub) for f, sub in zip(self.factors, key))

    def component(self, e: Element, fi: int) -> Element:
        return Element(e.key[fi])

    def pair(self, components: Sequence[Element]) -> Element:
        return Element(tuple(c.key for c in components))

    def is_finite(self) -> bool:
        return all(f.is_finite() for f in self.factors)

    def geodesic_normal_form(self) -> bool:
        return all(f.geodesic_normal_form() for f in self.factors)

    def geodesics_extend(self) -> bool:
        return any(f.geodesics_extend() for f in self.factors)

    def format_element(self, e: Element) -> str:
        parts = []
        for fi, sub in enumerate(e.key):
            w = self.factors[fi].key_letters(sub)
            if w:
                parts.append(self.format_word(self.embed_word(fi, w)))
        return " ".join(parts) if parts else "e"


class FreeProductGroup(_ProductBase):
    """Free product; canonical keys alternate non-identity factor syllables."""

    kind = "free_product"

    def __init__(self, factors: Sequence[Group]):
        if len(factors) < 2:
            raise MalformedInputError("free product needs at least two factors")
        super().__init__(factors)

    def identity_key(self):
        return ()

    def key_append(self, key, letter: int):
        if letter == 0:
            return key
        fi, local = self._letter_factor[letter]
        f = self.factors[fi]
        if key and key[-1][0] == fi:
            merged = f.key_append(key[-1][1], local)
            if merged == f.identity_key():
                return key[:-1]
            return key[:-1] + ((fi, merged),)
        sub = f.key_append(f.identity_key(), local)
        if sub == f.identity_key():
            return key
        return key + ((fi, sub),)

    def key_multiply(self, a, b):
        key = a
        for fi, sub in b:
            f = self.factors[fi]
            if key and key[-1][0] == fi:
                merged = f.key_multiply(key[-1][1], sub)
                if merged == f.identity_key():
                    key = key[:-1]
                else:
                    key = key[:-1] + ((fi, merged),)
            else:
                key = key + ((fi, sub),)
        return key

    def key_inverse(self, a):
        return tuple((fi, self.factors[fi].key_inverse(sub)) for fi, sub in reversed(a))

    def key_letters(self, key) -> Letters:
        out: list[int] = []
        for fi, sub in key:
            out.extend(self.embed_word(fi, self.factors[fi].key_letters(sub)))
        return tuple(out)

    def key_length(self, key) -> int:
        return sum(self.factors[fi].key_length(sub) for fi, sub in key)

    def embed_element(self, fi: int, e: Element) -> Element:
        f = self.factors[fi]
        if e.key == f.identity_key():
            return self.identity
        return Element(((fi, e.key),))

    def is_finite(self) -> bool:
        nontrivial = [f for f in self.factors if f.nonidentity_ids]
        if len(nontrivial) >= 2:
            return False
        return all(f.is_finite() for f in self.factors)

    def geodesic_normal_form(self) -> bool:
        return all(f.geodesic_normal_form() for f in self.factors)

    def geodesics_extend(self) -> bool:
        nontrivial = [f for f in self.factors if f.nonidentity_ids]
        if len(nontrivial) >= 2 and self.geodesic_normal_form():
            return True
        return any(f.geodesics_extend() for f in self.factors)


@dataclass(frozen=True)
class RewriteRule:
    lhs: Letters
    rhs: Letters


class RewritingGroup(Group):
    """A group presented by a confluent, shortlex-decreasing rule set.

    Confluence is asserted by the caller; the loader runs a bounded critical
    pair spot check and warns (does not error) on unresolved overlaps.  Free
    reduction rules s s^-1 -> eps are added automatically.  Canonical keys
    are normal-form words; appends only re-examine a suffix window.
    """

    kind = "rewriting"

    def __init__(
        self,
        names: Sequence[str],
        rules: Sequence[tuple[str, str]],
        rewrite_budget: int = DEFAULT_REWRITE_BUDGET,
        critical_pair_checks: int = 200,
    ):
        gens = self._build_generators(names)
        super().__init__(gens)
        self.rewrite_budget = rewrite_budget
        self.user_rules = tuple((lhs, rhs) for lhs, rhs in rules)
        parsed: list[RewriteRule] = []
        for lhs, rhs in rules:
            l, r = self.parse_word(lhs), self.parse_word(rhs)
            if not l:
                raise MalformedInputError("rule with empty left-hand side")
            if (len(r), r) >= (len(l), l):
                raise MalformedInputError(
                    f"rule {lhs!r} -> {rhs!r} is not shortlex-decreasing")
            parsed.append(RewriteRule(l, r))
        for g in self.generators:
            if g.is_identity:
                continue
            parsed.append(RewriteRule((g.id, g.inverse), ()))
        parsed.append(RewriteRule((0,), ()))
        self.rules = tuple(parsed)
        self._max_lhs = max(len(r.lhs) for r in self.rules)
        self._spot_check_confluence(critical_pair_checks)

    @staticmethod
    def _build_generators(names: Sequence[str]) -> list[GeneratorSymbol]:
        gens = [GeneratorSymbol(0, "e", 0, is_identity=True)]
        ids = {name: i + 1 for i, name in enumerate(names)}
        if "e" in ids:
            raise MalformedInputError("'e' is reserved for the identity symbol")
        for name, gid in ids.items():
            if name.endswith("^-1"):
                base = name[:-3]
                if base not in ids:
                    raise MalformedInputError(f"inverse {name!r} without base generator")
                continue
            inv_name = name + "^-1"
            inv = ids.get(inv_name, gid)  # absent partner: self-inverse
            gens.append(GeneratorSymbol(gid, name, inv))
            if inv != gid:
                gens.append(GeneratorSymbol(inv, inv_name, gid))
        gens.sort(key=lambda g: g.id)
        if len(gens) != len(names) + 1:
            raise MalformedInputError("generator list is inconsistent")
        return gens

    def identity_key(self):
        return ()

    def _reduce(self, w: list[int], start: int) -> Letters:
        """Rewrite to a fixpoint, scanning left-to-right from `start`."""
        steps = 0
        pos = max(0, start)
        while pos <= len(w):
            applied = False
            for i in range(max(0, pos - self._max_lhs + 1), len(w)):
                for rule in self.rules:
                    l = len(rule.lhs)
                    if tuple(w[i:i + l]) == rule.lhs:
                        w[i:i + l] = list(rule.rhs)
                        pos = max(0, i - self._max_lhs + 1)
                        applied = True
                        break
                if applied:
                    break
            if not applied:
                break
            steps += 1
            if steps > self.rewrite_budget:
                raise SolverBudgetError(
                    "rewriting did not reach a normal form within budget; "
                    "the rule system is likely not confluent/terminating")
        return tuple(w)

    def key_append(self, key: Letters, letter: int):
        if letter == 0:
            return key
        w = list(key) + [letter]
        return self._reduce(w, len(w) - self._max_lhs)

    def key_multiply(self, a: Letters, b: Letters):
        key = a
        for letter in b:
            key = self.key_append(key, letter)
        return key

    def key_inverse(self, a: Letters):
        return self.key_of_letters(self.inverse_word(a))

    def key_of_letters(self, letters: Iterable[int]):
        w = [x for x in letters if x != 0]
        return self._reduce(w, 0)

    def key_letters(self, key: Letters) -> Letters:
        return key

    def _spot_check_confluence(self, limit: int) -> None:
        checked = 0
        for r1, r2 in itertools.product(self.rules, repeat=2):
            if checked >= limit:
                return
            l1, l2 = r1.lhs, r2.lhs
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    checked += 1
                    overlap = l1 + l2[k:]
                    a = self.key_of_letters(r1.rhs + l2[k:])
                    b = self.key_of_letters(l1[:-k] + r2.rhs)
                    if a != b:
                        warnings.warn(
                            f"unresolved critical pair at overlap "
                            f"{self.format_word(overlap)!r}; rewriting system "
                            f"may not be confluent", stacklevel=3)
                        return


# -- spec-level operations ----------------------------------------------------


def solve_word_problem(group: Group, word: Iterable[int]) -> bool:
    """Decide whether the word represents the identity element."""
    return group.is_identity_word(word)


def canonical_form(group: Group, word: Iterable[int]) -> Element:
    """Normal-form representative; equal iff the words are equal in the group."""
    return group.element(word)


def free_group(rank: int) -> FreeGroup:
    return FreeGroup(rank)


def free_abelian_group(rank: int) -> FreeAbelianGroup:
    return FreeAbelianGroup(rank)


def bs_group(n: int) -> BaumslagSolitarGroup:
    return BaumslagSolitarGroup(n)


def finite_group(table: Sequence[Sequence[int]], names: Optional[Sequence[str]] = None) -> FiniteGroup:
    return FiniteGroup(table, names)


def cyclic_group(m: int) -> FiniteGroup:
    """Z/m as a finite-table group."""
    table = [[(i + j) % m for j in range(m)] for i in range(m)]
    return FiniteGroup(table)


def direct_product(*factors: Group) -> DirectProductGroup:
    return DirectProductGroup(factors)


def free_product(*factors: Group) -> FreeProductGroup:
    return FreeProductGroup(factors)
