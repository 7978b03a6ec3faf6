"""Words in a free pro-p group, their text syntax, and the Magnus expansion.

Grammar (whitespace separates terms)::

    word := term*
    term := atom ('^' integer)?
    atom := name | '(' word ')' | '[' word ',' word ']'

Commutators follow ``[x, y] = x^-1 y^-1 x y``.  Exponents are kept as written;
p-power collapse happens only after expansion into the algebra.
"""

import re
from dataclasses import dataclass

from .errors import ParameterError, WordSyntaxError
from .free_algebra import AboveTruncation, TruncatedSeries, check_capacity, check_prime


class GroupWord:
    """Base class of the word tree; instances are immutable and hashable."""

    __slots__ = ()

    def __mul__(self, other):
        if not isinstance(other, GroupWord):
            return NotImplemented
        return Concat((self, other))

    def __pow__(self, k):
        return word_power(self, k)

    def max_generator(self):
        """Largest generator index occurring, or -1 for the identity."""
        raise NotImplementedError


@dataclass(frozen=True)
class Gen(GroupWord):
    index: int

    def max_generator(self):
        return self.index


@dataclass(frozen=True)
class Inverse(GroupWord):
    word: GroupWord

    def max_generator(self):
        return self.word.max_generator()


@dataclass(frozen=True)
class Power(GroupWord):
    word: GroupWord
    exponent: int

    def max_generator(self):
        return self.word.max_generator()


@dataclass(frozen=True)
class Commutator(GroupWord):
    left: GroupWord
    right: GroupWord

    def max_generator(self):
        return max(self.left.max_generator(), self.right.max_generator())


@dataclass(frozen=True)
class Concat(GroupWord):
    factors: tuple = ()

    def max_generator(self):
        return max((f.max_generator() for f in self.factors), default=-1)


IDENTITY = Concat(())


def word_power(w, k):
    if k == 0:
        return IDENTITY
    return Power(w, int(k))


def word_commutator(x, y):
    return Commutator(x, y)


def word_inverse(w):
    return Inverse(w)


def default_names(d):
    if d <= 26:
        return [chr(ord("a") + i) for i in range(d)]
    return [f"x{i}" for i in range(d)]


# tokenizer ------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[+-]?\d+)|(?P<sym>[\^\(\)\[\],])"
)


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, names):
        self.tokens = _tokenize(text)
        self.i = 0
        self.lookup = {name: k for k, name in enumerate(names)}

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            shown = tok[1] or "end of input"
            raise WordSyntaxError(f"expected {value!r}, found {shown!r}", tok[2])
        self.i += 1
        return tok

    def word(self, stop):
        factors = []
        while self.peek()[1] not in stop and self.peek()[0] != "end":
            factors.append(self.term())
        if len(factors) == 1:
            return factors[0]
        return Concat(tuple(factors))

    def term(self):
        atom = self.atom()
        if self.peek()[1] == "^":
            self.take("^")
            kind, value, pos = self.take()
            if kind != "int":
                raise WordSyntaxError(f"expected integer exponent, found {value or 'end of input'!r}", pos)
            return word_power(atom, int(value))
        return atom

    def atom(self):
        kind, value, pos = self.peek()
        if kind == "name":
            self.take()
            if value not in self.lookup:
                raise WordSyntaxError(f"unknown generator {value!r}", pos)
            return Gen(self.lookup[value])
        if value == "(":
            self.take("(")
            inner = self.word(stop={")"})
            self.take(")")
            return inner
        if value == "[":
            self.take("[")
            left = self.word(stop={",", "]"})
            self.take(",")
            right = self.word(stop={"]"})
            self.take("]")
            return Commutator(left, right)
        raise WordSyntaxError(f"unexpected token {value or 'end of input'!r}", pos)


def parse_word(text, generator_names):
    """Parse ``text`` into a :class:`GroupWord`; the empty string is the identity."""
    parser = _Parser(text, generator_names)
    w = parser.word(stop=set())
    kind, value, pos = parser.peek()
    if kind != "end":
        raise WordSyntaxError(f"unexpected token {value!r}", pos)
    return w


def format_word(w, generator_names=None):
    """Canonical text form, accepted back by :func:`parse_word`."""
    names = generator_names or default_names(w.max_generator() + 1)

    def atom(u):
        if isinstance(u, (Gen, Commutator)):
            return fmt(u)
        return f"({fmt(u)})"

    def fmt(u):
        if isinstance(u, Gen):
            return names[u.index]
        if isinstance(u, Inverse):
            return f"{atom(u.word)}^-1"
        if isinstance(u, Power):
            return f"{atom(u.word)}^{u.exponent}"
        if isinstance(u, Commutator):
            return f"[{fmt(u.left)}, {fmt(u.right)}]"
        parts = []
        for f in u.factors:
            parts.append(atom(f) if isinstance(f, Concat) else fmt(f))
        return " ".join(parts)

    return fmt(w)


# Magnus expansion -------------------------------------------------------------

def magnus_expand(w, d, N, p):
    """Image of ``w`` under sigma_i -> 1 + u_i in the algebra truncated at N."""
    check_capacity(d, N)
    check_prime(p)
    if w.max_generator() >= d:
        raise ParameterError(f"word uses generator {w.max_generator()} but d={d}")
    cache = {}
    gens = {}

    def letter(j, inv):
        # 1 + u_j, or its inverse 1 - u_j + u_j^2 - ... in closed form
        if (j, inv) not in gens:
            if inv:
                coeffs = {(j,) * k: (-1) ** k for k in range(N + 1)}
            else:
                coeffs = {(): 1, (j,): 1}
            gens[j, inv] = TruncatedSeries(d, N, p, coeffs)
        return gens[j, inv]

    def expand(u, inv):
        # inversion is pushed down to the letters, so no series is ever inverted
        key = (id(u), inv)
        if key in cache:
            return cache[key][1]
        if isinstance(u, Gen):
            s = letter(u.index, inv)
        elif isinstance(u, Inverse):
            s = expand(u.word, not inv)
        elif isinstance(u, Power):
            s = expand(u.word, inv ^ (u.exponent < 0)) ** abs(u.exponent)
        elif isinstance(u, Commutator):
            # [x,y] = x^-1 y^-1 x y and [x,y]^-1 = [y,x]
            x, y = (u.left, u.right) if not inv else (u.right, u.left)
            s = expand(x, True) * expand(y, True) * expand(x, False) * expand(y, False)
        else:
            s = TruncatedSeries.one(d, N, p)
            for f in (reversed(u.factors) if inv else u.factors):
                s = s * expand(f, inv)
        cache[key] = (u, s)
        return s

    return expand(w, False)


def depth(w, d, N, p):
    """Valuation of (expansion of w) - 1; the identity is above truncation."""
    s = magnus_expand(w, d, N, p) - TruncatedSeries.one(d, N, p)
    return s.lowest_degree()


def depth_at_least(value, n):
    """Check ``value >= n`` for a depth value.

    Above-truncation values count as satisfying: they are certified >= N + 1
    and cannot be refuted at the working truncation.
    """
    if isinstance(value, AboveTruncation):
        return True
    return value >= n
