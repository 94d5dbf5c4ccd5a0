"""Exact noncommutative *-polynomials in the generators c[x,k] of C.

C is the universal unital *-algebra generated by projections c[x,k]
(x < m rows, k < n columns).  Under ``Preset.ALL_MAPS`` each row is a
partition of unity; ``Preset.MAGIC_SQUARE`` additionally makes every column
a partition of unity.

Products are computed in the free algebra.  :func:`normal_form` applies the
local rewrite rules (idempotency, row orthogonality and, for magic squares,
column orthogonality); :func:`eq_mod` decides equality in C by first
eliminating the last column of every row through the row-sum relation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Optional, Tuple, Union

__all__ = [
    "GaussianRational",
    "Gen",
    "Word",
    "Preset",
    "Presentation",
    "Verdict",
    "StarPoly",
    "poly_mul",
    "poly_adjoint",
    "normal_form",
    "eq_mod",
    "reduce_word",
    "redexes",
    "rewrite_at",
    "eliminate_word",
    "eliminate",
    "render_word",
    "word_key",
]

Number = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(value)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        if not self.im and not other.im:
            return GaussianRational(self.re * other.re)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if not norm:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussianRational(other.re / norm, -other.im / norm)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    def render(self) -> str:
        """``3``, ``-1/2``, ``2i``, ``-i``, ``(3-i)``."""
        if not self.im:
            return str(self.re)
        if not self.re:
            return _imag_part(self.im)
        sign = "+" if self.im > 0 else "-"
        return "(%s%s%s)" % (self.re, sign, _imag_part(abs(self.im)))

    def __repr__(self):
        return "GaussianRational(%s)" % self.render()

    def __str__(self):
        return self.render()


def _imag_part(v: Fraction) -> str:
    if v == 1:
        return "i"
    if v == -1:
        return "-i"
    return "%si" % v


ONE = GaussianRational(1)
ZERO = GaussianRational(0)


class Gen(NamedTuple):
    """Generator c[x,k]: row ``x`` is a domain point, ``k`` a basis index of A."""

    x: int
    k: int

    def __str__(self):
        return "c[%d,%d]" % (self.x, self.k)


Word = Tuple[Gen, ...]


def word_key(w: Word):
    """Length-then-lexicographic order on words."""
    return (len(w), w)


def render_word(w: Word) -> str:
    if not w:
        return "1"
    return "·".join(str(g) for g in w)


class Preset(enum.Enum):
    ALL_MAPS = "allmaps"
    MAGIC_SQUARE = "magicsquare"


class Verdict(enum.Enum):
    EQUAL = "equal"
    NOT_EQUAL = "not-equal"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Presentation:
    """The algebra C for an m-point domain and an n-element target."""

    m: int
    n: int
    preset: Preset = Preset.ALL_MAPS

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("presentation needs m >= 1 and n >= 1, got m=%d n=%d" % (self.m, self.n))
        if self.preset is Preset.MAGIC_SQUARE and self.m != self.n:
            raise ValueError("magic-square relations need a square generator matrix (m == n)")

    def generators(self) -> Iterator[Gen]:
        for x in range(self.m):
            for k in range(self.n):
                yield Gen(x, k)

    def check_gen(self, g: Gen) -> None:
        if not (0 <= g.x < self.m and 0 <= g.k < self.n):
            raise ValueError("generator %s outside the %dx%d generator set" % (g, self.m, self.n))


# -- rewriting -----------------------------------------------------------


def _pair_rule(a: Gen, b: Gen, magic: bool) -> Optional[int]:
    """Return 1 for idempotency, 0 for an annihilating pair, None if no rule."""
    if a.x == b.x:
        return 1 if a.k == b.k else 0
    if magic and a.k == b.k:
        return 0
    return None


def redexes(w: Word, preset: Preset) -> list:
    """Positions i at which a rule rewrites the pair w[i], w[i+1]."""
    magic = preset is Preset.MAGIC_SQUARE
    return [i for i in range(len(w) - 1) if _pair_rule(w[i], w[i + 1], magic) is not None]


def rewrite_at(w: Word, i: int, preset: Preset) -> Optional[Word]:
    """Apply the single rule at position i; ``None`` means the word became 0."""
    rule = _pair_rule(w[i], w[i + 1], preset is Preset.MAGIC_SQUARE)
    if rule is None:
        raise ValueError("no rule applies at position %d of %s" % (i, render_word(w)))
    if rule == 0:
        return None
    return w[: i + 1] + w[i + 2 :]


@lru_cache(maxsize=1 << 16)
def reduce_word(w: Word, preset: Preset) -> Optional[Word]:
    """Normal form of a single word: a word with no redex, or ``None`` for 0."""
    magic = preset is Preset.MAGIC_SQUARE
    out = []
    for g in w:
        if out:
            rule = _pair_rule(out[-1], g, magic)
            if rule == 1:
                continue
            if rule == 0:
                return None
        out.append(g)
    return tuple(out)


# -- polynomials -----------------------------------------------------------


class StarPoly:
    """Finite linear combination of words with Gaussian-rational coefficients.

    Terms are kept sorted length-then-lexicographically and never hold a zero
    coefficient.  ``StarPoly`` is immutable.
    """

    __slots__ = ("pres", "_terms")

    def __init__(self, pres: Presentation, terms: Union[Mapping, Iterable] = ()):
        self.pres = pres
        acc: Dict[Word, GaussianRational] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            w = tuple(Gen(*g) for g in w)
            for g in w:
                pres.check_gen(g)
            c = GaussianRational.coerce(c)
            acc[w] = acc[w] + c if w in acc else c
        self._terms = _canonical(acc)

    @classmethod
    def _trusted(cls, pres: Presentation, acc: Dict[Word, GaussianRational]) -> "StarPoly":
        obj = cls.__new__(cls)
        obj.pres = pres
        obj._terms = _canonical(acc)
        return obj

    @classmethod
    def zero(cls, pres: Presentation) -> "StarPoly":
        return cls._trusted(pres, {})

    @classmethod
    def one(cls, pres: Presentation) -> "StarPoly":
        return cls._trusted(pres, {(): ONE})

    @classmethod
    def scalar(cls, pres: Presentation, c) -> "StarPoly":
        return cls._trusted(pres, {(): GaussianRational.coerce(c)})

    @classmethod
    def gen(cls, pres: Presentation, x: int, k: int) -> "StarPoly":
        g = Gen(x, k)
        pres.check_gen(g)
        return cls._trusted(pres, {(g,): ONE})

    @classmethod
    def word(cls, pres: Presentation, w: Iterable, c=1) -> "StarPoly":
        return cls(pres, [(tuple(w), c)])

    @property
    def terms(self) -> Mapping[Word, GaussianRational]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __eq__(self, other):
        if not isinstance(other, StarPoly):
            return NotImplemented
        return self.pres == other.pres and self._terms == other._terms

    def __hash__(self):
        return hash((self.pres, tuple(self._terms.items())))

    def _check_same(self, other: "StarPoly"):
        if self.pres.m != other.pres.m or self.pres.n != other.pres.n:
            raise ValueError(
                "mismatched generator universes: %dx%d vs %dx%d"
                % (self.pres.m, self.pres.n, other.pres.m, other.pres.n)
            )

    def __add__(self, other):
        if not isinstance(other, StarPoly):
            other = StarPoly.scalar(self.pres, other)
        self._check_same(other)
        acc = dict(self._terms)
        for w, c in other._terms.items():
            acc[w] = acc[w] + c if w in acc else c
        return StarPoly._trusted(self.pres, acc)

    __radd__ = __add__

    def __neg__(self):
        return StarPoly._trusted(self.pres, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, StarPoly):
            other = StarPoly.scalar(self.pres, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "StarPoly":
        c = GaussianRational.coerce(c)
        return StarPoly._trusted(self.pres, {w: v * c for w, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, StarPoly):
            return poly_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def adjoint(self) -> "StarPoly":
        return poly_adjoint(self)

    def render(self) -> str:
        return render_terms((render_word(w), c) for w, c in self._terms.items())

    def __str__(self):
        return self.render()

    def __repr__(self):
        return "StarPoly(%s)" % self.render()


def _canonical(acc: Dict) -> Dict:
    return {w: acc[w] for w in sorted(acc, key=word_key) if acc[w]}


def render_terms(pairs: Iterable[Tuple[str, GaussianRational]]) -> str:
    """Join rendered basis elements with their coefficients: ``c[0,0] - 2·c[0,1]``."""
    parts = []
    for body, c in pairs:
        negative = c.re < 0 if c.re else c.im < 0
        mag = -c if negative else c
        if mag.is_one():
            text = body
        elif body == "1":
            text = mag.render()
        else:
            text = "%s·%s" % (mag.render(), body)
        if not parts:
            parts.append("-" + text if negative else text)
        else:
            parts.append(("- " if negative else "+ ") + text)
    return " ".join(parts) if parts else "0"


def poly_mul(a: StarPoly, b: StarPoly) -> StarPoly:
    """Free-algebra product (concatenation of words), not reduced modulo relations."""
    a._check_same(b)
    acc: Dict[Word, GaussianRational] = {}
    for wa, ca in a._terms.items():
        for wb, cb in b._terms.items():
            w = wa + wb
            c = ca * cb
            acc[w] = acc[w] + c if w in acc else c
    return StarPoly._trusted(a.pres, acc)


def poly_adjoint(a: StarPoly) -> StarPoly:
    # generators are self-adjoint, so * reverses words and conjugates scalars
    acc: Dict[Word, GaussianRational] = {}
    for w, c in a._terms.items():
        acc[w[::-1]] = c.conjugate()
    return StarPoly._trusted(a.pres, acc)


def normal_form(a: StarPoly, preset: Optional[Preset] = None) -> StarPoly:
    preset = preset or a.pres.preset
    acc: Dict[Word, GaussianRational] = {}
    for w, c in a._terms.items():
        r = reduce_word(w, preset)
        if r is None:
            continue
        acc[r] = acc[r] + c if r in acc else c
    return StarPoly._trusted(a.pres, acc)


@lru_cache(maxsize=1 << 16)
def eliminate_word(w: Word, n: int, preset: Preset, column: bool = False) -> Tuple[Tuple[Word, GaussianRational], ...]:
    """Expand c[x,n-1] := 1 - sum_{k<n-1} c[x,k] in w and reduce.

    With ``column`` set, expand c[n-1,k] := 1 - sum_{x<n-1} c[x,k] instead,
    which is only valid under MAGIC_SQUARE (where m == n).
    Returns reduced (word, coefficient) pairs with zero coefficients removed.
    """
    w = reduce_word(w, preset)
    if w is None:
        return ()
    last = n - 1
    choices = []
    for g in w:
        if column and g.x == last:
            opts = [((), ONE)] + [((Gen(y, g.k),), -ONE) for y in range(last)]
        elif not column and g.k == last:
            opts = [((), ONE)] + [((Gen(g.x, k),), -ONE) for k in range(last)]
        else:
            opts = [((g,), ONE)]
        choices.append(opts)
    acc: Dict[Word, GaussianRational] = {}
    for combo in product(*choices):
        word: Word = ()
        c = ONE
        for piece, sign in combo:
            word += piece
            if not sign.is_one():
                c = c * sign
        r = reduce_word(word, preset)
        if r is None:
            continue
        acc[r] = acc[r] + c if r in acc else c
    return tuple((k, v) for k, v in sorted(acc.items(), key=lambda kv: word_key(kv[0])) if v)


def eliminate(a: StarPoly, preset: Optional[Preset] = None, column: bool = False) -> StarPoly:
    """Rewrite ``a`` without last-column generators (last-row ones with ``column``), then reduce."""
    preset = preset or a.pres.preset
    if column and preset is not Preset.MAGIC_SQUARE:
        raise ValueError("column elimination needs the magic-square relations")
    acc: Dict[Word, GaussianRational] = {}
    for w, c in a._terms.items():
        for r, v in eliminate_word(w, a.pres.n, preset, column):
            v = v * c
            acc[r] = acc[r] + v if r in acc else v
    return StarPoly._trusted(a.pres, acc)


# alternating row/column passes tried before a magic-square comparison gives up
MAGIC_ROUNDS = 3


def eq_mod(a: StarPoly, b: StarPoly, preset: Optional[Preset] = None) -> Verdict:
    """Decide a == b in C.

    Under ALL_MAPS the reduced words free of last-column generators form a
    basis of C, so the answer is exact.  Under MAGIC_SQUARE row and column
    eliminations alternate for a few rounds; reaching zero proves equality,
    anything else proves nothing.
    """
    a._check_same(b)
    preset = preset or a.pres.preset
    diff = eliminate(a - b, preset)
    if diff.is_zero():
        return Verdict.EQUAL
    if preset is Preset.ALL_MAPS:
        return Verdict.NOT_EQUAL
    for _ in range(MAGIC_ROUNDS):
        diff = eliminate(diff, preset, column=True)
        if diff.is_zero():
            return Verdict.EQUAL
        diff = eliminate(diff, preset)
        if diff.is_zero():
            return Verdict.EQUAL
    return Verdict.INCONCLUSIVE
