"""Elements of mixed tensor products of point algebras C^d and the algebra C.

A :class:`TensorElem` is a flat sum of basis tensors.  A point leg contributes
a basis index ``x`` (the minimal projection e_x of C^d); an algebra leg
contributes a reduced word in the generators of C.  Relations act inside a
single algebra leg only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .starpoly import (
    ONE,
    GaussianRational,
    Gen,
    Preset,
    Presentation,
    StarPoly,
    Verdict,
    Word,
    MAGIC_ROUNDS,
    eliminate_word,
    reduce_word,
    render_terms,
    render_word,
    word_key,
)

__all__ = [
    "PointLeg",
    "AlgLeg",
    "ALG",
    "LegKind",
    "TensorElem",
    "LegHom",
    "tensor_concat",
    "tensor_mul",
    "apply_flip",
    "apply_mult",
    "apply_alg_mult",
    "substitute_hom",
    "eq_tensor",
]


@dataclass(frozen=True)
class PointLeg:
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("point leg dimension must be >= 1, got %d" % self.d)

    def __str__(self):
        return "C^%d" % self.d


@dataclass(frozen=True)
class AlgLeg:
    def __str__(self):
        return "C"


ALG = AlgLeg()
LegKind = Union[PointLeg, AlgLeg]
Factor = Union[int, Word]
Key = Tuple[Factor, ...]


def _sort_key(key: Key):
    points = tuple(f for f in key if isinstance(f, int))
    words = tuple(word_key(f) for f in key if not isinstance(f, int))
    return (points, words)


class TensorElem:
    """Sum of coefficient-weighted basis tensors over a fixed leg signature."""

    __slots__ = ("signature", "pres", "_terms")

    def __init__(self, signature: Sequence[LegKind], pres: Presentation, terms: Union[Mapping, Iterable] = ()):
        self.signature = tuple(signature)
        self.pres = pres
        preset = pres.preset
        acc: Dict[Key, GaussianRational] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            key = tuple(key)
            if len(key) != len(self.signature):
                raise ValueError("term %r does not match signature of length %d" % (key, len(self.signature)))
            norm = []
            for kind, f in zip(self.signature, key):
                if isinstance(kind, PointLeg):
                    if not isinstance(f, int) or not 0 <= f < kind.d:
                        raise ValueError("point factor %r invalid for leg %s" % (f, kind))
                    norm.append(f)
                else:
                    w = tuple(Gen(*g) for g in f)
                    for g in w:
                        pres.check_gen(g)
                    w = reduce_word(w, preset)
                    if w is None:
                        break
                    norm.append(w)
            else:
                key = tuple(norm)
                c = GaussianRational.coerce(c)
                acc[key] = acc[key] + c if key in acc else c
        self._terms = _canonical(acc)

    @classmethod
    def _trusted(cls, signature, pres, acc) -> "TensorElem":
        # acc keys already carry reduced words
        obj = cls.__new__(cls)
        obj.signature = tuple(signature)
        obj.pres = pres
        obj._terms = _canonical(acc)
        return obj

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, signature, pres) -> "TensorElem":
        return cls._trusted(signature, pres, {})

    @classmethod
    def scalar(cls, pres, c=1) -> "TensorElem":
        return cls._trusted((), pres, {(): GaussianRational.coerce(c)})

    @classmethod
    def basis(cls, signature, pres, factors, c=1) -> "TensorElem":
        return cls(signature, pres, [(tuple(factors), c)])

    @classmethod
    def unit(cls, signature, pres) -> "TensorElem":
        """1 ⊗ ... ⊗ 1; the unit of C^d is the sum of all e_x."""
        ranges = [range(k.d) if isinstance(k, PointLeg) else [()] for k in signature]
        return cls._trusted(signature, pres, {key: ONE for key in product(*ranges)})

    @classmethod
    def point(cls, d: int, x: int, pres) -> "TensorElem":
        return cls((PointLeg(d),), pres, [((x,), 1)])

    @classmethod
    def from_poly(cls, p: StarPoly) -> "TensorElem":
        return cls((ALG,), p.pres, [((w,), c) for w, c in p.items()])

    # -- accessors -------------------------------------------------------------

    def items(self):
        return self._terms.items()

    @property
    def terms(self) -> Dict[Key, GaussianRational]:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, TensorElem):
            return NotImplemented
        return self.signature == other.signature and self.pres == other.pres and self._terms == other._terms

    def __hash__(self):
        return hash((self.signature, tuple(self._terms.items())))

    def _check_sig(self, other: "TensorElem"):
        if self.signature != other.signature:
            raise ValueError(
                "signature mismatch: %s vs %s" % (_render_sig(self.signature), _render_sig(other.signature))
            )
        if (self.pres.m, self.pres.n) != (other.pres.m, other.pres.n):
            raise ValueError("tensor elements over different generator sets")

    def __add__(self, other: "TensorElem") -> "TensorElem":
        self._check_sig(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc[k] + c if k in acc else c
        return TensorElem._trusted(self.signature, self.pres, acc)

    def __neg__(self):
        return TensorElem._trusted(self.signature, self.pres, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorElem":
        c = GaussianRational.coerce(c)
        return TensorElem._trusted(self.signature, self.pres, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, TensorElem):
            return tensor_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def adjoint(self) -> "TensorElem":
        acc = {}
        for key, c in self._terms.items():
            acc[tuple(f if isinstance(f, int) else f[::-1] for f in key)] = c.conjugate()
        return TensorElem._trusted(self.signature, self.pres, acc)

    def render(self) -> str:
        return render_terms((_render_key(k), c) for k, c in self._terms.items())

    def __str__(self):
        return self.render()

    def __repr__(self):
        return "TensorElem[%s](%s)" % (_render_sig(self.signature), self.render())


def _canonical(acc):
    return {k: acc[k] for k in sorted(acc, key=_sort_key) if acc[k]}


def _render_key(key: Key) -> str:
    if not key:
        return "1"
    return "⊗".join("e[%d]" % f if isinstance(f, int) else render_word(f) for f in key)


def _render_sig(sig) -> str:
    return "⊗".join(str(k) for k in sig) or "scalar"


# -- structural maps -----------------------------------------------------------


def tensor_concat(u: TensorElem, v: TensorElem) -> TensorElem:
    if (u.pres.m, u.pres.n) != (v.pres.m, v.pres.n):
        raise ValueError("tensor elements over different generator sets")
    acc = {}
    for ku, cu in u._terms.items():
        for kv, cv in v._terms.items():
            acc[ku + kv] = cu * cv
    return TensorElem._trusted(u.signature + v.signature, u.pres, acc)


def tensor_mul(u: TensorElem, v: TensorElem) -> TensorElem:
    """Leg-wise product in the tensor product algebra."""
    u._check_sig(v)
    preset = u.pres.preset
    acc: Dict[Key, GaussianRational] = {}
    for ku, cu in u._terms.items():
        for kv, cv in v._terms.items():
            key = []
            for kind, a, b in zip(u.signature, ku, kv):
                if isinstance(kind, PointLeg):
                    if a != b:
                        break
                    key.append(a)
                else:
                    w = reduce_word(a + b, preset)
                    if w is None:
                        break
                    key.append(w)
            else:
                key = tuple(key)
                c = cu * cv
                acc[key] = acc[key] + c if key in acc else c
    return TensorElem._trusted(u.signature, u.pres, acc)


def _check_pos(u: TensorElem, at: int, width: int = 2):
    if not 0 <= at <= len(u.signature) - width:
        raise IndexError("leg position %d out of range for %d legs" % (at, len(u.signature)))


def apply_flip(u: TensorElem, at: int) -> TensorElem:
    """Swap legs ``at`` and ``at + 1``."""
    _check_pos(u, at)
    sig = list(u.signature)
    sig[at], sig[at + 1] = sig[at + 1], sig[at]
    acc = {}
    for key, c in u._terms.items():
        k = list(key)
        k[at], k[at + 1] = k[at + 1], k[at]
        acc[tuple(k)] = c
    return TensorElem._trusted(sig, u.pres, acc)


def apply_mult(u: TensorElem, at: int) -> TensorElem:
    """Multiply the point legs ``at`` and ``at + 1``: e_x e_y = δ_xy e_x."""
    _check_pos(u, at)
    a, b = u.signature[at], u.signature[at + 1]
    if not (isinstance(a, PointLeg) and isinstance(b, PointLeg)) or a.d != b.d:
        raise TypeError("apply_mult needs two point legs of equal dimension, got %s, %s" % (a, b))
    sig = u.signature[:at] + u.signature[at + 1 :]
    acc = {}
    for key, c in u._terms.items():
        if key[at] == key[at + 1]:
            acc[key[:at] + key[at + 1 :]] = c
    return TensorElem._trusted(sig, u.pres, acc)


def apply_alg_mult(u: TensorElem, at: int, preset: Optional[Preset] = None) -> TensorElem:
    """Multiply the algebra legs ``at`` and ``at + 1`` (concatenate, then reduce)."""
    _check_pos(u, at)
    if not (isinstance(u.signature[at], AlgLeg) and isinstance(u.signature[at + 1], AlgLeg)):
        raise TypeError("apply_alg_mult needs two algebra legs")
    preset = preset or u.pres.preset
    sig = u.signature[:at] + u.signature[at + 1 :]
    acc: Dict[Key, GaussianRational] = {}
    for key, c in u._terms.items():
        w = reduce_word(key[at] + key[at + 1], preset)
        if w is None:
            continue
        k = key[:at] + (w,) + key[at + 2 :]
        acc[k] = acc[k] + c if k in acc else c
    return TensorElem._trusted(sig, u.pres, acc)


@dataclass(frozen=True, eq=False)
class LegHom:
    """A unital homomorphism from one leg into a tensor signature.

    Point-leg domains are given by the images of the basis projections.
    Algebra-leg domains are given on generators and extended multiplicatively,
    or anti-multiplicatively when ``anti`` is set.
    """

    name: str
    domain: LegKind
    codomain: Tuple[LegKind, ...]
    images: Optional[Mapping] = None
    anti: bool = False
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def identity(cls, kind: LegKind) -> "LegHom":
        return cls("id", kind, (kind,), None)

    def image(self, factor: Factor, pres: Presentation) -> TensorElem:
        if self.images is None:
            return TensorElem._trusted(self.codomain, pres, {(factor,): ONE})
        if isinstance(self.domain, PointLeg):
            return self.images[factor]
        hit = self._cache.get(factor)
        if hit is not None:
            return hit
        out = TensorElem.unit(self.codomain, pres)
        for g in (factor[::-1] if self.anti else factor):
            out = tensor_mul(out, self.images[g])
        self._cache[factor] = out
        return out


def substitute_hom(u: TensorElem, at: int, h: LegHom) -> TensorElem:
    """Apply ``h`` to leg ``at`` and the identity elsewhere."""
    _check_pos(u, at, 1)
    kind = u.signature[at]
    if kind != h.domain:
        raise TypeError("homomorphism %s expects leg %s, found %s" % (h.name, h.domain, kind))
    sig = u.signature[:at] + tuple(h.codomain) + u.signature[at + 1 :]
    acc: Dict[Key, GaussianRational] = {}
    for key, c in u._terms.items():
        pre, post = key[:at], key[at + 1 :]
        for ik, ic in h.image(key[at], u.pres)._terms.items():
            k = pre + ik + post
            v = c * ic
            acc[k] = acc[k] + v if k in acc else v
    return TensorElem._trusted(sig, u.pres, acc)


def eliminated(u: TensorElem, preset: Optional[Preset] = None, column: bool = False) -> TensorElem:
    """Re-express every algebra leg without last-column (or, with ``column``, last-row) generators."""
    preset = preset or u.pres.preset
    n = u.pres.n
    acc: Dict[Key, GaussianRational] = {}
    for key, c in u._terms.items():
        options = []
        for kind, f in zip(u.signature, key):
            if isinstance(kind, PointLeg):
                options.append(((f, ONE),))
            else:
                options.append(eliminate_word(f, n, preset, column))
        for combo in product(*options):
            v = c
            for _, cc in combo:
                if not cc.is_one():
                    v = v * cc
            k = tuple(f for f, _ in combo)
            acc[k] = acc[k] + v if k in acc else v
    return TensorElem._trusted(u.signature, u.pres, acc)


def eq_tensor(u: TensorElem, v: TensorElem, preset: Optional[Preset] = None) -> Verdict:
    """Decide u == v in the algebraic tensor product.

    Point indices are compared exactly.  For algebra legs the difference is
    rewritten in the product basis of reduced, last-column-free words, which
    is a basis of C ⊗ ... ⊗ C under ALL_MAPS.
    """
    u._check_sig(v)
    preset = preset or u.pres.preset
    diff = u - v
    if diff.is_zero():
        return Verdict.EQUAL
    diff = eliminated(diff, preset)
    if diff.is_zero():
        return Verdict.EQUAL
    if preset is Preset.ALL_MAPS:
        return Verdict.NOT_EQUAL
    for _ in range(MAGIC_ROUNDS):
        for column in (True, False):
            diff = eliminated(diff, preset, column)
            if diff.is_zero():
                return Verdict.EQUAL
    return Verdict.INCONCLUSIVE
