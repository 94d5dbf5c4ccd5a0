"""The quantum family of all maps into a finite semigroup and its comultiplication.

For a semigroup table ξ on n elements and an m-point domain:

* A = C^n with Δ(e_k) = Σ_{ξ(r,s)=k} e_r ⊗ e_s,
* B = C^m, and C is generated by the projections c[x,k],
* Φ(e_k) = Σ_x e_x ⊗ c[x,k],
* Γ(c[x,k]) = Σ_{ξ(r,s)=k} c[x,r] ⊗ c[x,s].

The check functions rebuild each identity in the coassociativity proof from
the structural maps of :mod:`qfamily.tensorspace` and compare the two sides
with :func:`~qfamily.tensorspace.eq_tensor`.
"""

from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass, field, replace
from itertools import permutations, product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .finsemigroup import CayleyTable, NonAssociative, SemigroupRecord, validate_associativity
from .starpoly import ONE, GaussianRational, Gen, Preset, Presentation, Verdict, Word, render_word
from .tensorspace import (
    ALG,
    LegHom,
    PointLeg,
    TensorElem,
    apply_alg_mult,
    apply_flip,
    apply_mult,
    eq_tensor,
    substitute_hom,
)

__all__ = [
    "CheckVerdict",
    "CheckResult",
    "VerificationReport",
    "QFamConfig",
    "GammaPresentation",
    "CounitCandidate",
    "AntipodeCandidate",
    "PreconditionError",
    "build_phi",
    "build_delta",
    "build_gamma",
    "phi_hom",
    "delta_hom",
    "gamma_hom",
    "counit_hom",
    "antipode_hom",
    "check_gamma_well_defined",
    "check_diagram_d1",
    "check_coassoc_delta",
    "check_coassoc_gamma",
    "check_e1",
    "check_proof_chain",
    "check_e2",
    "e2_left",
    "e2_right",
    "search_counit",
    "is_counit",
    "check_antipode_candidate",
    "antipode_candidates",
    "mutate_gamma",
    "verify_theorem",
]

DEFAULT_COUNIT_CAP = 10_000


class CheckVerdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass
class CheckResult:
    name: str
    verdict: CheckVerdict
    witness: Optional[str] = None
    elapsed: float = 0.0
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict is CheckVerdict.PASS


@dataclass
class VerificationReport:
    entries: List[CheckResult] = field(default_factory=list)

    def add(self, entry: Union[CheckResult, Iterable[CheckResult]]) -> None:
        new = [entry] if isinstance(entry, CheckResult) else list(entry)
        for e in new:
            if any(old.name == e.name for old in self.entries):
                raise ValueError("check %r reported twice" % e.name)
            self.entries.append(e)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, name: str) -> CheckResult:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def names(self) -> List[str]:
        return [e.name for e in self.entries]

    @property
    def verdict(self) -> CheckVerdict:
        verdicts = {e.verdict for e in self.entries}
        if CheckVerdict.FAIL in verdicts:
            return CheckVerdict.FAIL
        if CheckVerdict.INCONCLUSIVE in verdicts:
            return CheckVerdict.INCONCLUSIVE
        return CheckVerdict.PASS


class _Tally:
    """Collects per-instance verdicts of one named check."""

    def __init__(self, name: str):
        self.name = name
        self.failures: List[str] = []
        self.unknown: List[str] = []
        self.start = time.perf_counter()

    def record(self, label: str, verdict: Verdict, lhs: TensorElem, rhs: TensorElem) -> None:
        if verdict is Verdict.EQUAL:
            return
        text = "%s: %s" % (label, (lhs - rhs).render())
        if verdict is Verdict.NOT_EQUAL:
            self.failures.append(text)
        else:
            self.unknown.append(text)

    def compare(self, label: str, lhs: TensorElem, rhs: TensorElem) -> None:
        self.record(label, eq_tensor(lhs, rhs), lhs, rhs)

    def result(self) -> CheckResult:
        elapsed = time.perf_counter() - self.start
        if self.failures:
            return CheckResult(self.name, CheckVerdict.FAIL, "; ".join(self.failures), elapsed)
        if self.unknown:
            return CheckResult(self.name, CheckVerdict.INCONCLUSIVE, "; ".join(self.unknown), elapsed)
        return CheckResult(self.name, CheckVerdict.PASS, None, elapsed)


class PreconditionError(ValueError):
    pass


# -- construction ---------------------------------------------------------------


@dataclass(frozen=True)
class QFamConfig:
    """Domain size m, semigroup table on n elements and relation preset."""

    m: int
    n: int
    table: CayleyTable
    preset: Preset = Preset.ALL_MAPS

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if self.table.n != self.n:
            raise ValueError("table order %d does not match n=%d" % (self.table.n, self.n))
        Presentation(self.m, self.n, self.preset)

    @classmethod
    def create(
        cls,
        table: Union[SemigroupRecord, CayleyTable, Sequence[Sequence[int]]],
        m: Optional[int] = None,
        preset: Preset = Preset.ALL_MAPS,
        require_associative: bool = True,
    ) -> "QFamConfig":
        """Build a config; ``m`` defaults to the table order.

        ``require_associative=False`` admits arbitrary magmas, which the
        coassociativity checks use to exhibit failures.
        """
        if isinstance(table, SemigroupRecord):
            table = table.table
        elif not isinstance(table, CayleyTable):
            table = CayleyTable.from_rows(table)
        if require_associative:
            rec = validate_associativity(table)
            if isinstance(rec, NonAssociative):
                raise ValueError("table is not associative: witness %r" % (rec.witness,))
        return cls(table.n if m is None else m, table.n, table, preset)

    @property
    def pres(self) -> Presentation:
        return Presentation(self.m, self.n, self.preset)

    def pairs_to(self, k: int) -> List[Tuple[int, int]]:
        """All (r, s) with ξ(r, s) = k, i.e. the support of Δ_k^{rs}."""
        t = self.table.table
        return [(r, s) for r in range(self.n) for s in range(self.n) if t[r][s] == k]


@dataclass(frozen=True)
class GammaPresentation:
    config: QFamConfig
    images: Mapping[Gen, TensorElem]

    @property
    def pres(self) -> Presentation:
        return self.config.pres

    def image(self, x: int, k: int) -> TensorElem:
        return self.images[Gen(x, k)]

    def generators(self) -> List[Gen]:
        return list(self.pres.generators())


@dataclass(frozen=True)
class CounitCandidate:
    """ε(c[x,k]) = 1 if k == f[x] else 0; a classical map from the points into S."""

    f: Tuple[int, ...]

    def value(self, g: Gen) -> int:
        return 1 if g.k == self.f[g.x] else 0


@dataclass(frozen=True)
class AntipodeCandidate:
    """S(c[x,k]) = c[x, sigma[x][k]], extended anti-multiplicatively."""

    sigma: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for row in self.sigma:
            if sorted(row) != list(range(len(row))):
                raise ValueError("%r is not a permutation" % (row,))


def build_phi(config: QFamConfig) -> Dict[int, TensorElem]:
    pres = config.pres
    sig = (PointLeg(config.m), ALG)
    return {
        k: TensorElem._trusted(sig, pres, {(x, (Gen(x, k),)): ONE for x in range(config.m)})
        for k in range(config.n)
    }


def build_delta(config: QFamConfig) -> Dict[int, TensorElem]:
    sig = (PointLeg(config.n), PointLeg(config.n))
    return {
        k: TensorElem._trusted(sig, config.pres, {(r, s): ONE for r, s in config.pairs_to(k)})
        for k in range(config.n)
    }


def build_gamma(config: QFamConfig) -> GammaPresentation:
    pres = config.pres
    images = {}
    for x in range(config.m):
        for k in range(config.n):
            images[Gen(x, k)] = TensorElem(
                (ALG, ALG), pres, [(((Gen(x, r),), (Gen(x, s),)), 1) for r, s in config.pairs_to(k)]
            )
    return GammaPresentation(config, images)


def phi_hom(config: QFamConfig) -> LegHom:
    return LegHom("Φ", PointLeg(config.n), (PointLeg(config.m), ALG), build_phi(config))


def delta_hom(config: QFamConfig) -> LegHom:
    return LegHom("Δ", PointLeg(config.n), (PointLeg(config.n), PointLeg(config.n)), build_delta(config))


def gamma_hom(g: GammaPresentation) -> LegHom:
    return LegHom("Γ", ALG, (ALG, ALG), g.images)


def counit_hom(eps: CounitCandidate, pres: Presentation) -> LegHom:
    images = {gen: TensorElem.scalar(pres, eps.value(gen)) for gen in pres.generators()}
    return LegHom("ε", ALG, (), images)


def antipode_hom(s: AntipodeCandidate, pres: Presentation) -> LegHom:
    images = {
        gen: TensorElem._trusted((ALG,), pres, {((Gen(gen.x, s.sigma[gen.x][gen.k]),),): ONE})
        for gen in pres.generators()
    }
    return LegHom("S", ALG, (ALG,), images, anti=True)


def _single(pres: Presentation, w: Word, c=1) -> TensorElem:
    return TensorElem((ALG,), pres, [((w,), c)])


def _gen_elem(pres: Presentation, gen: Gen) -> TensorElem:
    return _single(pres, (gen,))


# -- theorem checks -----------------------------------------------------------


def check_gamma_well_defined(g: GammaPresentation) -> List[CheckResult]:
    """Γ must respect every defining relation of C to extend to a *-homomorphism."""
    pres = g.pres
    m, n = pres.m, pres.n
    unit = TensorElem.unit((ALG, ALG), pres)
    zero = TensorElem.zero((ALG, ALG), pres)

    adj, idem, orth, rows = (_Tally(name) for name in (
        "gamma_self_adjoint", "gamma_idempotent", "gamma_row_orthogonal", "gamma_row_sums"))
    for gen in g.generators():
        img = g.images[gen]
        adj.compare(str(gen), img.adjoint(), img)
        idem.compare(str(gen), img * img, img)
    for x in range(m):
        for k in range(n):
            for k2 in range(n):
                if k != k2:
                    orth.compare("%s·%s" % (Gen(x, k), Gen(x, k2)), g.image(x, k) * g.image(x, k2), zero)
        total = zero
        for k in range(n):
            total = total + g.image(x, k)
        rows.compare("row %d" % x, total, unit)
    out = [adj.result(), idem.result(), orth.result(), rows.result()]

    if pres.preset is Preset.MAGIC_SQUARE:
        cols, corth = _Tally("gamma_column_sums"), _Tally("gamma_column_orthogonal")
        for k in range(n):
            total = zero
            for x in range(m):
                total = total + g.image(x, k)
                for x2 in range(m):
                    if x != x2:
                        corth.compare("%s·%s" % (Gen(x, k), Gen(x2, k)), g.image(x, k) * g.image(x2, k), zero)
            cols.compare("column %d" % k, total, unit)
        out += [cols.result(), corth.result()]
    return out


def d1_sides(g: GammaPresentation, k: int) -> Tuple[TensorElem, TensorElem]:
    """(I⊗Γ)Φ(e_k) and (m⊗I⊗I)(I⊗F⊗I)(Φ⊗Φ)Δ(e_k), both over C^m ⊗ C ⊗ C."""
    cfg = g.config
    phi = phi_hom(cfg)
    lhs = substitute_hom(build_phi(cfg)[k], 1, gamma_hom(g))
    u = build_delta(cfg)[k]
    u = substitute_hom(u, 1, phi)
    u = substitute_hom(u, 0, phi)
    u = apply_flip(u, 1)
    rhs = apply_mult(u, 0)
    return lhs, rhs


def _gamma_formula(cfg: QFamConfig, k: int) -> TensorElem:
    # Σ_x e_x ⊗ Σ_{ξ(r,s)=k} c[x,r] ⊗ c[x,s]
    terms = {(x, (Gen(x, r),), (Gen(x, s),)): ONE for x in range(cfg.m) for r, s in cfg.pairs_to(k)}
    return TensorElem((PointLeg(cfg.m), ALG, ALG), cfg.pres, terms)


def check_diagram_d1(g: GammaPresentation) -> CheckResult:
    tally = _Tally("diagram_d1")
    for k in range(g.config.n):
        lhs, rhs = d1_sides(g, k)
        tally.compare("k=%d" % k, lhs, rhs)
        tally.compare("k=%d (explicit form)" % k, rhs, _gamma_formula(g.config, k))
    return tally.result()


def check_coassoc_delta(config: QFamConfig) -> CheckResult:
    """(Δ⊗I)Δ = (I⊗Δ)Δ on every basis vector e_k."""
    tally = _Tally("coassoc_delta")
    dh = delta_hom(config)
    for k, dk in build_delta(config).items():
        tally.compare("k=%d" % k, substitute_hom(dk, 0, dh), substitute_hom(dk, 1, dh))
    return tally.result()


def _bracket_formula(cfg: QFamConfig, gen: Gen, left: bool) -> TensorElem:
    t = cfg.table.table
    rng = range(cfg.n)
    x = gen.x
    terms = {}
    for r, s, u in product(rng, rng, rng):
        v = t[t[r][s]][u] if left else t[r][t[s][u]]
        if v == gen.k:
            terms[((Gen(x, r),), (Gen(x, s),), (Gen(x, u),))] = ONE
    return TensorElem((ALG, ALG, ALG), cfg.pres, terms)


def check_coassoc_gamma(g: GammaPresentation) -> CheckResult:
    """(Γ⊗I)Γ = (I⊗Γ)Γ on generators, plus both sides against their bracket sums."""
    tally = _Tally("coassoc_gamma")
    gh = gamma_hom(g)
    for gen in g.generators():
        once = substitute_hom(_gen_elem(g.pres, gen), 0, gh)
        lhs = substitute_hom(once, 0, gh)
        rhs = substitute_hom(once, 1, gh)
        tally.compare(str(gen), lhs, rhs)
        tally.compare("%s (Γ⊗I)Γ vs ξ(ξ(r,s),t)" % (gen,), lhs, _bracket_formula(g.config, gen, True))
        tally.compare("%s (I⊗Γ)Γ vs ξ(r,ξ(s,t))" % (gen,), rhs, _bracket_formula(g.config, gen, False))
    return tally.result()


def e1_sides(g: GammaPresentation, k: int) -> Tuple[TensorElem, TensorElem]:
    """(I⊗I⊗Γ)(I⊗Γ)Φ(e_k) and (I⊗Γ⊗I)(I⊗Γ)Φ(e_k)."""
    gh = gamma_hom(g)
    once = substitute_hom(build_phi(g.config)[k], 1, gh)
    return substitute_hom(once, 2, gh), substitute_hom(once, 1, gh)


def check_e1(g: GammaPresentation) -> CheckResult:
    tally = _Tally("e1")
    for k in range(g.config.n):
        lhs, rhs = e1_sides(g, k)
        tally.compare("k=%d" % k, lhs, rhs)
    return tally.result()


def e2_left(u: TensorElem) -> TensorElem:
    """(m⊗I)(I⊗F⊗I⊗I)(I⊗I⊗m⊗I⊗I)(I⊗I⊗I⊗F⊗I) on B⊗C⊗B⊗C⊗B⊗C."""
    u = apply_flip(u, 3)
    u = apply_mult(u, 2)
    u = apply_flip(u, 1)
    return apply_mult(u, 0)


def e2_right(u: TensorElem) -> TensorElem:
    """(m⊗I)W(m⊗I)(I⊗F⊗I) with W = (I⊗F⊗I⊗I)(I⊗I⊗F⊗I)."""
    u = apply_flip(u, 1)
    u = apply_mult(u, 0)
    u = apply_flip(u, 2)
    u = apply_flip(u, 1)
    return apply_mult(u, 0)


def _triple_phi(cfg: QFamConfig, u: TensorElem) -> TensorElem:
    phi = phi_hom(cfg)
    for leg in (2, 1, 0):
        u = substitute_hom(u, leg, phi)
    return u


def check_proof_chain(g: GammaPresentation) -> List[CheckResult]:
    """Both sides of e1 against the fully expanded forms the proof reduces them to.

    Left:  e2_left((Φ⊗Φ⊗Φ)(I⊗Δ)Δ(e_k));  right: e2_right((Φ⊗Φ⊗Φ)(Δ⊗I)Δ(e_k)).
    """
    cfg = g.config
    dh = delta_hom(cfg)
    left, right = _Tally("e1_lhs_chain"), _Tally("e1_rhs_chain")
    for k, dk in build_delta(cfg).items():
        lhs, rhs = e1_sides(g, k)
        left.compare("k=%d" % k, lhs, e2_left(_triple_phi(cfg, substitute_hom(dk, 1, dh))))
        right.compare("k=%d" % k, rhs, e2_right(_triple_phi(cfg, substitute_hom(dk, 0, dh))))
    return [left.result(), right.result()]


def check_e2(
    m_points: int,
    probe_words: Sequence[Sequence],
    pres: Optional[Presentation] = None,
) -> CheckResult:
    """Both sides of e2 on e_x1⊗w1⊗e_x2⊗w2⊗e_x3⊗w3 against δ δ e_x1⊗w1⊗w2⊗w3.

    Comparison is exact structural equality of canonical forms.
    """
    words = [tuple(Gen(*gen) for gen in w) for w in probe_words]
    if len(words) != 3:
        raise ValueError("check_e2 takes exactly three probe words")
    if pres is None:
        gens = [gen for w in words for gen in w]
        pres = Presentation(max([m_points] + [gen.x + 1 for gen in gens]), max([1] + [gen.k + 1 for gen in gens]))
    P = PointLeg(m_points)
    sig = (P, ALG, P, ALG, P, ALG)
    out_sig = (P, ALG, ALG, ALG)
    start = time.perf_counter()
    failures = []
    w1, w2, w3 = words
    for x1, x2, x3 in product(range(m_points), repeat=3):
        u = TensorElem(sig, pres, [((x1, w1, x2, w2, x3, w3), 1)])
        if x1 == x2 == x3:
            expected = TensorElem(out_sig, pres, [((x1, w1, w2, w3), 1)])
        else:
            expected = TensorElem.zero(out_sig, pres)
        lhs, rhs = e2_left(u), e2_right(u)
        if lhs != expected or rhs != expected:
            failures.append("(%d,%d,%d): left %s, right %s, expected %s" % (x1, x2, x3, lhs, rhs, expected))
    elapsed = time.perf_counter() - start
    if failures:
        return CheckResult("e2", CheckVerdict.FAIL, "; ".join(failures), elapsed)
    return CheckResult("e2", CheckVerdict.PASS, None, elapsed)


# -- counit / antipode experiments ---------------------------------------------


def is_counit(g: GammaPresentation, eps: CounitCandidate) -> bool:
    pres = g.pres
    eh = counit_hom(eps, pres)
    for gen in g.generators():
        img = g.images[gen]
        target = _gen_elem(pres, gen)
        if eq_tensor(substitute_hom(img, 0, eh), target) is not Verdict.EQUAL:
            return False
        if eq_tensor(substitute_hom(img, 1, eh), target) is not Verdict.EQUAL:
            return False
    return True


def search_counit(g: GammaPresentation, cap: int = DEFAULT_COUNIT_CAP) -> List[CounitCandidate]:
    """Every f: points -> S whose ε satisfies (ε⊗I)Γ = I = (I⊗ε)Γ on generators."""
    m, n = g.config.m, g.config.n
    if n ** m > cap:
        raise PreconditionError("counit search over %d^%d = %d candidates exceeds cap %d" % (n, m, n ** m, cap))
    return [eps for eps in map(CounitCandidate, product(range(n), repeat=m)) if is_counit(g, eps)]


def antipode_candidates(n: int, m: int) -> Iterable[AntipodeCandidate]:
    for sigma in product(list(permutations(range(n))), repeat=m):
        yield AntipodeCandidate(tuple(sigma))


def check_antipode_candidate(g: GammaPresentation, s: AntipodeCandidate, eps: CounitCandidate) -> CheckResult:
    """m(S⊗I)Γ(c) = ε(c)1 = m(I⊗S)Γ(c) for every generator c.

    A failure only rules out this permutation-type candidate.
    """
    if not is_counit(g, eps):
        raise PreconditionError("%r is not a counit of this Γ" % (eps,))
    if len(s.sigma) != g.config.m or any(len(row) != g.config.n for row in s.sigma):
        raise ValueError("antipode candidate shape does not match m x n")
    pres = g.pres
    sh = antipode_hom(s, pres)
    tally = _Tally("antipode %s" % (s.sigma,))
    for gen in g.generators():
        img = g.images[gen]
        target = _single(pres, (), eps.value(gen))
        tally.compare("%s left" % (gen,), apply_alg_mult(substitute_hom(img, 0, sh), 0), target)
        tally.compare("%s right" % (gen,), apply_alg_mult(substitute_hom(img, 1, sh), 0), target)
    return tally.result()


# -- mutation and driver ---------------------------------------------------------


def mutate_gamma(g: GammaPresentation, rng: random.Random) -> Tuple[GammaPresentation, str]:
    """Corrupt one term of one Γ image; returns the corrupted presentation and a description."""
    pres = g.pres
    gens = [gen for gen in g.generators() if len(g.images[gen])]
    gen = rng.choice(gens)
    img = g.images[gen]
    key = rng.choice(list(img.terms))
    coeff = img.terms[key]
    kinds = ["drop", "scale", "add"]
    if pres.n > 1 or pres.m > 1:
        kinds.append("replace")
    kind = rng.choice(kinds)
    terms = img.terms
    if kind == "drop":
        del terms[key]
        desc = "drop %s" % _key_text(key)
    elif kind == "scale":
        terms[key] = coeff * 2
        desc = "double %s" % _key_text(key)
    elif kind == "add":
        extra = (_random_word(pres, rng), _random_word(pres, rng))
        terms[extra] = terms.get(extra, GaussianRational(0)) + 1
        desc = "add %s" % _key_text(extra)
    else:
        leg = rng.randrange(2)
        old = key[leg][0]
        choices = [c for c in pres.generators() if c != old]
        new = list(key)
        new[leg] = (rng.choice(choices),)
        new = tuple(new)
        del terms[key]
        terms[new] = terms.get(new, GaussianRational(0)) + coeff
        desc = "replace %s by %s" % (_key_text(key), _key_text(new))
    images = dict(g.images)
    images[gen] = TensorElem((ALG, ALG), pres, terms)
    return replace(g, images=images), "Γ(%s): %s" % (gen, desc)


def _random_word(pres: Presentation, rng: random.Random) -> Word:
    return (Gen(rng.randrange(pres.m), rng.randrange(pres.n)),)


def _key_text(key) -> str:
    return "⊗".join(render_word(w) for w in key)


def verify_theorem(g: GammaPresentation, e2_words: Optional[Sequence[Sequence]] = None) -> VerificationReport:
    """Run every check of the coassociativity theorem for one presentation."""
    cfg = g.config
    report = VerificationReport()
    report.add(check_gamma_well_defined(g))
    report.add(check_diagram_d1(g))
    report.add(check_coassoc_delta(cfg))
    report.add(check_coassoc_gamma(g))
    report.add(check_e1(g))
    report.add(check_proof_chain(g))
    if e2_words is None:
        e2_words = [(Gen(0, 0),), (Gen(cfg.m - 1, 0),), (Gen(0, cfg.n - 1),)]
    report.add(check_e2(cfg.m, e2_words, cfg.pres))
    return report
