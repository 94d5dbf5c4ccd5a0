"""Matrix representations of C used as a floating-point oracle.

A representation assigns a d×d orthogonal projection to every generator
c[x,k] such that each row of projections sums to the identity.  Symbolic
results are evaluated in such representations and compared with quantities
computed directly from the matrices and the semigroup table.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .qfam import GammaPresentation, d1_sides, e1_sides
from .starpoly import Gen, Preset, StarPoly, Verdict, Word
from .tensorspace import AlgLeg, PointLeg, TensorElem

__all__ = [
    "CONSTRUCTION_TOL",
    "IDENTITY_TOL",
    "SEPARATION_TOL",
    "NumericRep",
    "sample_rep",
    "sample_magic_rep",
    "rep_two_projection_path",
    "evaluate_word",
    "evaluate_poly",
    "evaluate_components",
    "evaluate_tensor",
    "NumericMirror",
    "separation",
    "oracle_agreement",
    "oracle_reps",
    "sample_reps",
    "worst_residuals",
    "RESIDUAL_CHECKS",
]

log = logging.getLogger(__name__)

CONSTRUCTION_TOL = 1e-12
IDENTITY_TOL = 1e-9
SEPARATION_TOL = 1e-4


@dataclass(frozen=True, eq=False)
class NumericRep:
    m: int
    n: int
    d: int
    mats: np.ndarray  # shape (m, n, d, d)
    tol: float = CONSTRUCTION_TOL
    seed: Optional[int] = None
    label: str = ""

    def __post_init__(self):
        if self.mats.shape != (self.m, self.n, self.d, self.d):
            raise ValueError("expected matrices of shape %r, got %r" % ((self.m, self.n, self.d, self.d), self.mats.shape))

    def gen(self, x: int, k: int) -> np.ndarray:
        return self.mats[x, k]

    def relation_residuals(self, preset: Preset = Preset.ALL_MAPS) -> Dict[str, float]:
        eye = np.eye(self.d)
        mats = self.mats
        res = {
            "self_adjoint": max(_norm(p - p.conj().T) for p in mats.reshape(-1, self.d, self.d)),
            "idempotent": max(_norm(p @ p - p) for p in mats.reshape(-1, self.d, self.d)),
            "row_sums": max(_norm(mats[x].sum(axis=0) - eye) for x in range(self.m)),
        }
        if preset is Preset.MAGIC_SQUARE:
            res["column_sums"] = max(_norm(mats[:, k].sum(axis=0) - eye) for k in range(self.n))
        return res


def _norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def _random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def _random_composition(d: int, n: int, rng: np.random.Generator) -> List[int]:
    # uniform weak composition: n-1 bars among d+n-1 slots
    bars = np.sort(rng.choice(d + n - 1, size=n - 1, replace=False))
    edges = np.concatenate(([-1], bars, [d + n - 1]))
    return [int(b - a - 1) for a, b in zip(edges[:-1], edges[1:])]


def sample_rep(m: int, n: int, d: int, seed: int, tol: float = CONSTRUCTION_TOL) -> NumericRep:
    """Random representation: row x is U_x diag-block selectors U_x*."""
    if m < 1 or n < 1 or d < 1:
        raise ValueError("invalid dimensions m=%d n=%d d=%d" % (m, n, d))
    if d < n:
        warnings.warn("d=%d < n=%d: some projections are forced to vanish" % (d, n), stacklevel=2)
    rng = np.random.default_rng(seed)
    mats = np.zeros((m, n, d, d), dtype=complex)
    for x in range(m):
        u = _random_unitary(d, rng)
        start = 0
        for k, size in enumerate(_random_composition(d, n, rng)):
            cols = u[:, start : start + size]
            mats[x, k] = cols @ cols.conj().T
            start += size
    return NumericRep(m, n, d, mats, tol, seed, "random d=%d seed=%d" % (d, seed))


def sample_magic_rep(n: int, d: int, seed: int, tol: float = CONSTRUCTION_TOL) -> NumericRep:
    """Direct sum of d random permutation matrices, rotated by one random unitary.

    These satisfy the magic-square relations; all generators commute.
    """
    rng = np.random.default_rng(seed)
    u = _random_unitary(d, rng)
    diag = np.zeros((n, n, d))
    for j in range(d):
        perm = rng.permutation(n)
        diag[np.arange(n), perm, j] = 1.0
    mats = np.einsum("ij,xkj,lj->xkil", u, diag, u.conj())
    return NumericRep(n, n, d, mats, tol, seed, "magic d=%d seed=%d" % (d, seed))


def rep_two_projection_path(t: float) -> NumericRep:
    """Row 0: p = diag(1,0), 1-p.  Row 1: q(t) = R(t) diag(1,0) R(t)*, 1-q(t)."""
    if not 0.0 <= t <= np.pi / 2 + 1e-15:
        raise ValueError("angle must lie in [0, pi/2], got %r" % t)
    p = np.diag([1.0, 0.0]).astype(complex)
    c, s = np.cos(t), np.sin(t)
    rot = np.array([[c, -s], [s, c]], dtype=complex)
    q = rot @ p @ rot.conj().T
    eye = np.eye(2)
    mats = np.array([[p, eye - p], [q, eye - q]])
    return NumericRep(2, 2, 2, mats, CONSTRUCTION_TOL, None, "two-projection t=%.6g" % t)


# -- evaluation ---------------------------------------------------------------


def evaluate_word(w: Word, rep: NumericRep) -> np.ndarray:
    out = np.eye(rep.d, dtype=complex)
    for g in w:
        if not (0 <= g.x < rep.m and 0 <= g.k < rep.n):
            raise ValueError("generator %s outside the representation's %dx%d range" % (g, rep.m, rep.n))
        out = out @ rep.mats[g.x, g.k]
    return out


def evaluate_poly(p: StarPoly, rep: NumericRep) -> np.ndarray:
    out = np.zeros((rep.d, rep.d), dtype=complex)
    for w, c in p.items():
        out += complex(c) * evaluate_word(w, rep)
    return out


_LETTERS = "abcdefghijklmnopqrsuvwxyz"


def _kron_sum(coeffs: np.ndarray, legs: List[np.ndarray], d: int) -> np.ndarray:
    """Σ_t coeffs[t] · legs[0][t] ⊗ legs[1][t] ⊗ ... as one matrix."""
    nlegs = len(legs)
    if nlegs == 0:
        return np.array([[coeffs.sum()]])
    rows = _LETTERS[:nlegs]
    cols = _LETTERS[nlegs : 2 * nlegs]
    spec = "t," + ",".join("t%s%s" % (r, c) for r, c in zip(rows, cols)) + "->" + rows + cols
    out = np.einsum(spec, coeffs, *legs, optimize=True)
    size = d ** nlegs
    return out.reshape(size, size)


def evaluate_components(u: TensorElem, rep: NumericRep) -> Dict[Tuple[int, ...], np.ndarray]:
    """Matrix of the algebra legs for every tuple of point indices present in ``u``."""
    point_pos = [i for i, k in enumerate(u.signature) if isinstance(k, PointLeg)]
    alg_pos = [i for i, k in enumerate(u.signature) if isinstance(k, AlgLeg)]
    cache: Dict[Word, np.ndarray] = {}
    grouped: Dict[Tuple[int, ...], list] = {}
    for key, c in u.items():
        pk = tuple(key[i] for i in point_pos)
        mats = []
        for i in alg_pos:
            w = key[i]
            if w not in cache:
                cache[w] = evaluate_word(w, rep)
            mats.append(cache[w])
        grouped.setdefault(pk, []).append((complex(c), mats))
    out = {}
    for pk, items in grouped.items():
        coeffs = np.array([c for c, _ in items])
        legs = [np.array([mats[j] for _, mats in items]) for j in range(len(alg_pos))]
        out[pk] = _kron_sum(coeffs, legs, rep.d)
    return out


def evaluate_tensor(
    u: TensorElem, rep: NumericRep, point_leg_vectors: Optional[Sequence[Sequence[complex]]] = None
) -> np.ndarray:
    """Pair point legs with ``point_leg_vectors`` and Kronecker the algebra legs.

    Without vectors every point leg is paired with the all-ones vector, which
    is evaluation against the unit of C^d.
    """
    point_dims = [k.d for k in u.signature if isinstance(k, PointLeg)]
    nalg = sum(1 for k in u.signature if isinstance(k, AlgLeg))
    if point_leg_vectors is None:
        point_leg_vectors = [np.ones(d) for d in point_dims]
    if len(point_leg_vectors) != len(point_dims):
        raise ValueError("need %d point-leg vectors, got %d" % (len(point_dims), len(point_leg_vectors)))
    for vec, d in zip(point_leg_vectors, point_dims):
        if len(vec) != d:
            raise ValueError("point-leg vector of length %d for a leg of dimension %d" % (len(vec), d))
    size = rep.d ** nalg
    out = np.zeros((size, size), dtype=complex)
    for pk, mat in evaluate_components(u, rep).items():
        weight = np.prod([vec[i] for vec, i in zip(point_leg_vectors, pk)]) if pk else 1.0
        out += weight * mat
    return out


def _component_residual(u: TensorElem, expected: Dict[Tuple[int, ...], np.ndarray], rep: NumericRep) -> float:
    got = evaluate_components(u, rep)
    worst = 0.0
    for pk in set(got) | set(expected):
        a = got.get(pk)
        b = expected.get(pk)
        if a is None:
            a = np.zeros_like(b)
        if b is None:
            b = np.zeros_like(a)
        worst = max(worst, _norm(a - b))
    return worst


def separation(a: TensorElem, b: TensorElem, reps: Iterable[NumericRep]) -> float:
    """Largest component residual of a - b over the given representations."""
    diff = a - b
    worst = 0.0
    for rep in reps:
        for mat in evaluate_components(diff, rep).values():
            worst = max(worst, _norm(mat))
    return worst


def oracle_reps(m: int, n: int, preset: Preset = Preset.ALL_MAPS, seed: int = 0, samples: int = 7) -> List[NumericRep]:
    """Up to 20 representations across d in {2, 4, 8}."""
    return sample_reps(m, n, [2, 4, 8], samples, seed, preset)[:20]


def oracle_agreement(a, b, verdict: Verdict, reps: Sequence[NumericRep]) -> str:
    """Judge a symbolic equality verdict against matrices.

    Returns "agree", "disagree" (Equal but some residual > IDENTITY_TOL) or
    "unseparated" (NotEqual but no representation separates the two sides by
    SEPARATION_TOL).  Inconclusive verdicts always agree.  Unseparated pairs
    are logged; they say something about the sample, not about the engine.
    """
    if isinstance(a, StarPoly):
        a, b = TensorElem.from_poly(a), TensorElem.from_poly(b)
    gap = separation(a, b, reps)
    if verdict is Verdict.EQUAL:
        return "agree" if gap <= IDENTITY_TOL else "disagree"
    if verdict is Verdict.NOT_EQUAL and gap < SEPARATION_TOL:
        log.warning("unseparated: %s vs %s (largest residual %.3g over %d reps)", a, b, gap, len(reps))
        return "unseparated"
    return "agree"


class NumericMirror:
    """Theorem identities recomputed from matrices, compared with symbolic results.

    The numeric side never consults the symbolic engine: it builds
    Γ(c[x,k]) = Σ_{ξ(r,s)=k} P[x,r] ⊗ P[x,s] straight from the table.
    """

    def __init__(self, g: GammaPresentation):
        self.g = g
        cfg = g.config
        self.pairs = {k: cfg.pairs_to(k) for k in range(cfg.n)}
        self.d1 = {k: d1_sides(g, k) for k in range(cfg.n)}
        self.e1 = {k: e1_sides(g, k) for k in range(cfg.n)}

    def residuals(self, rep: NumericRep) -> Dict[str, float]:
        cfg = self.g.config
        m, n = cfg.m, cfg.n
        if (rep.m, rep.n) != (m, n):
            raise ValueError("representation is %dx%d, presentation is %dx%d" % (rep.m, rep.n, m, n))
        P = rep.mats
        d2 = rep.d * rep.d
        eye2 = np.eye(d2)
        gamma = {}
        for x in range(m):
            for k in range(n):
                acc = np.zeros((d2, d2), dtype=complex)
                for r, s in self.pairs[k]:
                    acc += np.kron(P[x, r], P[x, s])
                gamma[x, k] = acc

        res = {"relations": max(rep.relation_residuals(self.g.pres.preset).values())}
        res["gamma_self_adjoint"] = max(_norm(G - G.conj().T) for G in gamma.values())
        res["gamma_idempotent"] = max(_norm(G @ G - G) for G in gamma.values())
        res["gamma_row_sums"] = max(_norm(sum(gamma[x, k] for k in range(n)) - eye2) for x in range(m))
        res["gamma_row_orthogonal"] = max(
            [_norm(gamma[x, k] @ gamma[x, j]) for x in range(m) for k in range(n) for j in range(n) if j != k],
            default=0.0,
        )
        if self.g.pres.preset is Preset.MAGIC_SQUARE:
            res["gamma_column_sums"] = max(_norm(sum(gamma[x, k] for x in range(m)) - eye2) for k in range(n))
            res["gamma_column_orthogonal"] = max(
                [_norm(gamma[x, k] @ gamma[y, k]) for k in range(n) for x in range(m) for y in range(m) if x != y],
                default=0.0,
            )
        res["gamma_images"] = max(
            _component_residual(self.g.images[Gen(x, k)], {(): gamma[x, k]}, rep) for x in range(m) for k in range(n)
        )

        d1 = 0.0
        for k, (lhs, rhs) in self.d1.items():
            expected = {(x,): gamma[x, k] for x in range(m)}
            d1 = max(d1, _component_residual(lhs, expected, rep), _component_residual(rhs, expected, rep))
        res["diagram_d1"] = d1

        left_num, right_num = {}, {}
        for x in range(m):
            for k in range(n):
                left = np.zeros((d2 * rep.d, d2 * rep.d), dtype=complex)
                right = np.zeros_like(left)
                for r, s in self.pairs[k]:
                    left += np.kron(gamma[x, r], P[x, s])
                    right += np.kron(P[x, r], gamma[x, s])
                left_num[x, k], right_num[x, k] = left, right
        res["coassoc_gamma"] = max(_norm(left_num[key] - right_num[key]) for key in left_num)

        e1 = 0.0
        for k, (lhs, rhs) in self.e1.items():
            e1 = max(
                e1,
                _component_residual(lhs, {(x,): right_num[x, k] for x in range(m)}, rep),
                _component_residual(rhs, {(x,): left_num[x, k] for x in range(m)}, rep),
            )
        res["e1"] = e1
        return res


def sample_reps(
    m: int, n: int, dims: Sequence[int], samples: int, seed: int, preset: Preset = Preset.ALL_MAPS
) -> List[NumericRep]:
    """``samples`` representations per dimension; seeds derive from (seed, d, i)."""
    reps = []
    for d in dims:
        for i in range(samples):
            sub = int(np.random.SeedSequence([seed, d, i]).generate_state(1)[0])
            if preset is Preset.MAGIC_SQUARE:
                reps.append(sample_magic_rep(n, d, sub))
            else:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    reps.append(sample_rep(m, n, d, sub))
    return reps


# numeric residual name -> theorem check it corroborates
RESIDUAL_CHECKS = {
    "gamma_self_adjoint": "gamma_self_adjoint",
    "gamma_idempotent": "gamma_idempotent",
    "gamma_row_sums": "gamma_row_sums",
    "gamma_row_orthogonal": "gamma_row_orthogonal",
    "gamma_column_sums": "gamma_column_sums",
    "gamma_column_orthogonal": "gamma_column_orthogonal",
    "gamma_images": "diagram_d1",
    "diagram_d1": "diagram_d1",
    "coassoc_gamma": "coassoc_gamma",
    "e1": "e1",
}


def worst_residuals(g: GammaPresentation, reps: Iterable[NumericRep]) -> Dict[str, float]:
    mirror = NumericMirror(g)
    worst: Dict[str, float] = {}
    for rep in reps:
        for key, val in mirror.residuals(rep).items():
            worst[key] = max(worst.get(key, 0.0), val)
    return worst
