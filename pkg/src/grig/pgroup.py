"""Structure of the finite 2-groups arising as quotient images: Frattini
ranks, lower central series, the nilpotent rank bound, and the semidirect
rank identity.

Every group here is a PermGroup inside some tree-automorphism 2-group, so
orders are powers of two by construction and the Burnside basis theorem
applies: the minimal number of generators equals the F2-dimension of the
quotient by the Frattini subgroup, and the Frattini subgroup is generated
(as a normal subgroup) by squares and commutators of any generating set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from grig._kernel import compose, inverse
from grig.permgroup import PermGroup, Permutation, normal_closure, subgroup


class NotA2Group(ValueError):
    pass


class ContainmentError(ValueError):
    pass


class NilpotencyCapError(RuntimeError):
    pass


LOWER_CENTRAL_CAP = 64


def _log2_exact(n):
    if n <= 0 or n & (n - 1):
        raise NotA2Group(f"order {n} is not a power of two")
    return n.bit_length() - 1


def frattini_subgroup(h):
    """Normal closure in h of the squares and pairwise commutators of its
    generators; for a finite 2-group this is the Frattini subgroup."""
    gens = [g.images for g in h.generators]
    seeds = []
    for a in gens:
        seeds.append(Permutation._wrap(compose(a, a)))
    invs = [inverse(a) for a in gens]
    for i, a in enumerate(gens):
        for j, b in enumerate(gens):
            if i < j:
                seeds.append(Permutation._wrap(
                    compose(invs[i], compose(invs[j], compose(a, b)))))
    return normal_closure(h, seeds)


@dataclass
class RankResult:
    rank: int
    order: int
    frattini_order: int
    frattini_subgroup: PermGroup


def frattini_data(h):
    phi = frattini_subgroup(h)
    d = _log2_exact(h.order // phi.order)
    return RankResult(d, h.order, phi.order, phi)


def frattini_rank(h):
    """Minimal number of generators of a finite 2-group, as
    log2 [H : Phi(H)] (Burnside basis theorem)."""
    return frattini_data(h).rank


@dataclass
class SeriesResult:
    terms: list
    nilpotency_class: int


def lower_central_series(h):
    """gamma_1 = H, gamma_{i+1} = normal closure in H of the commutators of
    H-generators with gamma_i-generators; stops at the trivial group."""
    terms = [h]
    current = h
    while not current.is_trivial():
        if len(terms) > LOWER_CENTRAL_CAP:
            raise NilpotencyCapError(
                f"lower central series did not terminate within "
                f"{LOWER_CENTRAL_CAP} terms")
        seeds = []
        for g in h.generators:
            gi = g.inverse()
            for s in current.generators:
                seeds.append(gi * s.inverse() * g * s)
        current = normal_closure(h, seeds)
        terms.append(current)
    return SeriesResult(terms, len(terms) - 1)


@dataclass
class RankBoundReport:
    d_ambient: int
    d_subgroup: int
    nilpotency_class: int
    bound: int
    holds: bool
    holds_strict: bool

    def to_json(self):
        return {
            "check": "nilpotent-rank-bound",
            "inputs": {"d_G": self.d_ambient, "class": self.nilpotency_class},
            "lhs": self.d_subgroup,
            "rhs": self.bound,
            "holds": self.holds,
            "holds_strict": self.holds_strict,
        }


def check_rank_bound(g, h):
    """Evaluate d(H) <= d(G)^c for H <= G nilpotent of class c.

    The bound is tested non-strictly: the strict form fails already for
    G = H cyclic (d = 1, c = 1), while the non-strict form is what the
    inductive d(G) + d(G)^2 + ... estimate actually gives.  Both verdicts
    are reported.
    """
    if not g.contains_group(h):
        raise ContainmentError("H is not contained in G")
    d_g = frattini_rank(g) if not g.is_trivial() else 0
    d_h = frattini_rank(h) if not h.is_trivial() else 0
    c = lower_central_series(g).nilpotency_class
    bound = d_g ** c
    return RankBoundReport(d_g, d_h, c, bound,
                           holds=d_h <= bound, holds_strict=d_h < bound)


class Lcg:
    """Fixed 64-bit linear congruential generator (constants from Knuth's
    MMIX) so that seeded transcripts are identical across platforms."""

    MULTIPLIER = 6364136223846793005
    INCREMENT = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed):
        self.state = seed & self.MASK

    def next_below(self, n):
        self.state = (self.state * self.MULTIPLIER + self.INCREMENT) & self.MASK
        return (self.state >> 33) % n


def random_subgroup(g, k, seed):
    """Subgroup generated by k pseudo-random words in g's generators;
    deterministic for a given seed."""
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = Lcg(seed)
    gens = [p.images for p in g.generators]
    if not gens:
        return subgroup(g.level, [])
    picks = []
    for _ in range(k):
        length = 1 + rng.next_below(16)
        word = np.arange(g.degree, dtype=np.int32)
        for _ in range(length):
            word = compose(word, gens[rng.next_below(len(gens))])
        picks.append(Permutation._wrap(word))
    return subgroup(g.level, picks)


def gf2_rank(vectors):
    """Rank over F2 of a list of bitmask-encoded vectors."""
    basis = []
    rank = 0
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
            rank += 1
    return rank


@dataclass
class SemidirectReport:
    dim_h: int
    rank_one_plus_alpha: int
    lhs: int
    rhs: int
    holds: bool
    alpha_columns: list = field(default_factory=list)

    def to_json(self):
        return {
            "check": "semidirect-rank-identity",
            "inputs": {"dim_H2": self.dim_h,
                       "rank_1_plus_alpha": self.rank_one_plus_alpha},
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
        }


def _mod_frattini_basis(h, phi):
    """Generators of h that are independent modulo phi, with the chain of
    partial spans used for coordinate extraction."""
    chains = [phi.chain.copy()]
    basis = []
    for g in h.generators:
        if chains[-1].contains(g.images):
            continue
        nxt = chains[-1].copy()
        nxt.insert(g.images)
        chains.append(nxt)
        basis.append(g)
    return basis, chains


def _coords_mod_frattini(e, basis, chains):
    """Coordinates of an element in the Frattini quotient, as a bitmask."""
    cur = np.array(e.images, dtype=np.int32)
    bits = 0
    for i in range(len(basis) - 1, -1, -1):
        if not chains[i].contains(cur):
            bits |= 1 << i
            cur = compose(cur, inverse(basis[i].images))
    if not chains[0].contains(cur):
        raise AssertionError("coordinate extraction left the span")
    return bits


def semidirect_rank_identity(h, x):
    """Cross-check of the rank of H extended by an involution x against
    dim(H^(2) / (1 + alpha) H^(2)) + 1, where alpha is the action of x on
    the Frattini quotient H^(2)."""
    if x.degree != h.degree:
        raise ValueError("degree mismatch")
    if not (x * x).is_identity() or x.is_identity():
        raise ValueError("x must have order 2")
    if h.contains(x):
        raise ValueError("x lies in H; the extension is not split")
    xi = x.inverse()
    for g in h.generators:
        if not h.contains(xi * g * x):
            raise ValueError("x does not normalize H")

    extended = subgroup(h.level, list(h.generators) + [x])
    lhs = frattini_rank(extended)

    phi = frattini_subgroup(h)
    basis, chains = _mod_frattini_basis(h, phi)
    d = len(basis)
    columns = []
    for i, g in enumerate(basis):
        image = _coords_mod_frattini(xi * g * x, basis, chains)
        columns.append((1 << i) ^ image)  # (1 + alpha) e_i
    r = gf2_rank(columns)
    rhs = (d - r) + 1
    return SemidirectReport(d, r, lhs, rhs, lhs == rhs, columns)
