"""Arithmetic of trees on the collapse lattice of one master splitting.

Every tree considered here is a collapse of a fixed master graph of groups,
named by the subset of edge orbits it keeps, so any two are compatible by
construction. Prime factors are the one-edge collapses; refinement is
containment of kept sets; gcd and lcm are intersection and union. Length
functions are computed by filtering the master's crossing sequences, which
realizes the additivity of lengths over prime factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from . import gbs
from .errors import IdentityViolation, SemanticError
from .gbs import GroupWord, LabeledGraph


@dataclass(frozen=True)
class MasterSplitting:
    graph: LabeledGraph
    orbits: tuple[str, ...]


@dataclass(frozen=True)
class CollapseTree:
    """The collapse of the master keeping exactly these edge orbits; the
    empty set is the trivial tree."""

    kept: frozenset[str]


def master(g: LabeledGraph) -> MasterSplitting:
    g = gbs.validate_graph(g)
    return MasterSplitting(g, tuple(e.id for e in g.edges))


def collapse(m: MasterSplitting, kept: Iterable[str]) -> CollapseTree:
    kept = frozenset(kept)
    unknown = kept - set(m.orbits)
    if unknown:
        raise SemanticError(f"unknown edge orbits {sorted(unknown)}")
    return CollapseTree(kept)


def prime_factors(K: CollapseTree) -> set[CollapseTree]:
    """The one-edge collapses of K."""
    return {CollapseTree(frozenset((e,))) for e in K.kept}


def refines(K1: CollapseTree, K2: CollapseTree) -> bool:
    """K1 refines K2 when every prime factor of K2 is one of K1."""
    return K2.kept <= K1.kept


def gcd(K1: CollapseTree, K2: CollapseTree) -> CollapseTree:
    return CollapseTree(K1.kept & K2.kept)


def lcm(K1: CollapseTree, K2: CollapseTree) -> CollapseTree:
    return CollapseTree(K1.kept | K2.kept)


def length_in_collapse(m: MasterSplitting, K: CollapseTree, w: GroupWord) -> int:
    """Translation length of w in the collapse: crossings of the master's
    cyclically reduced form that survive into K."""
    seq = gbs.britton_reduce(m.graph, w).crossing_sequence
    return sum(1 for eid in seq if eid in K.kept)


def verify_modularity(
    m: MasterSplitting,
    K1: CollapseTree,
    K2: CollapseTree,
    words: Iterable[GroupWord],
) -> bool:
    """Check l_lcm + l_gcd = l_1 + l_2 on every word. A failure would be a
    bug in the length machinery, never a counterexample."""
    union = lcm(K1, K2).kept
    inter = gcd(K1, K2).kept
    for w in words:
        seq = gbs.britton_reduce(m.graph, w).crossing_sequence
        l1 = sum(1 for e in seq if e in K1.kept)
        l2 = sum(1 for e in seq if e in K2.kept)
        lu = sum(1 for e in seq if e in union)
        li = sum(1 for e in seq if e in inter)
        if lu + li != l1 + l2:
            return False
    return True


def squarefree_witnesses(
    m: MasterSplitting, K: CollapseTree, L: Optional[int] = None
) -> dict[frozenset[CollapseTree], Optional[GroupWord]]:
    """For each unordered pair of distinct prime factors of K, search letter
    words of length <= L for one separating their length functions. Pairs
    left unwitnessed within the budget map to None (a semi-decision; the
    distinctness of prime factors guarantees a witness exists)."""
    L = gbs.search_budget(L)
    primes = sorted(prime_factors(K), key=lambda p: sorted(p.kept))
    pending: dict[frozenset[CollapseTree], Optional[GroupWord]] = {}
    for i in range(len(primes)):
        for j in range(i + 1, len(primes)):
            pending[frozenset((primes[i], primes[j]))] = None
    if not pending:
        return {}
    remaining = set(pending)
    for letters in gbs._letter_words(m.graph, L):
        w = gbs.make_word(m.graph, letters)
        seq = gbs.britton_reduce(m.graph, w).crossing_sequence
        for pair in list(remaining):
            p1, p2 = sorted(pair, key=lambda p: sorted(p.kept))
            l1 = sum(1 for e in seq if e in p1.kept)
            l2 = sum(1 for e in seq if e in p2.kept)
            if l1 != l2:
                pending[pair] = w
                remaining.discard(pair)
        if not remaining:
            break
    return pending


def elliptic_in_lcm(
    m: MasterSplitting, w: GroupWord, Ks: list[CollapseTree]
) -> bool:
    """Whether w is elliptic in the lcm of the given collapses; asserts the
    equivalence with being elliptic in every factor before returning."""
    if not Ks:
        raise SemanticError("elliptic_in_lcm needs at least one collapse")
    seq = gbs.britton_reduce(m.graph, w).crossing_sequence
    union = frozenset().union(*(K.kept for K in Ks))
    in_lcm = all(e not in union for e in seq)
    in_each = all(all(e not in K.kept for e in seq) for K in Ks)
    if in_lcm != in_each:
        raise IdentityViolation(
            "ellipticity in the lcm disagreed with per-factor ellipticity"
        )
    return in_lcm
