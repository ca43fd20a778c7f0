"""Generalized Baumslag-Solitar graphs of groups.

A LabeledGraph is a finite connected graph with a nonzero integer at each
edge end: lam at the origin, mu at the terminus. Each vertex carries an
infinite cyclic group <a_v>, each edge a letter x_e with the relation

    x_e a_{t(e)}^{mu(e)} x_e^{-1} = a_{o(e)}^{lam(e)}.

Group elements are closed edge-path words (GroupWord) from a base vertex,
alternating vertex powers and edge crossings. Britton reduction removes
pinches Cross(e,+) Pow(k*mu) Cross(e,-) -> Pow(k*lam) (and the mirrored
rule); cyclic reduction also removes pinches across the wrap, changing the
base point. The translation length of an element on the Bass-Serre tree is
the crossing count of its cyclically reduced form; ball_displacement_oracle
recomputes it from explicit tree geometry and serves as the independent
check of the Britton engine.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

from .errors import (
    Disconnected,
    IdentityViolation,
    InvalidPath,
    NotHyperbolic,
    SemanticError,
    ZeroLabel,
)
from .report import Report, digest

DEFAULT_SEARCH_BUDGET = 8
SEARCH_BUDGET_ENV = "SPLITTINGS_BUDGET"


def search_budget(L: Optional[int] = None) -> int:
    """Default bound for word searches, overridable via the environment."""
    if L is not None:
        return L
    return int(os.environ.get(SEARCH_BUDGET_ENV, DEFAULT_SEARCH_BUDGET))


# -- graphs -------------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    id: str
    origin: str
    terminus: str
    lam: int  # label at the origin end
    mu: int   # label at the terminus end

    def is_loop(self) -> bool:
        return self.origin == self.terminus


@dataclass(frozen=True)
class LabeledGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    base: Optional[str] = None
    spanning_tree: Optional[tuple[str, ...]] = None
    name: str = ""

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise SemanticError(f"no edge named {eid!r}")

    def has_vertex(self, v: str) -> bool:
        return v in self.vertices


def graph(vertices: Iterable[str], edges: Iterable[tuple], name: str = "") -> LabeledGraph:
    """Convenience constructor; edges are (id, origin, terminus, lam, mu)."""
    es = tuple(Edge(*t) for t in edges)
    return validate_graph(LabeledGraph(tuple(vertices), es, name=name))


def bs(m: int, n: int) -> LabeledGraph:
    """The Baumslag-Solitar group BS(m,n) = <a,t | t a^m t^-1 = a^n> as a
    one-loop graph; the forward crossing of the loop is the letter t."""
    return graph(("v",), (("e", "v", "v", n, m),), name=f"bs{m}_{n}")


def validate_graph(g: LabeledGraph) -> LabeledGraph:
    """Verify connectivity and nonzero labels; fix a base vertex and a
    spanning tree deterministically when absent."""
    if not g.vertices:
        raise Disconnected("empty graph")
    if len(set(g.vertices)) != len(g.vertices):
        raise SemanticError("duplicate vertex id")
    if len({e.id for e in g.edges}) != len(g.edges):
        raise SemanticError("duplicate edge id")
    for e in g.edges:
        if e.lam == 0 or e.mu == 0:
            raise ZeroLabel(f"edge {e.id} carries a zero label")
        if e.origin not in g.vertices or e.terminus not in g.vertices:
            raise SemanticError(f"edge {e.id} attached to an unknown vertex")
    base = g.base if g.base is not None else min(g.vertices)
    if base not in g.vertices:
        raise SemanticError(f"base {base!r} is not a vertex")
    # breadth-first spanning tree, edges taken in listed order
    parent_edge: dict[str, str] = {}
    seen = {base}
    queue = [base]
    while queue:
        v = queue.pop(0)
        for e in g.edges:
            for a, b in ((e.origin, e.terminus), (e.terminus, e.origin)):
                if a == v and b not in seen:
                    seen.add(b)
                    parent_edge[b] = e.id
                    queue.append(b)
    if seen != set(g.vertices):
        raise Disconnected("graph is not connected")
    tree = g.spanning_tree
    if tree is None:
        tree = tuple(sorted(set(parent_edge.values())))
    else:
        tree = tuple(tree)
    return LabeledGraph(tuple(g.vertices), tuple(g.edges), base, tree, g.name)


# -- words ---------------------------------------------------------------------

@dataclass(frozen=True)
class Pow:
    vertex: str
    n: int


@dataclass(frozen=True)
class Cross:
    edge: str
    sign: int  # +1 origin->terminus, -1 terminus->origin


Item = Union[Pow, Cross]


@dataclass(frozen=True)
class GroupWord:
    base: str
    items: tuple[Item, ...] = ()


def _rev(c: Cross) -> Cross:
    return Cross(c.edge, -c.sign)


def _dep_vertex(g: LabeledGraph, c: Cross) -> str:
    e = g.edge(c.edge)
    return e.origin if c.sign > 0 else e.terminus


def _arr_vertex(g: LabeledGraph, c: Cross) -> str:
    e = g.edge(c.edge)
    return e.terminus if c.sign > 0 else e.origin


def _dep_label(g: LabeledGraph, c: Cross) -> int:
    e = g.edge(c.edge)
    return e.lam if c.sign > 0 else e.mu


def _arr_label(g: LabeledGraph, c: Cross) -> int:
    e = g.edge(c.edge)
    return e.mu if c.sign > 0 else e.lam


def validate_word(g: LabeledGraph, w: GroupWord) -> GroupWord:
    """Check path-consistency: each item departs from the vertex where the
    previous one ends, and the path closes up at the base."""
    if not g.has_vertex(w.base):
        raise InvalidPath(f"base {w.base!r} is not a vertex")
    cur = w.base
    for item in w.items:
        if isinstance(item, Pow):
            if item.vertex != cur:
                raise InvalidPath(f"power at {item.vertex!r} but path is at {cur!r}")
        else:
            if _dep_vertex(g, item) != cur:
                raise InvalidPath(
                    f"crossing of {item.edge!r} departs {_dep_vertex(g, item)!r}"
                    f" but path is at {cur!r}"
                )
            cur = _arr_vertex(g, item)
    if cur != w.base:
        raise InvalidPath(f"path ends at {cur!r}, not at base {w.base!r}")
    return w


def concat(w1: GroupWord, w2: GroupWord) -> GroupWord:
    if w1.base != w2.base:
        raise InvalidPath("concatenated words must share a base vertex")
    return GroupWord(w1.base, w1.items + w2.items)


def inverse(w: GroupWord) -> GroupWord:
    items = []
    for item in reversed(w.items):
        if isinstance(item, Pow):
            items.append(Pow(item.vertex, -item.n))
        else:
            items.append(_rev(item))
    return GroupWord(w.base, tuple(items))


def power(w: GroupWord, n: int) -> GroupWord:
    if n < 0:
        return power(inverse(w), -n)
    return GroupWord(w.base, w.items * n)


# surface letters: ("a", vertex, exponent) and ("t", edge, +-1)

def tree_path(g: LabeledGraph, frm: str, to: str) -> list[Cross]:
    """Crossings along the spanning tree from one vertex to another."""
    if frm == to:
        return []
    tree_edges = [g.edge(eid) for eid in (g.spanning_tree or ())]
    prev: dict[str, Cross] = {}
    seen = {frm}
    queue = [frm]
    while queue:
        v = queue.pop(0)
        for e in tree_edges:
            for cross in (Cross(e.id, +1), Cross(e.id, -1)):
                if _dep_vertex(g, cross) == v and _arr_vertex(g, cross) not in seen:
                    nxt = _arr_vertex(g, cross)
                    seen.add(nxt)
                    prev[nxt] = cross
                    queue.append(nxt)
    if to not in prev:
        raise InvalidPath(f"no spanning-tree path from {frm!r} to {to!r}")
    path = []
    v = to
    while v != frm:
        c = prev[v]
        path.append(c)
        v = _dep_vertex(g, c)
    path.reverse()
    return path


def make_word(g: LabeledGraph, letters: Iterable[tuple], base: Optional[str] = None) -> GroupWord:
    """Build a closed word from surface letters, routing each letter through
    the spanning tree: a[v]^n conjugates a vertex power to the base, t[e]
    crosses e between tree connectors."""
    if g.base is None or g.spanning_tree is None:
        g = validate_graph(g)
    b = base if base is not None else g.base
    items: list[Item] = []
    for kind, name, k in letters:
        if kind == "a":
            if k == 0:
                continue
            items += tree_path(g, b, name)
            items.append(Pow(name, k))
            items += tree_path(g, name, b)
        elif kind == "t":
            e = g.edge(name)
            if k not in (+1, -1):
                raise InvalidPath(f"crossing exponent must be +-1, got {k}")
            start = e.origin if k > 0 else e.terminus
            end = e.terminus if k > 0 else e.origin
            items += tree_path(g, b, start)
            items.append(Cross(e.id, k))
            items += tree_path(g, end, b)
        else:
            raise InvalidPath(f"unknown letter kind {kind!r}")
    return validate_word(g, GroupWord(b, tuple(items)))


# -- Britton reduction -----------------------------------------------------------

@dataclass(frozen=True)
class NormalForm:
    """word: Britton-reduced form of the input (same group element).
    cyclic_word: cyclically reduced representative of its conjugacy class
    (base point may differ). crossing_sequence: edge-orbit ids of one period
    of the cyclic form, empty iff the element is elliptic."""

    word: GroupWord
    cyclic_word: GroupWord
    britton_reduced: bool
    cyclically_reduced: bool
    crossing_sequence: tuple[str, ...]


def _linear_reduce(g: LabeledGraph, w: GroupWord) -> list[tuple[Optional[Cross], int, str]]:
    """Stack pass yielding [(crossing or None, following power, vertex)].
    Once a crossing is buried under a later one its preceding power is
    frozen and pinch-free, so the output is Britton-reduced."""
    out: list[tuple[Optional[Cross], int, str]] = [(None, 0, w.base)]
    for item in w.items:
        if isinstance(item, Pow):
            c, p, v = out[-1]
            out[-1] = (c, p + item.n, v)
            continue
        c, p, v = out[-1]
        d = _dep_label(g, item)
        if c is not None and c == _rev(item) and p % d == 0:
            q = p // d
            out.pop()
            c2, p2, v2 = out[-1]
            out[-1] = (c2, p2 + q * _arr_label(g, item), v2)
        else:
            out.append((item, 0, _arr_vertex(g, item)))
    return out


def _cyclic_reduce(g: LabeledGraph, linear) -> tuple[list[tuple[Cross, int]], str, int]:
    """Cyclic pinch removal on the crossing list; returns the cyclic pair
    list, plus the vertex and exponent of the residual power (the whole
    element when the list empties)."""
    p0 = linear[0][1]
    pairs = [(c, p) for (c, p, _) in linear[1:]]
    if not pairs:
        return [], linear[0][2], p0
    last_c, last_p = pairs[-1]
    pairs[-1] = (last_c, last_p + p0)
    while pairs:
        k = len(pairs)
        hit = None
        for i in range(k):
            ci, qi = pairs[i]
            cj, qj = pairs[(i + 1) % k]
            if cj == _rev(ci) and qi % _dep_label(g, cj) == 0:
                hit = i
                break
        if hit is None:
            break
        i = hit
        j = (i + 1) % k
        ci, qi = pairs[i]
        cj, qj = pairs[j]
        q = qi // _dep_label(g, cj)
        carry = q * _dep_label(g, ci)
        if k == 2:
            return [], _dep_vertex(g, ci), carry + qj
        nl = [pairs[(j + 1 + s) % k] for s in range(k - 2)]
        pc, pq = nl[-1]
        nl[-1] = (pc, pq + carry + qj)
        pairs = nl
    return pairs, _dep_vertex(g, pairs[0][0]), 0


def _word_from_linear(g: LabeledGraph, base: str, linear) -> GroupWord:
    items: list[Item] = []
    if linear[0][1] != 0:
        items.append(Pow(base, linear[0][1]))
    for c, p, v in linear[1:]:
        items.append(c)
        if p != 0:
            items.append(Pow(v, p))
    return GroupWord(base, tuple(items))


def _word_from_cyclic(g: LabeledGraph, pairs, res_vertex: str, res_power: int) -> GroupWord:
    if not pairs:
        items = (Pow(res_vertex, res_power),) if res_power else ()
        return GroupWord(res_vertex, items)
    base = _dep_vertex(g, pairs[0][0])
    items: list[Item] = []
    for c, p in pairs:
        items.append(c)
        if p != 0:
            items.append(Pow(_arr_vertex(g, c), p))
    return GroupWord(base, tuple(items))


def britton_reduce(g: LabeledGraph, w: GroupWord) -> NormalForm:
    """Britton-reduce w, then cyclically reduce it. Terminates because every
    pinch removes two crossings."""
    g = validate_graph(g)
    validate_word(g, w)
    linear = _linear_reduce(g, w)
    word = _word_from_linear(g, w.base, linear)
    pairs, res_v, res_p = _cyclic_reduce(g, linear)
    cyclic_word = _word_from_cyclic(g, pairs, res_v, res_p)
    crossings = tuple(c.edge for c, _ in pairs)
    return NormalForm(
        word=word,
        cyclic_word=cyclic_word,
        britton_reduced=True,
        cyclically_reduced=(len(linear) - 1 == len(pairs)),
        crossing_sequence=crossings,
    )


def translation_length(g: LabeledGraph, w: GroupWord) -> int:
    """Crossing count of the cyclically reduced form; 0 iff elliptic."""
    return len(britton_reduce(g, w).crossing_sequence)


def is_elliptic(g: LabeledGraph, w: GroupWord) -> bool:
    return translation_length(g, w) == 0


# -- length-function identities ----------------------------------------------------

@dataclass(frozen=True)
class AxisGap:
    kind: str  # "meet" | "disjoint"
    gap: Optional[int] = None


def axis_gap(g: LabeledGraph, w1: GroupWord, w2: GroupWord) -> AxisGap:
    """Decide from lengths alone whether the axes of two hyperbolic elements
    meet, and if not, the distance between them: disjoint axes force
    l(w1 w2) = l(w1^-1 w2) = l(w1) + l(w2) + 2d, while meeting axes force
    max of the two products to be exactly l(w1) + l(w2). Any other outcome
    is an internal bug, reported as IdentityViolation."""
    g = validate_graph(g)
    l1 = translation_length(g, w1)
    l2 = translation_length(g, w2)
    if l1 == 0 or l2 == 0:
        raise NotHyperbolic("axis_gap needs hyperbolic inputs")
    a = translation_length(g, concat(w1, w2))
    b = translation_length(g, concat(inverse(w1), w2))
    s = l1 + l2
    if a == b and a > s and (a - s) % 2 == 0:
        return AxisGap("disjoint", (a - s) // 2)
    if max(a, b) == s:
        return AxisGap("meet")
    raise IdentityViolation(
        f"axis dichotomy failed: l={l1},{l2} product={a} inverse-product={b}"
    )


def _letters(g: LabeledGraph) -> list[tuple]:
    out: list[tuple] = []
    for v in g.vertices:
        out.append(("a", v, 1))
        out.append(("a", v, -1))
    for e in g.edges:
        out.append(("t", e.id, 1))
        out.append(("t", e.id, -1))
    return out


def _inverse_letter(x: tuple) -> tuple:
    return (x[0], x[1], -x[2])


def _letter_words(g: LabeledGraph, max_len: int) -> Iterator[tuple]:
    """Freely reduced letter strings of length 1..max_len, shortest first."""
    alphabet = _letters(g)
    level: list[tuple] = [()]
    for _ in range(max_len):
        nxt = []
        for w in level:
            for x in alphabet:
                if w and w[-1] == _inverse_letter(x):
                    continue
                nxt.append(w + (x,))
        for w in nxt:
            yield w
        level = nxt


def irreducibility_witness(
    g: LabeledGraph, L: Optional[int] = None
) -> Optional[tuple[GroupWord, GroupWord]]:
    """Search letter words of length <= L for hyperbolic w1, w2 whose
    commutator is hyperbolic; finding one certifies irreducibility, finding
    none only exhausts the budget (a semi-decision)."""
    g = validate_graph(g)
    L = search_budget(L)
    pool: list[GroupWord] = []
    seen: set[tuple] = set()
    for letters in _letter_words(g, L):
        w = make_word(g, letters)
        nf = britton_reduce(g, w)
        if not nf.crossing_sequence:
            continue
        key = (nf.word.base, nf.word.items)
        if key in seen:
            continue  # same group element as an earlier candidate
        seen.add(key)
        for w1 in pool:
            comm = concat(concat(w1, w), concat(inverse(w1), inverse(w)))
            if not is_elliptic(g, comm):
                return (w1, w)
        pool.append(w)
    return None


def modular_homomorphism(g: LabeledGraph, w: GroupWord) -> Fraction:
    """Product of lam/mu over forward crossings and mu/lam over backward
    ones; a homomorphism to the nonzero rationals, trivial on vertex
    powers."""
    g = validate_graph(g)
    validate_word(g, w)
    q = Fraction(1)
    for item in w.items:
        if isinstance(item, Cross):
            e = g.edge(item.edge)
            q *= Fraction(e.lam, e.mu) if item.sign > 0 else Fraction(e.mu, e.lam)
    return q


# -- reduction moves and classification ----------------------------------------------

def is_reduced(g: LabeledGraph) -> bool:
    """No non-loop edge carries a +-1 label (such an edge gives an
    elementary collapse; loop ends lie in one vertex orbit and never
    obstruct reducedness)."""
    g = validate_graph(g)
    return all(
        abs(e.lam) >= 2 and abs(e.mu) >= 2 for e in g.edges if not e.is_loop()
    )


def reduce(g: LabeledGraph) -> LabeledGraph:
    """Collapse non-loop edges with a +-1 label until none remains. The end
    with the unit label is absorbed into the other endpoint; every label at
    an absorbed end is rescaled by lam*mu of the collapsed edge."""
    g = validate_graph(g)
    vertices = list(g.vertices)
    edges = list(g.edges)
    base = g.base
    while True:
        target = None
        for e in edges:
            if not e.is_loop() and (abs(e.lam) == 1 or abs(e.mu) == 1):
                target = e
                break
        if target is None:
            break
        factor = target.lam * target.mu
        if abs(target.lam) == 1:
            absorbed, survivor = target.origin, target.terminus
        else:
            absorbed, survivor = target.terminus, target.origin
        new_edges = []
        for e in edges:
            if e.id == target.id:
                continue
            o, t, lam, mu = e.origin, e.terminus, e.lam, e.mu
            if o == absorbed:
                o, lam = survivor, lam * factor
            if t == absorbed:
                t, mu = survivor, mu * factor
            new_edges.append(Edge(e.id, o, t, lam, mu))
        edges = new_edges
        vertices.remove(absorbed)
        if base == absorbed:
            base = survivor
    return validate_graph(
        LabeledGraph(tuple(vertices), tuple(edges), base, None, g.name)
    )


@dataclass(frozen=True)
class Classification:
    kind: str  # "Z" | "Z2" | "Klein" | "BS1n" | "generic" | "unknown"
    n: Optional[int] = None

    def label(self) -> str:
        return f"BS(1,{self.n})" if self.kind == "BS1n" else self.kind


def classify_elementary(g: LabeledGraph) -> Classification:
    """Classify after reducing. A reduced loop with a unit end label
    presents BS(1, lam*mu) (n=1 gives Z^2, n=-1 the Klein bottle group);
    a reduced segment with both labels +-2 is the Klein bottle amalgam;
    everything else is generic."""
    r = reduce(g)
    if not r.edges:
        return Classification("Z")
    if len(r.edges) == 1:
        e = r.edges[0]
        if e.is_loop():
            if abs(e.lam) == 1 or abs(e.mu) == 1:
                n = e.lam * e.mu
                if n == 1:
                    return Classification("Z2")
                if n == -1:
                    return Classification("Klein")
                return Classification("BS1n", n)
            return Classification("generic")
        if abs(e.lam) == 2 and abs(e.mu) == 2:
            return Classification("Klein")
        return Classification("generic")
    return Classification("generic")


def _is_prime_power(n: int) -> bool:
    n = abs(n)
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
        p += 1
    return True  # n itself prime


def _graph_digest(g: LabeledGraph) -> str:
    body = ";".join(
        f"{e.id}:{e.origin}({e.lam})--{e.terminus}({e.mu})" for e in g.edges
    )
    return digest(",".join(g.vertices) + "|" + body)


def divisibility_criterion(g: LabeledGraph) -> dict[str, Optional[tuple[int, int]]]:
    """Per vertex: None when no incident end label divides another (equal
    labels divide each other), else one offending pair (a, b) with a | b."""
    g = validate_graph(g)
    out: dict[str, Optional[tuple[int, int]]] = {}
    for v in g.vertices:
        labels = []
        for e in g.edges:
            if e.origin == v:
                labels.append(abs(e.lam))
            if e.terminus == v:
                labels.append(abs(e.mu))
        hit = None
        for i in range(len(labels)):
            for j in range(len(labels)):
                if i != j and labels[j] % labels[i] == 0:
                    hit = (labels[i], labels[j])
                    break
            if hit:
                break
        out[v] = hit
    return out


def jsj_report(g: LabeledGraph) -> Report:
    """Known conclusions about the cyclic JSJ and compatibility JSJ of the
    group presented by g, from its elementary classification and the
    per-vertex label divisibility criterion of the reduced graph."""
    g = validate_graph(g)
    rep = Report(operation="gbs.jsj_report")
    rep.provenance["graph_digest"] = _graph_digest(g)
    reduced = reduce(g)
    cls = classify_elementary(g)
    rep.add("classify_elementary", "classification", cls.label())
    rep.values["edges_after_reduction"] = str(len(reduced.edges))
    if cls.kind in ("Z", "Z2", "Klein"):
        rep.add("jsj_report", "jsj", "trivial JSJ")
        rep.add("jsj_report", "summary", f"elementary ({cls.label()}); trivial JSJ")
        return rep
    if cls.kind == "BS1n":
        n = cls.n or 0
        rep.add("jsj_report", "jsj", "JSJ space nontrivial")
        if _is_prime_power(n):
            rep.add("jsj_report", "compatibility", "D_co = JSJ space")
            rep.add(
                "jsj_report", "summary", f"{cls.label()}: D_co = JSJ space"
            )
        else:
            rep.add("jsj_report", "compatibility", "D_co trivial")
            rep.add("jsj_report", "summary", f"{cls.label()}: D_co trivial")
        return rep
    # generic: the input tree's deformation space is the JSJ space
    rep.add(
        "jsj_report",
        "jsj",
        "nontrivial; the deformation space of the input tree is the JSJ space",
    )
    crit = divisibility_criterion(reduced)
    holds = all(hit is None for hit in crit.values())
    for v, hit in sorted(crit.items()):
        rep.add(
            "jsj_report",
            f"divisibility[{v}]",
            "ok" if hit is None else f"fails ({hit[0]} divides {hit[1]})",
        )
    if holds:
        rep.add("jsj_report", "divisibility", "holds at every vertex")
        rep.add("jsj_report", "conclusion", "unique reduced JSJ tree; T_co = T_J")
        rep.add("jsj_report", "summary", "rigid; T_co = T_J")
    else:
        rep.add("jsj_report", "divisibility", "fails at some vertex")
        rep.add("jsj_report", "summary", "divisibility criterion fails; no rigidity claim")
    if len(reduced.edges) == 1 and reduced.edges[0].is_loop():
        e = reduced.edges[0]
        a, b = abs(e.lam), abs(e.mu)
        if a != b and (b % a == 0 or a % b == 0) and min(a, b) >= 2:
            rep.add(
                "jsj_report",
                "out_note",
                "one loop label divides the other; Out(G) is not finitely"
                " generated for such loops (e.g. BS(2,4))",
                informational=True,
            )
    return rep


# -- the coset tree and the displacement oracle ------------------------------------

Step = tuple[Cross, int]


def _normalize_steps(g: LabeledGraph, base: str, items: Iterable[Item]) -> tuple[Step, ...]:
    """Left-to-right normalization of a path word into the canonical coset
    path of its endpoint vertex: each step (crossing, r) records the coset
    exponent r in [0, |departure label|) and quotients carry across the
    edge; a zero-coset step onto the reversed previous edge backtracks."""
    steps: list[Step] = []
    pending = 0
    for item in items:
        if isinstance(item, Pow):
            pending += item.n
            continue
        d = _dep_label(g, item)
        r = pending % abs(d)
        q = (pending - r) // d
        if steps and r == 0 and steps[-1][0] == _rev(item):
            prev_c, prev_r = steps.pop()
            pending = prev_r + q * _arr_label(g, item)
        else:
            steps.append((item, r))
            pending = q * _arr_label(g, item)
    return tuple(steps)


def _steps_items(g: LabeledGraph, steps: Iterable[Step]) -> list[Item]:
    items: list[Item] = []
    for c, r in steps:
        if r != 0:
            items.append(Pow(_dep_vertex(g, c), r))
        items.append(c)
    return items


def _tree_distance(x: tuple[Step, ...], y: tuple[Step, ...]) -> int:
    common = 0
    for a, b in zip(x, y):
        if a != b:
            break
        common += 1
    return len(x) + len(y) - 2 * common


def _departing(g: LabeledGraph, v: str) -> list[Cross]:
    out = []
    for e in g.edges:
        if e.origin == v:
            out.append(Cross(e.id, +1))
        if e.terminus == v:
            out.append(Cross(e.id, -1))
    return out


def _ball(g: LabeledGraph, base: str, radius: int, max_vertices: int) -> list[tuple[Step, ...]]:
    """Vertices of the radius-R ball around the base coset, breadth-first,
    truncated at max_vertices."""
    vertices: list[tuple[Step, ...]] = [()]
    frontier: list[tuple[Step, ...]] = [()]
    for _ in range(radius):
        nxt: list[tuple[Step, ...]] = []
        for p in frontier:
            tip = base if not p else _arr_vertex(g, p[-1][0])
            for c in _departing(g, tip):
                for r in range(abs(_dep_label(g, c))):
                    if p and r == 0 and p[-1][0] == _rev(c):
                        continue  # parent vertex
                    child = p + ((c, r),)
                    vertices.append(child)
                    nxt.append(child)
                    if len(vertices) >= max_vertices:
                        return vertices
        frontier = nxt
        if not frontier:
            break
    return vertices


def _word_reach(g: LabeledGraph, w: GroupWord) -> int:
    """Maximum distance from the base coset over the word's prefix path."""
    steps: list[Step] = []
    pending = 0
    reach = 0
    for item in w.items:
        if isinstance(item, Pow):
            pending += item.n
            continue
        d = _dep_label(g, item)
        r = pending % abs(d)
        q = (pending - r) // d
        if steps and r == 0 and steps[-1][0] == _rev(item):
            _, prev_r = steps.pop()
            pending = prev_r + q * _arr_label(g, item)
        else:
            steps.append((item, r))
            pending = q * _arr_label(g, item)
        reach = max(reach, len(steps))
    return reach


@dataclass(frozen=True)
class OracleResult:
    value: int
    valid: bool
    radius: int
    reach: int
    vertices_used: int
    reason: str = ""

    def __int__(self) -> int:
        return self.value


def ball_displacement_oracle(
    g: LabeledGraph, w: GroupWord, radius: int, max_vertices: int = 512
) -> OracleResult:
    """Independent translation-length computation from tree geometry: over
    an enumerated (truncated) ball, take the minimum of
    max(d(x, w^2 x) - d(x, w x), 0), which equals the translation length at
    every single vertex. The validity flag is set when the radius exceeds
    the word's reach plus the computed value."""
    g = validate_graph(g)
    validate_word(g, w)
    w_items = list(w.items)
    ball = _ball(g, w.base, radius, max_vertices)
    best: Optional[int] = None
    for x in ball:
        x_items = _steps_items(g, x)
        wx = _normalize_steps(g, w.base, w_items + x_items)
        wwx = _normalize_steps(g, w.base, w_items + w_items + x_items)
        f = max(_tree_distance(x, wwx) - _tree_distance(x, wx), 0)
        best = f if best is None else min(best, f)
    assert best is not None
    reach = _word_reach(g, w)
    valid = radius > reach + best
    reason = "" if valid else (
        f"radius {radius} does not exceed reach {reach} + value {best}"
    )
    return OracleResult(best, valid, radius, reach, len(ball), reason)


# -- seeded word sampling ------------------------------------------------------------

def random_letter_word(g: LabeledGraph, rng: random.Random, max_len: int) -> list[tuple]:
    """A random surface-letter word of length 1..max_len: vertex powers with
    exponents in [-3, 3] minus zero, or edge crossings."""
    g = g if g.base is not None else validate_graph(g)
    length = rng.randint(1, max_len)
    letters = []
    for _ in range(length):
        if g.edges and rng.random() < 0.5:
            e = rng.choice(g.edges)
            letters.append(("t", e.id, rng.choice((1, -1))))
        else:
            v = rng.choice(g.vertices)
            n = rng.choice((-3, -2, -1, 1, 2, 3))
            letters.append(("a", v, n))
    return letters


def sample_words(
    g: LabeledGraph, count: int, max_len: int, seed: int
) -> list[GroupWord]:
    g = validate_graph(g)
    rng = random.Random(seed)
    return [
        make_word(g, random_letter_word(g, rng, max_len)) for _ in range(count)
    ]
