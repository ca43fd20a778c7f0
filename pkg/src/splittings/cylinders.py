"""Quotient of the (collapsed) tree of cylinders from finite local data.

The skeleton is the quotient graph of a tree action, with free-text group
labels. The atlas partitions the edge ends at each vertex orbit into local
classes: two tree edges at a common vertex lift are co-cylindrical exactly
when their ends lie in the same class (the orbit-homogeneity hypothesis),
and the plural flag records whether one lift of the vertex meets at least
two cylinders through edges of that class.

The quotient of the tree of cylinders is then bipartite: V0 vertices are
the vertex orbits lying in at least two cylinders (two or more classes, or
any plural class), V1 vertices are the cylinder orbits (carrying the
user-asserted stabilizer labels), with one edge per local class at a V0
vertex. Vertex orbits not in V0 are absorbed into their unique cylinder.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import Disconnected, MissingFlag, SemanticError, UnclassedEnd

End = tuple[str, str]  # (edge orbit id, "o" | "t")


@dataclass(frozen=True)
class SkeletonVertex:
    id: str
    group: str = ""


@dataclass(frozen=True)
class SkeletonEdge:
    id: str
    origin: str
    terminus: str
    group: str = ""


@dataclass(frozen=True)
class SkeletonGraph:
    vertices: tuple[SkeletonVertex, ...]
    edges: tuple[SkeletonEdge, ...]
    name: str = ""

    def vertex_ids(self) -> list[str]:
        return [v.id for v in self.vertices]

    def incident_ends(self, v: str) -> list[End]:
        out = []
        for e in self.edges:
            if e.origin == v:
                out.append((e.id, "o"))
            if e.terminus == v:
                out.append((e.id, "t"))
        return out


@dataclass(frozen=True)
class LocalClass:
    vertex: str
    name: str
    ends: tuple[End, ...]
    plural: Optional[bool] = None
    in_A: Optional[bool] = None

    def key(self) -> tuple[str, str]:
        return (self.vertex, self.name)


@dataclass(frozen=True)
class CylinderAtlas:
    classes: tuple[LocalClass, ...]
    # (edge orbit id, label): stabilizer label asserted for the cylinder
    # orbit containing that edge
    stabilizers: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class QEdge:
    v0: str
    local_class: str
    cyl: str
    in_A: Optional[bool] = None


@dataclass(frozen=True)
class QuotientGraph:
    """Bipartite quotient: v1 entries are (cylinder orbit id, stabilizer
    label); absorbed lists the non-V0 vertex orbits and the cylinder that
    swallowed them."""

    v0: tuple[str, ...]
    v1: tuple[tuple[str, str], ...]
    edges: tuple[QEdge, ...]
    absorbed: tuple[tuple[str, str], ...] = ()


def validate_atlas(s: SkeletonGraph, a: CylinderAtlas) -> list[str]:
    """Structural checks plus the hypothesis manifest: the statements the
    user asserts and the computation cannot verify."""
    vids = s.vertex_ids()
    if len(set(vids)) != len(vids):
        raise SemanticError("duplicate vertex orbit id")
    if len({e.id for e in s.edges}) != len(s.edges):
        raise SemanticError("duplicate edge orbit id")
    for e in s.edges:
        if e.origin not in vids or e.terminus not in vids:
            raise SemanticError(f"edge {e.id} attached to an unknown vertex orbit")
    if s.vertices:
        seen = {vids[0]}
        queue = [vids[0]]
        while queue:
            v = queue.pop(0)
            for e in s.edges:
                for x, y in ((e.origin, e.terminus), (e.terminus, e.origin)):
                    if x == v and y not in seen:
                        seen.add(y)
                        queue.append(y)
        if seen != set(vids):
            raise Disconnected("skeleton is not connected")
    keys = [c.key() for c in a.classes]
    if len(set(keys)) != len(keys):
        raise SemanticError("duplicate local class id at a vertex orbit")
    classed: dict[End, tuple[str, str]] = {}
    for c in a.classes:
        if c.vertex not in vids:
            raise SemanticError(f"class at unknown vertex orbit {c.vertex!r}")
        incident = set(s.incident_ends(c.vertex))
        for end in c.ends:
            if end not in incident:
                raise SemanticError(
                    f"end {end} is not incident to vertex orbit {c.vertex!r}"
                )
            if end in classed:
                raise SemanticError(f"end {end} classed twice")
            classed[end] = c.key()
        if c.plural is None:
            raise MissingFlag(f"class {c.key()} has no plural flag")
    for v in vids:
        for end in s.incident_ends(v):
            if end not in classed:
                raise UnclassedEnd(f"end {end} at {v!r} belongs to no local class")
    known_edges = {e.id for e in s.edges}
    for eid, _ in a.stabilizers:
        if eid not in known_edges:
            raise SemanticError(f"stabilizer label for unknown edge orbit {eid!r}")
    if not s.edges:
        return []  # no relation encoded, nothing to assume
    return [
        "the encoded relation is admissible; in particular every cylinder"
        " is a subtree (the betweenness axiom is not machine-checkable)",
        "orbit homogeneity: whether two edges at a common vertex lift are"
        " co-cylindrical depends only on their orbits and the local class",
        "cylinder stabilizer labels are user-asserted group data, not"
        " computed from the skeleton",
    ]


def cylinder_orbits(s: SkeletonGraph, a: CylinderAtlas) -> list[tuple[str, ...]]:
    """Partition of edge orbits into cylinder orbits: the components of
    "some ends lie in one local class"."""
    parent = {e.id: e.id for e in s.edges}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: str, y: str) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for c in a.classes:
        ids = [eid for eid, _ in c.ends]
        for other in ids[1:]:
            union(ids[0], other)
    groups: dict[str, list[str]] = {}
    for e in s.edges:
        groups.setdefault(find(e.id), []).append(e.id)
    return [tuple(sorted(groups[r])) for r in sorted(groups)]


def _cylinder_ids(partition: list[tuple[str, ...]]) -> dict[str, str]:
    """Map each edge orbit to its cylinder orbit id Y1, Y2, ..."""
    out = {}
    for i, part in enumerate(partition, start=1):
        for eid in part:
            out[eid] = f"Y{i}"
    return out


def tree_of_cylinders_quotient(s: SkeletonGraph, a: CylinderAtlas) -> QuotientGraph:
    validate_atlas(s, a)
    partition = cylinder_orbits(s, a)
    cyl_of = _cylinder_ids(partition)
    labels: dict[str, str] = {}
    for eid, label in a.stabilizers:
        y = cyl_of[eid]
        if y in labels and labels[y] != label:
            raise SemanticError(
                f"conflicting stabilizer labels for cylinder orbit {y}"
            )
        labels[y] = label
    classes_at: dict[str, list[LocalClass]] = {v: [] for v in s.vertex_ids()}
    for c in a.classes:
        classes_at[c.vertex].append(c)
    v0 = []
    edges = []
    absorbed = []
    for v in s.vertex_ids():
        cs = classes_at[v]
        if len(cs) >= 2 or any(c.plural for c in cs):
            v0.append(v)
            for c in cs:
                y = cyl_of[c.ends[0][0]]
                edges.append(QEdge(v, c.name, y, c.in_A))
        elif cs:
            absorbed.append((v, cyl_of[cs[0].ends[0][0]]))
    v1 = [(f"Y{i}", labels.get(f"Y{i}", "?")) for i in range(1, len(partition) + 1)]
    return QuotientGraph(tuple(v0), tuple(v1), tuple(edges), tuple(absorbed))


def collapse_non_A(
    q: QuotientGraph, flags: Optional[Mapping[tuple[str, str], bool]] = None
) -> QuotientGraph:
    """Contract the quotient edges whose stabilizer is not in the admitted
    family; a merged vertex is V1 when any member was. flags (keyed by
    (v0, local class)) override the atlas flags carried on the edges."""
    def flag_of(e: QEdge) -> bool:
        if flags is not None and (e.v0, e.local_class) in flags:
            return flags[(e.v0, e.local_class)]
        if e.in_A is None:
            raise MissingFlag(f"edge ({e.v0}, {e.local_class}) has no in_A flag")
        return e.in_A

    nodes = [("V0", v) for v in q.v0] + [("V1", y) for y, _ in q.v1]
    parent = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    keep: list[QEdge] = []
    for e in q.edges:
        if flag_of(e):
            keep.append(e)
        else:
            rx, ry = find(("V0", e.v0)), find(("V1", e.cyl))
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    members: dict[tuple, list[tuple]] = {}
    for n in nodes:
        members.setdefault(find(n), []).append(n)
    labels = dict(q.v1)
    new_id: dict[tuple, str] = {}
    new_kind: dict[tuple, str] = {}
    for root, mem in members.items():
        names = sorted(name for _, name in mem)
        nid = "+".join(names)
        kind = "V1" if any(k == "V1" for k, _ in mem) else "V0"
        for n in mem:
            new_id[n] = nid
            new_kind[n] = kind
    v0 = sorted({new_id[n] for n in nodes if new_kind[n] == "V0"})
    v1_ids = sorted({new_id[n] for n in nodes if new_kind[n] == "V1"})
    v1 = []
    for nid in v1_ids:
        mem_labels = sorted(
            {labels[name] for k, name in nodes if k == "V1" and new_id[("V1", name)] == nid}
        )
        v1.append((nid, ",".join(mem_labels)))
    edges = tuple(
        QEdge(new_id[("V0", e.v0)], e.local_class, new_id[("V1", e.cyl)], True)
        for e in keep
    )
    return QuotientGraph(tuple(v0), tuple(v1), edges, ())
