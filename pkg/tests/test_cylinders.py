import pytest

from splittings import cylinders as cyl
from splittings.errors import (
    Disconnected,
    MissingFlag,
    SemanticError,
    UnclassedEnd,
)


def torus_cycle():
    verts = tuple(
        cyl.SkeletonVertex(f"u{i}", "punctured-torus") for i in range(1, 5)
    )
    edges = (
        cyl.SkeletonEdge("e1", "u1", "u2", "Z^2"),
        cyl.SkeletonEdge("e2", "u2", "u3", "Z^2"),
        cyl.SkeletonEdge("e3", "u3", "u4", "Z^2"),
        cyl.SkeletonEdge("e4", "u4", "u1", "Z^2"),
    )
    s = cyl.SkeletonGraph(verts, edges, "torus-cycle")
    ends = {
        1: (("e4", "t"), ("e1", "o")),
        2: (("e1", "t"), ("e2", "o")),
        3: (("e2", "t"), ("e3", "o")),
        4: (("e3", "t"), ("e4", "o")),
    }
    classes = tuple(
        cyl.LocalClass(f"u{i}", "a", ends[i], plural=True, in_A=True)
        for i in range(1, 5)
    )
    atlas = cyl.CylinderAtlas(classes, (("e1", "Z^2"),))
    return s, atlas


def tripods():
    verts = (cyl.SkeletonVertex("c", "Z"),) + tuple(
        cyl.SkeletonVertex(f"v{i}", "punctured-torus") for i in range(1, 4)
    )
    edges = tuple(
        cyl.SkeletonEdge(f"e{i}", "c", f"v{i}", "Z") for i in range(1, 4)
    )
    s = cyl.SkeletonGraph(verts, edges, "tripods")
    classes = (
        cyl.LocalClass(
            "c", "a", (("e1", "o"), ("e2", "o"), ("e3", "o")), False, True
        ),
        cyl.LocalClass("v1", "a", (("e1", "t"),), True, True),
        cyl.LocalClass("v2", "a", (("e2", "t"),), True, True),
        cyl.LocalClass("v3", "a", (("e3", "t"),), True, True),
    )
    atlas = cyl.CylinderAtlas(classes, (("e2", "Z"),))
    return s, atlas


class TestValidateAtlas:
    def test_torus_cycle_ok(self):
        s, a = torus_cycle()
        manifest = cyl.validate_atlas(s, a)
        assert len(manifest) == 3

    def test_empty_graph_ok(self):
        manifest = cyl.validate_atlas(
            cyl.SkeletonGraph((), ()), cyl.CylinderAtlas(())
        )
        assert manifest == []

    def test_unclassed_end(self):
        s, a = torus_cycle()
        broken = cyl.CylinderAtlas(a.classes[:3], a.stabilizers)
        with pytest.raises(UnclassedEnd):
            cyl.validate_atlas(s, broken)

    def test_missing_plural_flag(self):
        s, a = torus_cycle()
        c0 = a.classes[0]
        broken = cyl.CylinderAtlas(
            (cyl.LocalClass(c0.vertex, c0.name, c0.ends, None, True),)
            + a.classes[1:],
            a.stabilizers,
        )
        with pytest.raises(MissingFlag):
            cyl.validate_atlas(s, broken)

    def test_end_in_two_classes(self):
        s, a = torus_cycle()
        dup = a.classes + (
            cyl.LocalClass("u1", "b", (("e1", "o"),), True, True),
        )
        with pytest.raises(SemanticError):
            cyl.validate_atlas(s, cyl.CylinderAtlas(dup, a.stabilizers))

    def test_disconnected_skeleton(self):
        s = cyl.SkeletonGraph(
            (cyl.SkeletonVertex("a"), cyl.SkeletonVertex("b")), ()
        )
        with pytest.raises(Disconnected):
            cyl.validate_atlas(s, cyl.CylinderAtlas(()))

    def test_unknown_stabilizer_edge(self):
        s, a = torus_cycle()
        with pytest.raises(SemanticError):
            cyl.validate_atlas(
                s, cyl.CylinderAtlas(a.classes, (("nope", "Z"),))
            )


class TestCylinderOrbits:
    def test_torus_cycle_single_orbit(self):
        s, a = torus_cycle()
        assert cyl.cylinder_orbits(s, a) == [("e1", "e2", "e3", "e4")]

    def test_tripods_single_orbit(self):
        s, a = tripods()
        assert cyl.cylinder_orbits(s, a) == [("e1", "e2", "e3")]

    def test_singleton_classes_split(self):
        verts = (cyl.SkeletonVertex("u"), cyl.SkeletonVertex("v"))
        edges = (
            cyl.SkeletonEdge("e1", "u", "v"),
            cyl.SkeletonEdge("e2", "u", "v"),
        )
        s = cyl.SkeletonGraph(verts, edges)
        classes = (
            cyl.LocalClass("u", "a", (("e1", "o"),), False, True),
            cyl.LocalClass("u", "b", (("e2", "o"),), False, True),
            cyl.LocalClass("v", "a", (("e1", "t"),), False, True),
            cyl.LocalClass("v", "b", (("e2", "t"),), False, True),
        )
        a = cyl.CylinderAtlas(classes)
        assert cyl.cylinder_orbits(s, a) == [("e1",), ("e2",)]


class TestQuotient:
    def test_torus_cycle_star(self):
        s, a = torus_cycle()
        q = cyl.tree_of_cylinders_quotient(s, a)
        assert q.v0 == ("u1", "u2", "u3", "u4")
        assert q.v1 == (("Y1", "Z^2"),)
        assert len(q.edges) == 4
        assert {e.v0 for e in q.edges} == {"u1", "u2", "u3", "u4"}
        assert all(e.cyl == "Y1" for e in q.edges)
        assert q.absorbed == ()

    def test_tripods_star_equals_input_shape(self):
        s, a = tripods()
        q = cyl.tree_of_cylinders_quotient(s, a)
        assert q.v0 == ("v1", "v2", "v3")
        assert q.v1 == (("Y1", "Z"),)
        assert len(q.edges) == 3
        assert q.absorbed == (("c", "Y1"),)

    def test_single_edge_orbit_single_point(self):
        s = cyl.SkeletonGraph(
            (cyl.SkeletonVertex("u"), cyl.SkeletonVertex("v")),
            (cyl.SkeletonEdge("f", "u", "v", "Z"),),
        )
        classes = (
            cyl.LocalClass("u", "a", (("f", "o"),), False, True),
            cyl.LocalClass("v", "a", (("f", "t"),), False, True),
        )
        q = cyl.tree_of_cylinders_quotient(s, cyl.CylinderAtlas(classes))
        assert q.v0 == ()
        assert len(q.v1) == 1
        assert q.edges == ()
        assert set(q.absorbed) == {("u", "Y1"), ("v", "Y1")}

    def test_conflicting_stabilizer_labels(self):
        s, a = torus_cycle()
        bad = cyl.CylinderAtlas(a.classes, (("e1", "Z^2"), ("e2", "Z")))
        with pytest.raises(SemanticError):
            cyl.tree_of_cylinders_quotient(s, bad)

    def test_relabeling_invariance(self):
        s, a = torus_cycle()
        q1 = cyl.tree_of_cylinders_quotient(s, a)

        def ren(x):
            return x.replace("u", "w").replace("e", "g")

        s2 = cyl.SkeletonGraph(
            tuple(cyl.SkeletonVertex(ren(v.id), v.group) for v in s.vertices),
            tuple(
                cyl.SkeletonEdge(ren(e.id), ren(e.origin), ren(e.terminus), e.group)
                for e in s.edges
            ),
            s.name,
        )
        a2 = cyl.CylinderAtlas(
            tuple(
                cyl.LocalClass(
                    ren(c.vertex),
                    c.name,
                    tuple((ren(e), side) for e, side in c.ends),
                    c.plural,
                    c.in_A,
                )
                for c in a.classes
            ),
            tuple((ren(e), lab) for e, lab in a.stabilizers),
        )
        q2 = cyl.tree_of_cylinders_quotient(s2, a2)
        assert tuple(ren(v) for v in q1.v0) == q2.v0
        assert q1.v1 == q2.v1
        assert len(q1.edges) == len(q2.edges)


class TestCollapse:
    def test_all_true_unchanged(self):
        s, a = torus_cycle()
        q = cyl.tree_of_cylinders_quotient(s, a)
        c = cyl.collapse_non_A(q)
        assert c.v0 == q.v0 and c.v1 == q.v1 and len(c.edges) == len(q.edges)

    def test_one_false_edge_merges_leaf(self):
        s, a = torus_cycle()
        q = cyl.tree_of_cylinders_quotient(s, a)
        flags = {("u1", "a"): False}
        c = cyl.collapse_non_A(q, flags)
        assert len(c.edges) == 3
        merged = [yid for yid, _ in c.v1 if "u1" in yid and "Y1" in yid]
        assert len(merged) == 1
        assert "u1" not in c.v0

    def test_all_false_single_vertex(self):
        s, a = torus_cycle()
        q = cyl.tree_of_cylinders_quotient(s, a)
        flags = {(e.v0, e.local_class): False for e in q.edges}
        c = cyl.collapse_non_A(q, flags)
        assert c.edges == ()
        assert len(c.v0) + len(c.v1) == 1

    def test_missing_flag(self):
        s, a = torus_cycle()
        q = cyl.tree_of_cylinders_quotient(s, a)
        stripped = cyl.QuotientGraph(
            q.v0,
            q.v1,
            tuple(
                cyl.QEdge(e.v0, e.local_class, e.cyl, None) for e in q.edges
            ),
            q.absorbed,
        )
        with pytest.raises(MissingFlag):
            cyl.collapse_non_A(stripped)


class TestBipartite:
    def test_edges_join_v0_to_v1(self):
        for s, a in (torus_cycle(), tripods()):
            q = cyl.tree_of_cylinders_quotient(s, a)
            v1_ids = {yid for yid, _ in q.v1}
            for e in q.edges:
                assert e.v0 in q.v0
                assert e.cyl in v1_ids

    def test_every_edge_orbit_in_exactly_one_cylinder(self):
        for s, a in (torus_cycle(), tripods()):
            orbits = cyl.cylinder_orbits(s, a)
            seen = [e for orbit in orbits for e in orbit]
            assert sorted(seen) == sorted(e.id for e in s.edges)
