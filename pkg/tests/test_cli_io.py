import io
import json

import pytest

import splittings as sp
from splittings import cli_io, cylinders as cyl
from splittings.errors import (
    DocumentSyntaxError,
    IdentityViolation,
    SemanticError,
    ZeroLabel,
)

from conftest import INPUTS


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_io.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class TestParse:
    def test_gbs_loop(self):
        d = cli_io.parse("[gbs]\nedge e: v(2) -- v(4)\n")
        assert d.kind == "gbs"
        g = d.payload.graph
        assert g.vertices == ("v",)
        (e,) = g.edges
        assert (e.lam, e.mu) == (2, 4)

    def test_orbifold_cones(self):
        d = cli_io.parse("[orbifold]\ncone = 2,3,7\n")
        assert d.kind == "orbifold"
        assert d.payload.cone_points == (2, 3, 7)

    def test_zero_label_surfaces(self):
        with pytest.raises(ZeroLabel):
            cli_io.parse("[gbs]\nedge e: v(0) -- v(2)\n")

    def test_syntax_error_carries_line(self):
        with pytest.raises(DocumentSyntaxError) as exc:
            cli_io.parse("[gbs]\nvertex v\nedge oops\n")
        assert exc.value.line == 3

    def test_unknown_section(self):
        with pytest.raises(DocumentSyntaxError):
            cli_io.parse("[nope]\n")

    def test_content_before_header(self):
        with pytest.raises(DocumentSyntaxError):
            cli_io.parse("genus = 0\n[orbifold]\n")

    def test_comments_collected(self):
        d = cli_io.parse("# hello\n[gbs]\nedge e: v(2) -- v(3)\n")
        assert d.comments == ("hello",)

    def test_word_letters(self):
        d = cli_io.parse(
            "[gbs]\nedge e: u(2) -- u(3)\nword w = t[e] a[u]^2 t[e]^-1\n"
        )
        assert d.payload.words == (
            ("w", (("t", "e", 1), ("a", "u", 2), ("t", "e", -1))),
        )

    def test_master_keeps(self):
        text = (
            "[master]\nedge e: u(2) -- u(3)\nedge f: u(2) -- w(2)\n"
            "keep K1 = e, f\n"
        )
        d = cli_io.parse(text)
        assert d.kind == "master"
        assert d.payload.keeps == (("K1", ("e", "f")),)

    def test_keep_unknown_edge(self):
        with pytest.raises(SemanticError):
            cli_io.parse("[master]\nedge e: u(2) -- u(3)\nkeep K = zz\n")

    def test_atlas(self):
        d = cli_io.parse((INPUTS / "torus_cycle.txt").read_text())
        assert d.kind == "atlas"
        assert len(d.payload.skeleton.edges) == 4
        assert len(d.payload.atlas.classes) == 4

    def test_empty_document(self):
        d = cli_io.parse("")
        assert d.kind == "empty"
        assert cli_io.serialize(d) == ""

    def test_bad_circle_token(self):
        with pytest.raises(DocumentSyntaxError):
            cli_io.parse("[orbifold]\ncircle = M X B\n")


class TestRoundTrip:
    @pytest.mark.parametrize(
        "name",
        [
            "bs23.txt",
            "bs24.txt",
            "bs14.txt",
            "bs16.txt",
            "m3.txt",
            "pants.txt",
            "mirror_disc.txt",
            "turnover.txt",
            "torus_cycle.txt",
            "tripods.txt",
        ],
    )
    def test_corpus(self, name):
        text = (INPUTS / name).read_text()
        d = cli_io.parse(text)
        s1 = cli_io.serialize(d)
        d2 = cli_io.parse(s1)
        assert d2 == d
        assert cli_io.serialize(d2) == s1


class TestExportDot:
    def test_bs24_loop(self):
        d = cli_io.parse("[gbs]\nedge e: v(2) -- v(4)\n")
        dot = cli_io.export_dot(d.payload.graph)
        assert dot.count("->") == 1
        assert 'label="2,4"' in dot

    def test_quotient_star(self):
        d = cli_io.parse((INPUTS / "torus_cycle.txt").read_text())
        q = cyl.tree_of_cylinders_quotient(d.payload.skeleton, d.payload.atlas)
        dot = cli_io.export_dot(q)
        assert dot.count("--") == 4
        assert "Z^2" in dot and "shape=box" in dot

    def test_empty_graph(self):
        dot = cli_io.export_dot(sp.LabeledGraph((), (), None, None, ""))
        assert dot == "digraph G {\n}\n"

    def test_skeleton(self):
        d = cli_io.parse((INPUTS / "tripods.txt").read_text())
        dot = cli_io.export_dot(d.payload.skeleton)
        assert dot.startswith("graph G {")
        assert dot.count("--") == 3


class TestRun:
    def test_report_contains_rigid(self):
        code, out, err = run("gbs", "report", str(INPUTS / "bs23.txt"))
        assert code == 0
        assert "rigid; T_co = T_J" in out

    def test_analyze_pants_json(self):
        code, out, _ = run(
            "orbifold", "analyze", str(INPUTS / "pants.txt"), "--json"
        )
        assert code == 0
        obj = json.loads(out)
        assert obj["chi"] == "-1"
        assert obj["hyperbolic"] is True
        assert obj["small"] is True

    def test_unknown_command_exit_1_with_usage(self):
        code, out, err = run("frobnicate")
        assert code == 1
        assert "usage" in err.lower()

    def test_missing_file_exit_1(self):
        code, _, err = run("gbs", "report", "/no/such/file.txt")
        assert code == 1
        assert err.strip() != ""

    def test_length_with_oracle(self):
        code, out, _ = run(
            "gbs",
            "length",
            str(INPUTS / "bs23.txt"),
            "--word",
            "atat",
            "--oracle",
            "10",
            "--json",
        )
        assert code == 0
        obj = json.loads(out)
        assert obj["values"]["length"] == "2"
        assert obj["values"]["oracle_value"] == "2"
        assert obj["values"]["oracle_valid"] == "true"

    def test_length_inline_word(self):
        code, out, _ = run(
            "gbs",
            "length",
            str(INPUTS / "bs23.txt"),
            "--word",
            "t[e] a[v]^2 t[e]^-1",
            "--json",
        )
        assert code == 0
        assert json.loads(out)["values"]["length"] == "0"

    def test_lattice_verify(self):
        code, out, _ = run(
            "lattice",
            "verify",
            str(INPUTS / "m3.txt"),
            "--words",
            "30",
            "--maxlen",
            "6",
            "--seed",
            "5",
            "--json",
        )
        assert code == 0
        obj = json.loads(out)
        assert obj["values"]["failures"] == "0"
        assert obj["seed"] == 5

    def test_quotient(self):
        code, out, _ = run(
            "cylinders", "quotient", str(INPUTS / "torus_cycle.txt"), "--json"
        )
        assert code == 0
        obj = json.loads(out)
        assert obj["quotient"]["v1"] == [{"id": "Y1", "stabilizer": "Z^2"}]
        assert len(obj["quotient"]["edges"]) == 4

    def test_quotient_collapse_flag(self):
        code, out, _ = run(
            "cylinders",
            "quotient",
            str(INPUTS / "torus_cycle.txt"),
            "--collapse",
            "--json",
        )
        assert code == 0
        assert "collapsed" in json.loads(out)

    def test_enumerate(self):
        code, out, _ = run(
            "orbifold", "enumerate", "--budget", "3", "--json"
        )
        assert code == 0
        obj = json.loads(out)
        assert obj["count"] == 59

    def test_export_dot_quotient(self):
        code, out, _ = run("export", "dot", str(INPUTS / "torus_cycle.txt"))
        assert code == 0
        assert "shape=box" in out

    def test_export_dot_orbifold_rejected(self):
        code, _, err = run("export", "dot", str(INPUTS / "pants.txt"))
        assert code == 1
        assert "error" in err

    def test_identity_violation_exit_2(self, monkeypatch, tmp_path):
        def boom(args, out):
            raise IdentityViolation("forced")

        monkeypatch.setattr(cli_io, "_cmd_gbs_report", boom)
        code, _, err = run("gbs", "report", str(INPUTS / "bs23.txt"))
        assert code == 2
        assert "bug" in err

    def test_syntax_error_exit_1(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("[gbs]\nedge broken\n")
        code, _, err = run("gbs", "report", str(p))
        assert code == 1
        assert "line 2" in err


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ("gbs", "report", "bs23.txt", "--json"),
            ("gbs", "length", "bs23.txt", "--word", "atat", "--oracle", "8", "--json"),
            ("orbifold", "analyze", "mirror_disc.txt", "--json"),
            ("lattice", "verify", "m3.txt", "--words", "25", "--maxlen", "6",
             "--seed", "11", "--json"),
            ("cylinders", "quotient", "tripods.txt", "--json"),
        ],
    )
    def test_byte_identical(self, argv):
        argv = [str(INPUTS / a) if a.endswith(".txt") else a for a in argv]
        _, out1, _ = run(*argv)
        _, out2, _ = run(*argv)
        assert out1 == out2
        assert out1.encode("utf-8") == out2.encode("utf-8")
