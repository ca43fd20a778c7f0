"""Text formats, DOT export, and the command-line surface.

Documents are line-oriented with one bracketed section header:

    [orbifold]                      [gbs] or [master]
    name = pants                    name = m3
    orientable = true               vertex u
    genus = 0                       edge e: u(2) -- u(3)
    cone = 2, 3, 7                  base = u
    circle = plain                  tree = f
    circle = M(2) M B M(2) M B      word w = t[e] a[u]^2 t[e]^-1
                                    keep K1 = e, f        ([master] only)

    [atlas]
    vertex u1: punctured-torus
    edge e1: u1 -- u2, group = Z^2
    class u1.a: e4.t e1.o, plural = true, in_A = true
    cylinder e1: Z^2

Edge labels are positional: `edge e: u(2) -- v(3)` puts lam=2 at the origin
u and mu=3 at the terminus v. Exact rationals serialize as "p/q". Reports
are deterministic: same input and seed give byte-identical JSON.

Exit codes: 0 success, 1 input error, 2 internal identity violation (a
mathematical self-check failed, which is always a bug).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO

from . import cylinders as cyl
from . import gbs, orbifold, tree_arithmetic
from .errors import (
    DocumentSyntaxError,
    IdentityViolation,
    NotHyperbolic,
    SemanticError,
    SplittingsError,
)
from .report import TOOL_NAME, TOOL_VERSION, Report, digest, rational_str

Letters = tuple[tuple, ...]


@dataclass(frozen=True)
class GbsSpec:
    graph: gbs.LabeledGraph
    words: tuple[tuple[str, Letters], ...] = ()


@dataclass(frozen=True)
class MasterSpec:
    graph: gbs.LabeledGraph
    words: tuple[tuple[str, Letters], ...] = ()
    keeps: tuple[tuple[str, tuple[str, ...]], ...] = ()


@dataclass(frozen=True)
class AtlasSpec:
    skeleton: cyl.SkeletonGraph
    atlas: cyl.CylinderAtlas


@dataclass(frozen=True)
class Document:
    kind: str  # "orbifold" | "gbs" | "master" | "atlas" | "empty"
    payload: object
    name: str = ""
    comments: tuple[str, ...] = ()


_ID = r"[A-Za-z_][A-Za-z0-9_]*"
_EDGE_RE = re.compile(
    rf"({_ID})\s*:\s*({_ID})\s*\(\s*(-?\d+)\s*\)\s*--\s*({_ID})\s*\(\s*(-?\d+)\s*\)$"
)
_LETTER_RE = re.compile(rf"([at])\[({_ID})\](?:\^(-?\d+))?$")
_CIRCLE_TOKEN_RE = re.compile(r"(M|B)(?:\((\d+)\))?$")


def _err(msg: str, line: int, column: int = 1) -> DocumentSyntaxError:
    return DocumentSyntaxError(msg, line, column)


def parse_letters(text: str, line: int = 0) -> Letters:
    """Surface word syntax: a[v], a[v]^n, t[e], t[e]^-1."""
    letters = []
    for tok in text.split():
        m = _LETTER_RE.match(tok)
        if not m:
            raise _err(f"bad word letter {tok!r}", line)
        kind, name, exp = m.group(1), m.group(2), m.group(3)
        k = int(exp) if exp is not None else 1
        if kind == "t" and k not in (1, -1):
            raise _err(f"crossing exponent must be +-1 in {tok!r}", line)
        if k != 0:
            letters.append((kind, name, k))
    return tuple(letters)


def letters_text(letters: Letters) -> str:
    toks = []
    for kind, name, k in letters:
        if k == 1:
            toks.append(f"{kind}[{name}]")
        else:
            toks.append(f"{kind}[{name}]^{k}")
    return " ".join(toks)


def _split_kv(line_text: str, line: int) -> tuple[str, str]:
    if "=" not in line_text:
        raise _err("expected key = value", line)
    key, _, value = line_text.partition("=")
    return key.strip(), value.strip()


def _parse_bool(value: str, line: int) -> bool:
    if value == "true":
        return True
    if value == "false":
        return False
    raise _err(f"expected true or false, got {value!r}", line)


def _parse_circle(value: str, line: int) -> orbifold.BoundaryCircle:
    if value == "plain":
        return orbifold.BoundaryCircle.plain()
    word = []
    corners = []
    for tok in value.split():
        m = _CIRCLE_TOKEN_RE.match(tok)
        if not m:
            raise _err(f"bad circle token {tok!r}", line)
        word.append(m.group(1))
        corners.append(int(m.group(2)) if m.group(2) else None)
    return orbifold.BoundaryCircle("mixed", tuple(word), tuple(corners))


def _parse_orbifold(body, name, comments) -> Document:
    orientable = True
    genus = 0
    cones: list[int] = []
    circles: list[orbifold.BoundaryCircle] = []
    for line, text in body:
        key, value = _split_kv(text, line)
        if key == "name":
            name = value
        elif key == "orientable":
            orientable = _parse_bool(value, line)
        elif key == "genus":
            genus = int(value)
        elif key == "cone":
            if value:
                cones += [int(x.strip()) for x in value.split(",")]
        elif key == "circle":
            circles.append(_parse_circle(value, line))
        else:
            raise _err(f"unknown orbifold key {key!r}", line)
    o = orbifold.validate(
        orbifold.Orbifold2(orientable, genus, tuple(cones), tuple(circles))
    )
    return Document("orbifold", o, name, comments)


def _parse_graph_lines(body, kind, name):
    vertices: list[str] = []
    edges: list[gbs.Edge] = []
    words: list[tuple[str, Letters]] = []
    keeps: list[tuple[str, tuple[str, ...]]] = []
    base: Optional[str] = None
    tree: Optional[tuple[str, ...]] = None
    for line, text in body:
        head, _, rest = text.partition(" ")
        rest = rest.strip()
        if head == "name":
            _, name = _split_kv(text, line)
        elif head == "vertex":
            if not re.fullmatch(_ID, rest):
                raise _err(f"bad vertex id {rest!r}", line)
            vertices.append(rest)
        elif head == "edge":
            m = _EDGE_RE.match(rest)
            if not m:
                raise _err(f"bad edge syntax {rest!r}", line)
            eid, o, lam, t, mu = (
                m.group(1), m.group(2), int(m.group(3)), m.group(4), int(m.group(5))
            )
            for v in (o, t):
                if v not in vertices:
                    vertices.append(v)
            edges.append(gbs.Edge(eid, o, t, lam, mu))
        elif head == "base":
            _, base = _split_kv(text, line)
        elif head == "tree":
            _, value = _split_kv(text, line)
            tree = tuple(x.strip() for x in value.split(",") if x.strip())
        elif head == "word":
            key, value = _split_kv(text, line)
            wname = key.split(" ", 1)[1].strip() if " " in key else ""
            if not re.fullmatch(_ID, wname):
                raise _err(f"bad word name {wname!r}", line)
            words.append((wname, parse_letters(value, line)))
        elif head == "keep" and kind == "master":
            key, value = _split_kv(text, line)
            kname = key.split(" ", 1)[1].strip() if " " in key else ""
            if not re.fullmatch(_ID, kname):
                raise _err(f"bad keep name {kname!r}", line)
            ids = tuple(x.strip() for x in value.split(",") if x.strip())
            keeps.append((kname, ids))
        else:
            raise _err(f"unknown {kind} line {text!r}", line)
    g = gbs.validate_graph(
        gbs.LabeledGraph(tuple(vertices), tuple(edges), base, tree, name)
    )
    return g, tuple(words), tuple(keeps), name


def _parse_gbs(body, name, comments) -> Document:
    g, words, _, name = _parse_graph_lines(body, "gbs", name)
    return Document("gbs", GbsSpec(g, words), name, comments)


def _parse_master(body, name, comments) -> Document:
    g, words, keeps, name = _parse_graph_lines(body, "master", name)
    known = {e.id for e in g.edges}
    for kname, ids in keeps:
        for eid in ids:
            if eid not in known:
                raise SemanticError(f"keep {kname!r} names unknown edge {eid!r}")
    return Document("master", MasterSpec(g, words, keeps), name, comments)


def _parse_atlas(body, name, comments) -> Document:
    vertices: list[cyl.SkeletonVertex] = []
    edges: list[cyl.SkeletonEdge] = []
    classes: list[cyl.LocalClass] = []
    stabs: list[tuple[str, str]] = []
    for line, text in body:
        head, _, rest = text.partition(" ")
        rest = rest.strip()
        if head == "name":
            _, name = _split_kv(text, line)
            continue
        if head == "vertex":
            vid, _, label = rest.partition(":")
            vertices.append(cyl.SkeletonVertex(vid.strip(), label.strip()))
            continue
        if head == "edge":
            eid, _, spec = rest.partition(":")
            parts = [p.strip() for p in spec.split(",")]
            m = re.fullmatch(rf"({_ID})\s*--\s*({_ID})", parts[0])
            if not m:
                raise _err(f"bad atlas edge {text!r}", line)
            group = ""
            for extra in parts[1:]:
                k, v = _split_kv(extra, line)
                if k == "group":
                    group = v
                else:
                    raise _err(f"unknown edge attribute {k!r}", line)
            edges.append(
                cyl.SkeletonEdge(eid.strip(), m.group(1), m.group(2), group)
            )
            continue
        if head == "class":
            key, _, spec = rest.partition(":")
            m = re.fullmatch(rf"({_ID})\.({_ID})", key.strip())
            if not m:
                raise _err(f"bad class id {key.strip()!r}", line)
            parts = [p.strip() for p in spec.split(",")]
            ends = []
            for tok in parts[0].split():
                em = re.fullmatch(rf"({_ID})\.(o|t)", tok)
                if not em:
                    raise _err(f"bad end token {tok!r}", line)
                ends.append((em.group(1), em.group(2)))
            plural: Optional[bool] = None
            in_a: Optional[bool] = None
            for extra in parts[1:]:
                k, v = _split_kv(extra, line)
                if k == "plural":
                    plural = _parse_bool(v, line)
                elif k == "in_A":
                    in_a = _parse_bool(v, line)
                else:
                    raise _err(f"unknown class attribute {k!r}", line)
            classes.append(
                cyl.LocalClass(m.group(1), m.group(2), tuple(ends), plural, in_a)
            )
            continue
        if head == "cylinder":
            eid, _, label = rest.partition(":")
            stabs.append((eid.strip(), label.strip()))
            continue
        raise _err(f"unknown atlas line {text!r}", line)
    skeleton = cyl.SkeletonGraph(tuple(vertices), tuple(edges), name)
    atlas = cyl.CylinderAtlas(tuple(classes), tuple(stabs))
    cyl.validate_atlas(skeleton, atlas)
    return Document("atlas", AtlasSpec(skeleton, atlas), name, comments)


def parse(text: str) -> Document:
    """Parse a document; the payload comes back validated."""
    section = None
    comments: list[str] = []
    body: list[tuple[int, str]] = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        if line.startswith("["):
            if section is not None:
                raise _err("more than one section header", i)
            m = re.fullmatch(r"\[(orbifold|gbs|master|atlas)\]", line)
            if not m:
                raise _err(f"unknown section header {line!r}", i)
            section = m.group(1)
            continue
        if section is None:
            raise _err("content before the section header", i)
        body.append((i, line))
    if section is None:
        if comments:
            raise _err("comments without a section header", 1)
        return Document("empty", None)
    name = ""
    if section == "orbifold":
        return _parse_orbifold(body, name, tuple(comments))
    if section == "gbs":
        return _parse_gbs(body, name, tuple(comments))
    if section == "master":
        return _parse_master(body, name, tuple(comments))
    return _parse_atlas(body, name, tuple(comments))


# -- serializer -----------------------------------------------------------------

def _circle_text(c: orbifold.BoundaryCircle) -> str:
    if c.is_plain():
        return "plain"
    toks = []
    for tok, corner in zip(c.word, c.corners):
        toks.append(f"{tok}({corner})" if corner is not None else tok)
    return " ".join(toks)


def _serialize_orbifold(d: Document) -> list[str]:
    o: orbifold.Orbifold2 = d.payload
    lines = []
    if d.name:
        lines.append(f"name = {d.name}")
    lines.append(f"orientable = {'true' if o.orientable else 'false'}")
    lines.append(f"genus = {o.genus}")
    if o.cone_points:
        lines.append("cone = " + ", ".join(str(q) for q in o.cone_points))
    for c in o.circles:
        lines.append(f"circle = {_circle_text(c)}")
    return lines


def _serialize_graph(g: gbs.LabeledGraph, name: str, words, keeps) -> list[str]:
    lines = []
    if name:
        lines.append(f"name = {name}")
    for v in g.vertices:
        lines.append(f"vertex {v}")
    for e in g.edges:
        lines.append(f"edge {e.id}: {e.origin}({e.lam}) -- {e.terminus}({e.mu})")
    if g.base is not None:
        lines.append(f"base = {g.base}")
    if g.spanning_tree:
        lines.append("tree = " + ", ".join(g.spanning_tree))
    for wname, letters in words:
        lines.append(f"word {wname} = {letters_text(letters)}")
    for kname, ids in keeps:
        lines.append(f"keep {kname} = " + ", ".join(ids))
    return lines


def _serialize_atlas(d: Document) -> list[str]:
    spec: AtlasSpec = d.payload
    lines = []
    if d.name:
        lines.append(f"name = {d.name}")
    for v in spec.skeleton.vertices:
        lines.append(f"vertex {v.id}: {v.group}" if v.group else f"vertex {v.id}")
    for e in spec.skeleton.edges:
        text = f"edge {e.id}: {e.origin} -- {e.terminus}"
        if e.group:
            text += f", group = {e.group}"
        lines.append(text)
    for c in spec.atlas.classes:
        ends = " ".join(f"{eid}.{side}" for eid, side in c.ends)
        text = f"class {c.vertex}.{c.name}: {ends}"
        if c.plural is not None:
            text += f", plural = {'true' if c.plural else 'false'}"
        if c.in_A is not None:
            text += f", in_A = {'true' if c.in_A else 'false'}"
        lines.append(text)
    for eid, label in spec.atlas.stabilizers:
        lines.append(f"cylinder {eid}: {label}")
    return lines


def serialize(d: Document) -> str:
    """Canonical text; parse(serialize(d)) == d and serializing again is
    byte-identical."""
    if d.kind == "empty":
        return ""
    lines = [f"[{d.kind}]"]
    lines += [f"# {c}" for c in d.comments]
    if d.kind == "orbifold":
        lines += _serialize_orbifold(d)
    elif d.kind == "gbs":
        spec: GbsSpec = d.payload
        lines += _serialize_graph(spec.graph, d.name, spec.words, ())
    elif d.kind == "master":
        mspec: MasterSpec = d.payload
        lines += _serialize_graph(mspec.graph, d.name, mspec.words, mspec.keeps)
    elif d.kind == "atlas":
        lines += _serialize_atlas(d)
    else:
        raise SemanticError(f"cannot serialize document kind {d.kind!r}")
    return "\n".join(lines) + "\n"


# -- DOT export ------------------------------------------------------------------

def export_dot(g) -> str:
    """DOT text for a LabeledGraph (directed, edge labels "lam,mu"), a
    SkeletonGraph, or a QuotientGraph (V0 round, V1 boxed)."""
    if isinstance(g, gbs.LabeledGraph):
        lines = ["digraph G {"]
        for v in g.vertices:
            lines.append(f'  "{v}";')
        for e in g.edges:
            lines.append(f'  "{e.origin}" -> "{e.terminus}" [label="{e.lam},{e.mu}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    if isinstance(g, cyl.SkeletonGraph):
        lines = ["graph G {"]
        for v in g.vertices:
            label = f"{v.id}\\n{v.group}" if v.group else v.id
            lines.append(f'  "{v.id}" [label="{label}"];')
        for e in g.edges:
            attr = f' [label="{e.group}"]' if e.group else ""
            lines.append(f'  "{e.origin}" -- "{e.terminus}"{attr};')
        lines.append("}")
        return "\n".join(lines) + "\n"
    if isinstance(g, cyl.QuotientGraph):
        lines = ["graph G {"]
        for v in g.v0:
            lines.append(f'  "{v}" [shape=circle];')
        for yid, label in g.v1:
            text = f"{yid}\\n{label}" if label else yid
            lines.append(f'  "{yid}" [shape=box, label="{text}"];')
        for e in g.edges:
            lines.append(f'  "{e.v0}" -- "{e.cyl}" [label="{e.local_class}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise SemanticError(f"cannot export {type(g).__name__} as DOT")


# -- commands --------------------------------------------------------------------

class _UsageError(Exception):
    def __init__(self, message: str, usage: str):
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on bad usage, not argparse's 2
        raise _UsageError(message, self.format_usage())


def _read_document(path: str) -> tuple[Document, str]:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse(text), text


def _want(doc: Document, kinds: tuple[str, ...]) -> None:
    if doc.kind not in kinds:
        raise SemanticError(
            f"expected a {' or '.join(kinds)} document, got {doc.kind!r}"
        )


def _provenance(rep: Report, text: str, seed: Optional[int]) -> None:
    rep.provenance["input_digest"] = digest(text)
    rep.provenance["tool_version"] = TOOL_VERSION
    rep.seed = seed


def _named_word(spec, wtext: str, g: gbs.LabeledGraph) -> gbs.GroupWord:
    for wname, letters in spec.words:
        if wname == wtext:
            return gbs.make_word(g, letters)
    return gbs.make_word(g, parse_letters(wtext))


def _print_report(rep: Report, as_json: bool, out: TextIO) -> None:
    if as_json:
        out.write(rep.to_json())
        return
    for v in rep.verdicts:
        tag = " (informational)" if v.informational else ""
        out.write(f"{v.key}: {v.value}{tag}\n")
    for k in sorted(rep.values):
        out.write(f"{k} = {rep.values[k]}\n")
    for k in sorted(rep.witnesses):
        out.write(f"witness {k}: {rep.witnesses[k]}\n")


def _cmd_orbifold_analyze(args, out: TextIO) -> int:
    doc, text = _read_document(args.file)
    _want(doc, ("orbifold",))
    o: orbifold.Orbifold2 = doc.payload
    chi = orbifold.euler_characteristic(o)
    hyp = orbifold.is_hyperbolic(o)
    result: dict = {
        "operation": "orbifold.analyze",
        "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
        "input_digest": digest(text),
        "seed": args.seed,
        "chi": rational_str(chi),
        "hyperbolic": hyp,
        "boundary_components": orbifold.boundary_components(o),
        "small": None,
        "small_family": None,
        "finite_mcg": None,
        "mcg_family": None,
    }
    if hyp:
        sv = orbifold.is_small(o)
        mv = orbifold.has_finite_mcg(o)
        result["small"] = sv.small
        result["small_family"] = sv.family
        result["finite_mcg"] = mv.finite
        result["mcg_family"] = mv.family
        if mv.note:
            result["mcg_note"] = mv.note
    if args.json:
        out.write(json.dumps(result, sort_keys=True, indent=2) + "\n")
    else:
        out.write(f"chi = {rational_str(chi)}\n")
        out.write(f"hyperbolic = {str(hyp).lower()}\n")
        if hyp:
            out.write(f"small = {str(result['small']).lower()}")
            if result["small_family"]:
                out.write(f" (family {result['small_family']})")
            out.write("\n")
            out.write(f"finite_mcg = {str(result['finite_mcg']).lower()}")
            if result["mcg_family"]:
                out.write(f" ({result['mcg_family']})")
            out.write("\n")
        for bc in result["boundary_components"]:
            out.write(f"boundary: {bc['kind']} ({bc['group']})\n")
    return 0


def _cmd_orbifold_enumerate(args, out: TextIO) -> int:
    orbs = orbifold.enumerate_orbifolds(args.budget)
    rows = []
    for o in orbs:
        chi = orbifold.euler_characteristic(o)
        hyp = chi < 0
        row = {
            "orientable": o.orientable,
            "genus": o.genus,
            "cone": list(o.cone_points),
            "circles": [_circle_text(c) for c in o.circles],
            "chi": rational_str(chi),
            "hyperbolic": hyp,
        }
        if hyp:
            sv = orbifold.is_small(o)
            mv = orbifold.has_finite_mcg(o)
            row["small"] = sv.small
            row["small_family"] = sv.family
            row["finite_mcg"] = mv.finite
            row["mcg_family"] = mv.family
        rows.append(row)
    if args.json:
        obj = {
            "operation": "orbifold.enumerate",
            "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
            "input_digest": digest(f"budget={args.budget}"),
            "seed": args.seed,
            "budget": args.budget,
            "count": len(rows),
            "orbifolds": rows,
        }
        out.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    else:
        out.write(f"count = {len(rows)}\n")
        for row in rows:
            desc = "orientable" if row["orientable"] else "non-orientable"
            parts = [f"{desc} genus={row['genus']}"]
            if row["cone"]:
                parts.append("cone=" + ",".join(map(str, row["cone"])))
            for c in row["circles"]:
                parts.append(f"circle[{c}]")
            flags = f"chi={row['chi']}"
            if row["hyperbolic"]:
                flags += f" small={str(row['small']).lower()}"
                flags += f" finite_mcg={str(row['finite_mcg']).lower()}"
            out.write(" ".join(parts) + " | " + flags + "\n")
    return 0


def _cmd_gbs_length(args, out: TextIO) -> int:
    doc, text = _read_document(args.file)
    _want(doc, ("gbs", "master"))
    spec = doc.payload
    g = spec.graph
    w = _named_word(spec, args.word, g)
    nf = gbs.britton_reduce(g, w)
    length = len(nf.crossing_sequence)
    rep = Report(operation="gbs.length")
    _provenance(rep, text, args.seed)
    rep.values["word"] = args.word
    rep.values["length"] = str(length)
    rep.values["crossing_sequence"] = ",".join(nf.crossing_sequence)
    rep.values["modular_image"] = rational_str(gbs.modular_homomorphism(g, w))
    rep.add("translation_length", "elliptic", "true" if length == 0 else "false")
    if args.oracle is not None:
        res = gbs.ball_displacement_oracle(g, w, args.oracle)
        rep.values["oracle_value"] = str(res.value)
        rep.values["oracle_valid"] = "true" if res.valid else "false"
        if not res.valid:
            rep.add(
                "ball_displacement_oracle",
                "radius_too_small",
                res.reason,
                informational=True,
            )
        if res.valid and res.value != length:
            raise IdentityViolation(
                f"oracle value {res.value} disagrees with Britton length {length}"
            )
        rep.add(
            "ball_displacement_oracle",
            "oracle_agreement",
            "agrees" if res.value == length else "not checked (flag invalid)",
        )
    _print_report(rep, args.json, out)
    return 0


def _cmd_gbs_report(args, out: TextIO) -> int:
    doc, text = _read_document(args.file)
    _want(doc, ("gbs", "master"))
    g = doc.payload.graph
    rep = gbs.jsj_report(g)
    _provenance(rep, text, args.seed)
    _print_report(rep, args.json, out)
    return 0


def _cmd_lattice_verify(args, out: TextIO) -> int:
    doc, text = _read_document(args.file)
    _want(doc, ("master",))
    spec: MasterSpec = doc.payload
    m = tree_arithmetic.master(spec.graph)
    seed = args.seed if args.seed is not None else 0
    words = gbs.sample_words(m.graph, args.words, args.maxlen, seed)
    if spec.keeps:
        named = [
            (kname, tree_arithmetic.collapse(m, ids)) for kname, ids in spec.keeps
        ]
    else:
        subsets = []
        orbits = list(m.orbits)
        for mask in range(1 << len(orbits)):
            kept = [orbits[i] for i in range(len(orbits)) if mask >> i & 1]
            subsets.append(("{" + ",".join(kept) + "}", tree_arithmetic.collapse(m, kept)))
        named = subsets
    rep = Report(operation="lattice.verify")
    _provenance(rep, text, seed)
    rep.values["words"] = str(len(words))
    rep.values["maxlen"] = str(args.maxlen)
    rep.values["collapses"] = str(len(named))
    failures = 0
    pairs = 0
    for i in range(len(named)):
        for j in range(i + 1, len(named)):
            pairs += 1
            ok = tree_arithmetic.verify_modularity(
                m, named[i][1], named[j][1], words
            )
            if not ok:
                failures += 1
                rep.add(
                    "verify_modularity",
                    f"pair {named[i][0]},{named[j][0]}",
                    "FAILED",
                )
    rep.values["pairs"] = str(pairs)
    rep.values["failures"] = str(failures)
    rep.add(
        "verify_modularity",
        "modularity",
        "holds on all sampled words" if failures == 0 else "FAILED",
    )
    _print_report(rep, args.json, out)
    if failures:
        raise IdentityViolation("length-function modularity failed")
    return 0


def _quotient_json(q: cyl.QuotientGraph) -> dict:
    return {
        "v0": list(q.v0),
        "v1": [{"id": yid, "stabilizer": label} for yid, label in q.v1],
        "edges": [
            {"v0": e.v0, "class": e.local_class, "cylinder": e.cyl, "in_A": e.in_A}
            for e in q.edges
        ],
        "absorbed": [{"vertex": v, "cylinder": y} for v, y in q.absorbed],
    }


def _cmd_cylinders_quotient(args, out: TextIO) -> int:
    doc, text = _read_document(args.file)
    _want(doc, ("atlas",))
    spec: AtlasSpec = doc.payload
    manifest = cyl.validate_atlas(spec.skeleton, spec.atlas)
    q = cyl.tree_of_cylinders_quotient(spec.skeleton, spec.atlas)
    collapsed = cyl.collapse_non_A(q) if args.collapse else None
    if args.json:
        obj = {
            "operation": "cylinders.quotient",
            "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
            "input_digest": digest(text),
            "seed": args.seed,
            "hypotheses": manifest,
            "quotient": _quotient_json(q),
        }
        if collapsed is not None:
            obj["collapsed"] = _quotient_json(collapsed)
        out.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    else:
        shown = collapsed if collapsed is not None else q
        out.write("V0: " + " ".join(shown.v0) + "\n")
        out.write(
            "V1: " + " ".join(f"{yid}({label})" for yid, label in shown.v1) + "\n"
        )
        for e in shown.edges:
            out.write(f"edge: {e.v0} -[{e.local_class}]- {e.cyl}\n")
        for v, y in shown.absorbed:
            out.write(f"absorbed: {v} -> {y}\n")
    return 0


def _cmd_export_dot(args, out: TextIO) -> int:
    doc, _ = _read_document(args.file)
    if doc.kind in ("gbs", "master"):
        out.write(export_dot(doc.payload.graph))
        return 0
    if doc.kind == "atlas":
        spec: AtlasSpec = doc.payload
        if args.skeleton:
            out.write(export_dot(spec.skeleton))
            return 0
        q = cyl.tree_of_cylinders_quotient(spec.skeleton, spec.atlas)
        if args.collapse:
            q = cyl.collapse_non_A(q)
        out.write(export_dot(q))
        return 0
    raise SemanticError(f"no graph to export in a {doc.kind!r} document")


def _build_parser() -> _Parser:
    p = _Parser(prog=TOOL_NAME, description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--seed", type=int, default=None)

    orb = sub.add_parser("orbifold").add_subparsers(dest="sub", required=True)
    a = orb.add_parser("analyze")
    a.add_argument("file")
    common(a)
    a.set_defaults(func=_cmd_orbifold_analyze)
    e = orb.add_parser("enumerate")
    e.add_argument("--budget", type=int, required=True)
    common(e)
    e.set_defaults(func=_cmd_orbifold_enumerate)

    gb = sub.add_parser("gbs").add_subparsers(dest="sub", required=True)
    ln = gb.add_parser("length")
    ln.add_argument("file")
    ln.add_argument("--word", required=True)
    ln.add_argument("--oracle", type=int, default=None, metavar="R")
    common(ln)
    ln.set_defaults(func=_cmd_gbs_length)
    rp = gb.add_parser("report")
    rp.add_argument("file")
    common(rp)
    rp.set_defaults(func=_cmd_gbs_report)

    lat = sub.add_parser("lattice").add_subparsers(dest="sub", required=True)
    lv = lat.add_parser("verify")
    lv.add_argument("file")
    lv.add_argument("--words", type=int, default=100)
    lv.add_argument(
        "--maxlen", type=int, default=gbs.search_budget(None), metavar="L"
    )
    common(lv)
    lv.set_defaults(func=_cmd_lattice_verify)

    cy = sub.add_parser("cylinders").add_subparsers(dest="sub", required=True)
    cq = cy.add_parser("quotient")
    cq.add_argument("file")
    cq.add_argument("--collapse", action="store_true")
    common(cq)
    cq.set_defaults(func=_cmd_cylinders_quotient)

    ex = sub.add_parser("export").add_subparsers(dest="sub", required=True)
    ed = ex.add_parser("dot")
    ed.add_argument("file")
    ed.add_argument("--collapse", action="store_true")
    ed.add_argument("--skeleton", action="store_true")
    common(ed)
    ed.set_defaults(func=_cmd_export_dot)
    return p


def run(
    argv: Sequence[str],
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """Execute one command; returns the exit code (0 ok, 1 input error,
    2 identity violation)."""
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
        return args.func(args, out)
    except _UsageError as exc:
        err.write(f"error: {exc}\n{exc.usage}")
        return 1
    except IdentityViolation as exc:
        err.write(f"identity violation (bug): {exc}\n")
        return 2
    except NotHyperbolic as exc:
        err.write(f"error: {exc}\n")
        return 1
    except SplittingsError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
