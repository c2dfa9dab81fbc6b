"""Oriented link/tangle diagrams, braid words, and resolution states.

Diagrams are abstract 4-valent directed graphs.  Each node is a classical
crossing (``pos``/``neg``), a virtual crossing (``vir``), or a 4-valent
wide-edge vertex (``moy``).  Ports follow a fixed convention:

* ``in1`` = lower-left, ``in2`` = lower-right,
* ``out1`` = upper-left, ``out2`` = upper-right,
* strands run ``in1 -> out2`` and ``in2 -> out1``,
* for ``pos`` the ``in1 -> out2`` strand is the over-strand,
  for ``neg`` the ``in2 -> out1`` strand is the over-strand.

Planarity is deliberately not validated: virtual diagrams are abstract
graphs, and classical planarity is the caller's responsibility.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "InputError",
    "Node",
    "Diagram",
    "BraidWord",
    "ResolutionState",
    "parse_braid",
    "braid_to_text",
    "braid_closure",
    "parse_pd",
    "resolve_states",
    "insert_local",
    "splice_out",
    "library_diagram",
    "library_names",
]

NODE_KINDS = ("pos", "neg", "vir", "moy")
CROSSING_KINDS = ("pos", "neg")
INSERT_PATTERNS = ("riib_pair", "kink_pos", "kink_neg", "vir_over_neg", "exchange_swap")

#: Edge ids starting with this prefix are reserved for internally generated
#: marks and may not appear in user-supplied input.
RESERVED_PREFIX = "~"


class InputError(ValueError):
    """Malformed diagram, braid text, or PD JSON input."""


@dataclass(frozen=True)
class Node:
    """One 4-valent node of a diagram.

    INPUT: ``id`` unique node name, ``kind`` in {pos, neg, vir, moy},
    and the four incident edge ids by port.
    """

    id: str
    kind: str
    in1: str
    in2: str
    out1: str
    out2: str

    def ports(self) -> tuple[tuple[str, str], ...]:
        return (("in1", self.in1), ("in2", self.in2), ("out1", self.out1), ("out2", self.out2))

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "in1": self.in1,
            "in2": self.in2,
            "out1": self.out1,
            "out2": self.out2,
        }


def _renamed(node: Node, ren: Mapping[str, str]) -> Node:
    return Node(
        node.id,
        node.kind,
        ren.get(node.in1, node.in1),
        ren.get(node.in2, node.in2),
        ren.get(node.out1, node.out1),
        ren.get(node.out2, node.out2),
    )


@dataclass(frozen=True)
class Diagram:
    """An oriented diagram: nodes plus boundary and free-loop edges.

    Parameters
    ----------
    nodes:
        The 4-valent nodes.  Edges are implied by shared edge ids.
    boundary_in:
        Ordered open edges entering the tangle (their tail is the boundary).
    boundary_out:
        Ordered open edges leaving the tangle (their head is the boundary).
    loops:
        Closed node-free circles, one edge id each.

    Every edge id must occur exactly once as a tail (a node out-port, a
    ``boundary_in`` slot, or a loop) and exactly once as a head (a node
    in-port, a ``boundary_out`` slot, or the same loop).
    """

    nodes: tuple[Node, ...]
    boundary_in: tuple[str, ...] = ()
    boundary_out: tuple[str, ...] = ()
    loops: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "boundary_in", tuple(self.boundary_in))
        object.__setattr__(self, "boundary_out", tuple(self.boundary_out))
        object.__setattr__(self, "loops", tuple(self.loops))
        self._validate()

    def _validate(self) -> None:
        seen_ids: set[str] = set()
        for node in self.nodes:
            if node.kind not in NODE_KINDS:
                raise InputError(f"unknown node kind {node.kind!r} at node {node.id!r}")
            if node.id in seen_ids:
                raise InputError(f"duplicate node id {node.id!r}")
            seen_ids.add(node.id)
        tails: dict[str, list] = {}
        heads: dict[str, list] = {}
        for node in self.nodes:
            tails.setdefault(node.out1, []).append((node.id, "out1"))
            tails.setdefault(node.out2, []).append((node.id, "out2"))
            heads.setdefault(node.in1, []).append((node.id, "in1"))
            heads.setdefault(node.in2, []).append((node.id, "in2"))
        for i, e in enumerate(self.boundary_in):
            tails.setdefault(e, []).append(("", f"boundary_in[{i}]"))
        for i, e in enumerate(self.boundary_out):
            heads.setdefault(e, []).append(("", f"boundary_out[{i}]"))
        for e in self.loops:
            tails.setdefault(e, []).append(("", "loop"))
            heads.setdefault(e, []).append(("", "loop"))
        for e, sites in tails.items():
            if len(sites) > 1:
                raise InputError(f"duplicate port use: edge {e!r} has tails {sites}")
        for e, sites in heads.items():
            if len(sites) > 1:
                raise InputError(f"duplicate port use: edge {e!r} has heads {sites}")
        for e in tails:
            if e not in heads:
                raise InputError(f"dangling edge {e!r}: orientation mismatch, no head")
        for e in heads:
            if e not in tails:
                raise InputError(f"dangling edge {e!r}: orientation mismatch, no tail")

    # -- cached derived data -------------------------------------------------

    @cached_property
    def edge_tails(self) -> dict[str, tuple[str, str]]:
        """edge id -> (node id, port) producing it; ("", slot) at the boundary."""
        out: dict[str, tuple[str, str]] = {}
        for node in self.nodes:
            out[node.out1] = (node.id, "out1")
            out[node.out2] = (node.id, "out2")
        for i, e in enumerate(self.boundary_in):
            out[e] = ("", f"in[{i}]")
        for e in self.loops:
            out[e] = ("", "loop")
        return out

    @cached_property
    def edge_heads(self) -> dict[str, tuple[str, str]]:
        out: dict[str, tuple[str, str]] = {}
        for node in self.nodes:
            out[node.in1] = (node.id, "in1")
            out[node.in2] = (node.id, "in2")
        for i, e in enumerate(self.boundary_out):
            out[e] = ("", f"out[{i}]")
        for e in self.loops:
            out[e] = ("", "loop")
        return out

    @cached_property
    def edges(self) -> tuple[str, ...]:
        return tuple(sorted(self.edge_tails))

    @cached_property
    def node_map(self) -> dict[str, Node]:
        return {node.id: node for node in self.nodes}

    @cached_property
    def counts(self) -> dict[str, int]:
        out = {kind: 0 for kind in NODE_KINDS}
        for node in self.nodes:
            out[node.kind] += 1
        return out

    @property
    def writhe(self) -> int:
        return self.counts["pos"] - self.counts["neg"]

    @property
    def is_closed(self) -> bool:
        return not self.boundary_in and not self.boundary_out

    def component_count(self) -> int:
        """Number of strand cycles of a closed diagram (loops included)."""
        parent: dict[str, str] = {e: e for e in self.edge_tails}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x: str, y: str) -> None:
            parent[find(x)] = find(y)

        for node in self.nodes:
            union(node.in1, node.out2)
            union(node.in2, node.out1)
        return len({find(e) for e in parent})

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "nodes": [node.to_json() for node in self.nodes],
            "boundary_in": list(self.boundary_in),
            "boundary_out": list(self.boundary_out),
            "loops": list(self.loops),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


@dataclass(frozen=True)
class BraidWord:
    """A (virtual) braid word.

    INPUT: ``strands`` >= 1 and ``letters`` as pairs (generator index ``k``
    with 1 <= k <= strands-1, kind in {pos, neg, vir}).  The empty word is
    the identity braid.
    """

    strands: int
    letters: tuple[tuple[int, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple((int(k), kind) for k, kind in self.letters))
        if self.strands < 1:
            raise InputError(f"braid needs at least one strand, got {self.strands}")
        for k, kind in self.letters:
            if kind not in ("pos", "neg", "vir"):
                raise InputError(f"unknown braid letter kind {kind!r}")
            if not 1 <= k <= self.strands - 1:
                raise InputError(f"generator index {k} out of range for {self.strands} strands")

    def permutation(self) -> tuple[int, ...]:
        """Underlying permutation: position i (0-based) ends at result[i]."""
        perm = list(range(self.strands))
        for k, _ in self.letters:
            perm[k - 1], perm[k] = perm[k], perm[k - 1]
        return tuple(perm)

    def component_count(self) -> int:
        perm = self.permutation()
        seen = [False] * self.strands
        cycles = 0
        for i in range(self.strands):
            if not seen[i]:
                cycles += 1
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
        return cycles

    def inverse(self) -> BraidWord:
        inv = {"pos": "neg", "neg": "pos", "vir": "vir"}
        return BraidWord(self.strands, tuple((k, inv[kind]) for k, kind in reversed(self.letters)))


_HEADER_RE = re.compile(r"^n\s*=\s*(\d+)$")


def parse_braid(text: str) -> BraidWord:
    """Parse braid text like ``"n=2 ; -1 -1 -1"`` or ``"n=3 ; 1 v2 -1"``.

    INPUT: a header ``n=<strands>`` followed by ``;`` and whitespace-separated
    letters: ``k``/``+k`` for a positive crossing, ``-k`` negative, ``vk`` or
    ``v k`` for the virtual generator.
    OUTPUT: a validated :class:`BraidWord`.
    """
    if ";" not in text:
        raise InputError("braid text needs a 'n=<strands> ;' header")
    header, _, rest = text.partition(";")
    m = _HEADER_RE.match(header.strip())
    if not m:
        raise InputError(f"malformed braid header {header.strip()!r}")
    strands = int(m.group(1))
    letters: list[tuple[int, str]] = []
    tokens = rest.split()
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "v":
            i += 1
            if i >= len(tokens) or not tokens[i].isdigit():
                raise InputError("virtual letter 'v' must be followed by a generator index")
            letters.append((int(tokens[i]), "vir"))
        elif tok.startswith("v") and tok[1:].isdigit():
            letters.append((int(tok[1:]), "vir"))
        else:
            try:
                k = int(tok)
            except ValueError:
                raise InputError(f"malformed braid token {tok!r}") from None
            if k == 0:
                raise InputError("generator index 0 is not valid")
            letters.append((abs(k), "pos" if k > 0 else "neg"))
        i += 1
    try:
        return BraidWord(strands, tuple(letters))
    except InputError:
        raise
    except ValueError as exc:  # pragma: no cover - defensive
        raise InputError(str(exc)) from None


def braid_to_text(word: BraidWord) -> str:
    parts = []
    for k, kind in word.letters:
        parts.append({"pos": str(k), "neg": str(-k), "vir": f"v{k}"}[kind])
    return f"n={word.strands} ; " + " ".join(parts) if parts else f"n={word.strands} ;"


def braid_closure(word: BraidWord) -> Diagram:
    """Circular closure of a braid word as a closed :class:`Diagram`.

    Strand positions run 1..n; the word is read bottom to top, and the final
    edge at each position is identified with the initial one.  Untouched
    positions close into free loops.
    """
    pos = {i: f"s{i}" for i in range(1, word.strands + 1)}
    nodes: list[Node] = []
    counter = 0
    for j, (k, kind) in enumerate(word.letters, 1):
        o1, o2 = f"e{counter}", f"e{counter + 1}"
        counter += 2
        nodes.append(Node(f"c{j}", kind, in1=pos[k], in2=pos[k + 1], out1=o1, out2=o2))
        pos[k], pos[k + 1] = o1, o2
    ren = {pos[i]: f"s{i}" for i in range(1, word.strands + 1) if pos[i] != f"s{i}"}
    nodes = [_renamed(node, ren) for node in nodes]
    loops = tuple(f"s{i}" for i in range(1, word.strands + 1) if pos[i] == f"s{i}")
    return Diagram(nodes=tuple(nodes), loops=loops)


def parse_pd(source: str | Mapping) -> Diagram:
    """Parse oriented-PD JSON into a validated :class:`Diagram`.

    INPUT: a JSON string or mapping with ``nodes``
    (``[{id, kind, in1, in2, out1, out2}, ...]``) and optional
    ``boundary_in``/``boundary_out``/``loops`` lists.
    OUTPUT: the diagram; raises :class:`InputError` on dangling edges,
    duplicate port use, or orientation mismatches.
    """
    if isinstance(source, str):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
    else:
        obj = source
    if not isinstance(obj, Mapping):
        raise InputError("PD JSON must be an object")
    unknown = set(obj) - {"nodes", "boundary_in", "boundary_out", "loops"}
    if unknown:
        raise InputError(f"unknown PD JSON keys {sorted(unknown)}")
    nodes = []
    for raw in obj.get("nodes", []):
        missing = {"id", "kind", "in1", "in2", "out1", "out2"} - set(raw)
        if missing:
            raise InputError(f"node entry missing keys {sorted(missing)}")
        nodes.append(
            Node(
                str(raw["id"]),
                str(raw["kind"]),
                str(raw["in1"]),
                str(raw["in2"]),
                str(raw["out1"]),
                str(raw["out2"]),
            )
        )
    diagram = Diagram(
        nodes=tuple(nodes),
        boundary_in=tuple(str(e) for e in obj.get("boundary_in", [])),
        boundary_out=tuple(str(e) for e in obj.get("boundary_out", [])),
        loops=tuple(str(e) for e in obj.get("loops", [])),
    )
    for e in diagram.edges:
        if e.startswith(RESERVED_PREFIX):
            raise InputError(f"edge id {e!r} uses the reserved internal prefix {RESERVED_PREFIX!r}")
    return diagram


@dataclass(frozen=True)
class ResolutionState:
    """One crossing resolution of a diagram.

    ``choices`` maps each classical crossing id to ``"smoothing"`` or
    ``"vertex"``; ``weight`` is the q-weight (-2 per positive crossing
    resolved to a vertex) and ``vertex_count`` the number of vertex choices.
    """

    base: Diagram
    choices: Mapping[str, str]
    weight: int = field(init=False)
    vertex_count: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "choices", dict(self.choices))
        weight = 0
        vertices = 0
        for node_id, choice in self.choices.items():
            if choice == "vertex":
                vertices += 1
                if self.base.node_map[node_id].kind == "pos":
                    weight -= 2
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "vertex_count", vertices)


def resolve_states(diagram: Diagram) -> Iterator[ResolutionState]:
    """Iterate over all 2^c resolutions of the classical crossings.

    Virtual and wide-edge nodes persist unresolved.  States are emitted in
    binary-counter order over the crossings in node order.
    """
    crossings = [node.id for node in diagram.nodes if node.kind in CROSSING_KINDS]
    for mask in range(1 << len(crossings)):
        choices = {
            node_id: ("vertex" if mask >> i & 1 else "smoothing")
            for i, node_id in enumerate(crossings)
        }
        yield ResolutionState(diagram, choices)


# -- local insertions --------------------------------------------------------


def _fresh_edges(existing: set[str], stems: Sequence[str]) -> list[str]:
    out = []
    for stem in stems:
        name = stem
        bump = 0
        while name in existing:
            bump += 1
            name = f"{stem}{bump}"
        existing.add(name)
        out.append(name)
    return out


def _fresh_node_ids(diagram: Diagram, stems: Sequence[str]) -> list[str]:
    existing = set(diagram.node_map)
    out = []
    for stem in stems:
        name = stem
        bump = 0
        while name in existing:
            bump += 1
            name = f"{stem}{bump}"
        existing.add(name)
        out.append(name)
    return out


def _insert_kink(diagram: Diagram, edge: str, kind: str) -> Diagram:
    if edge not in diagram.edge_tails:
        raise InputError(f"no edge {edge!r} in diagram")
    (node_id,) = _fresh_node_ids(diagram, ["k"])
    existing = set(diagram.edges)
    if edge in diagram.loops:
        # The loop becomes the kink's pass-through strand plus a curl edge.
        curl, = _fresh_edges(existing, [f"{edge}@curl"])
        node = Node(node_id, kind, in1=edge, in2=curl, out1=edge, out2=curl)
        loops = tuple(e for e in diagram.loops if e != edge)
        return Diagram(diagram.nodes + (node,), diagram.boundary_in, diagram.boundary_out, loops)
    out_edge, curl = _fresh_edges(existing, [f"{edge}@out", f"{edge}@curl"])
    nodes = list(diagram.nodes)
    boundary_out = list(diagram.boundary_out)
    _replace_head(nodes, boundary_out, diagram.edge_heads, edge, out_edge)
    node = Node(node_id, kind, in1=edge, in2=curl, out1=out_edge, out2=curl)
    return Diagram(tuple(nodes) + (node,), diagram.boundary_in, tuple(boundary_out), diagram.loops)


def _replace_head(nodes: list[Node], boundary_out: list[str], heads: Mapping[str, tuple[str, str]],
                  edge: str, new_edge: str) -> None:
    node_id, port = heads[edge]
    if node_id == "":
        idx = int(port[4:-1])
        boundary_out[idx] = new_edge
        return
    for i, nd in enumerate(nodes):
        if nd.id == node_id:
            values = {p: e for p, e in nd.ports()}
            values[port] = new_edge
            nodes[i] = Node(nd.id, nd.kind, values["in1"], values["in2"], values["out1"], values["out2"])
            return


def _insert_pair(diagram: Diagram, site: tuple[str, str], bottom_kind: str, top_kind: str) -> Diagram:
    """Splice a stacked two-node pattern across an antiparallel site.

    The left edge runs upward through the site and the right edge downward;
    both new nodes put the left strand on top of the ``in1 -> out2`` /
    ``in2 -> out1`` wiring so the bottom node consumes the left edge and the
    top node emits it.
    """
    left, right = site
    for e in (left, right):
        if e not in diagram.edge_tails:
            raise InputError(f"no edge {e!r} in diagram")
    bottom_id, top_id = _fresh_node_ids(diagram, ["nb", "nt"])
    existing = set(diagram.edges)
    m_left, m_right = _fresh_edges(existing, [f"{left}@ml", f"{left}@mr"])
    nodes = list(diagram.nodes)
    boundary_out = list(diagram.boundary_out)
    loops = [e for e in diagram.loops if e not in (left, right)]

    if left == right:
        if left in diagram.loops:
            # Both sides of one free loop: bottom and top arcs of the circle.
            top_arc, = _fresh_edges(existing, [f"{left}@top"])
            bottom = Node(bottom_id, bottom_kind, in1=m_left, in2=left, out1=m_right, out2=left)
            top = Node(top_id, top_kind, in1=m_right, in2=top_arc, out1=m_left, out2=top_arc)
            return Diagram(tuple(nodes) + (bottom, top), diagram.boundary_in,
                           tuple(boundary_out), tuple(loops))
        # One ordinary edge used for both sides: cut it into three segments.
        top_arc, tail_seg = _fresh_edges(existing, [f"{left}@top", f"{left}@dn"])
        _replace_head(nodes, boundary_out, diagram.edge_heads, left, tail_seg)
        bottom = Node(bottom_id, bottom_kind, in1=m_left, in2=left, out1=m_right, out2=tail_seg)
        top = Node(top_id, top_kind, in1=m_right, in2=top_arc, out1=m_left, out2=top_arc)
        return Diagram(tuple(nodes) + (bottom, top), diagram.boundary_in,
                       tuple(boundary_out), tuple(loops))

    if left in diagram.loops:
        left_bot = left_top = left
    else:
        left_top, = _fresh_edges(existing, [f"{left}@up"])
        left_bot = left
        _replace_head(nodes, boundary_out, diagram.edge_heads, left, left_top)
    if right in diagram.loops:
        right_top = right_bot = right
    else:
        right_bot, = _fresh_edges(existing, [f"{right}@dn"])
        right_top = right
        _replace_head(nodes, boundary_out, diagram.edge_heads, right, right_bot)
    bottom = Node(bottom_id, bottom_kind, in1=m_left, in2=left_bot, out1=m_right, out2=right_bot)
    top = Node(top_id, top_kind, in1=m_right, in2=right_top, out1=m_left, out2=left_top)
    return Diagram(tuple(nodes) + (bottom, top), diagram.boundary_in,
                   tuple(boundary_out), tuple(loops))


def insert_local(diagram: Diagram, site, pattern: str) -> Diagram:
    """Splice a local pattern into a diagram.

    Parameters
    ----------
    diagram:
        Host diagram; untouched outside the site.
    site:
        A single edge id for the kink patterns, or a pair ``(left, right)``
        of edge ids for the stacked two-node patterns (the left edge runs
        upward through the site, the right edge downward).
    pattern:
        One of ``riib_pair`` (negative below a positive crossing),
        ``kink_pos``, ``kink_neg``, ``vir_over_neg`` (negative below a
        virtual crossing), ``exchange_swap`` (positive below a negative).

    Returns
    -------
    Diagram
        A new diagram with the pattern inserted.
    """
    if pattern not in INSERT_PATTERNS:
        raise InputError(f"unknown insertion pattern {pattern!r}")
    if pattern in ("kink_pos", "kink_neg"):
        if not isinstance(site, str):
            raise InputError("kink patterns take a single edge id")
        return _insert_kink(diagram, site, "pos" if pattern == "kink_pos" else "neg")
    if not (isinstance(site, (tuple, list)) and len(site) == 2):
        raise InputError(f"pattern {pattern!r} takes a pair of edge ids")
    bottom_kind, top_kind = {
        "riib_pair": ("neg", "pos"),
        "vir_over_neg": ("neg", "vir"),
        "exchange_swap": ("pos", "neg"),
    }[pattern]
    return _insert_pair(diagram, (str(site[0]), str(site[1])), bottom_kind, top_kind)


def splice_out(diagram: Diagram, node_ids: Iterable[str]) -> Diagram:
    """Delete nodes and reconnect their through-strands.

    Each deleted node is replaced by its two pass-through strands
    (``in1 -> out2`` and ``in2 -> out1``).  Chains of merged edges keep the
    id of the edge whose tail survives; fully internal cycles become free
    loops named after their smallest edge id.
    """
    doomed = set(node_ids)
    missing = doomed - set(diagram.node_map)
    if missing:
        raise InputError(f"no such nodes {sorted(missing)}")
    parent: dict[str, str] = {e: e for e in diagram.edge_tails}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for node in diagram.nodes:
        if node.id in doomed:
            parent[find(node.in1)] = find(node.out2)
            parent[find(node.in2)] = find(node.out1)
    classes: dict[str, list[str]] = {}
    for e in diagram.edge_tails:
        classes.setdefault(find(e), []).append(e)
    rep: dict[str, str] = {}
    new_loops: list[str] = []
    for members in classes.values():
        kept_tails = [e for e in members if diagram.edge_tails[e][0] not in doomed]
        kept_heads = [e for e in members if diagram.edge_heads[e][0] not in doomed]
        if not kept_tails and not kept_heads:
            name = min(members)
            new_loops.append(name)
            for e in members:
                rep[e] = name
        else:
            name = kept_tails[0] if kept_tails else min(members)
            for e in members:
                rep[e] = name
    kept_nodes = tuple(_renamed(nd, rep) for nd in diagram.nodes if nd.id not in doomed)
    loops = [rep.get(e, e) for e in diagram.loops]
    loops.extend(e for e in new_loops if e not in loops)
    boundary_in = tuple(rep.get(e, e) for e in diagram.boundary_in)
    boundary_out = tuple(rep.get(e, e) for e in diagram.boundary_out)
    return Diagram(kept_nodes, boundary_in, boundary_out, tuple(sorted(set(loops))))


# -- built-in diagram library -------------------------------------------------


def _pd(rows: Sequence[tuple[str, str, str, str, str, str]], loops: Sequence[str] = ()) -> Diagram:
    return Diagram(tuple(Node(*row) for row in rows), loops=tuple(loops))


def _lib_unknot() -> Diagram:
    return Diagram((), loops=("c",))


def _lib_trefoil_neg() -> Diagram:
    return braid_closure(BraidWord(2, ((1, "neg"), (1, "neg"), (1, "neg"))))


def _riib_host(kind3: str, kind5: str) -> Diagram:
    # 5-crossing unknot host: a kink plus two stacked-pair insertions.
    return _pd([
        ("c1", "neg", "e1", "e8", "e3", "e2"),
        ("c2", "neg", "e3", "e2", "e4", "e5"),
        ("c3", kind3, "e7", "e5", "e9", "e8"),
        ("c4", "neg", "e9", "e6", "e7", "e10"),
        ("c5", kind5, "e4", "e10", "e1", "e6"),
    ])


def _lib_riib_host_slid() -> Diagram:
    # The virtualized host after sliding one virtual crossing past a classical one.
    return _pd([
        ("c1", "neg", "g1", "g6", "g7", "g2"),
        ("c2", "neg", "g7", "g2", "g3", "g8"),
        ("c3", "neg", "g5", "g8", "g9", "g6"),
        ("c4", "vir", "g4", "g9", "g10", "g5"),
        ("c5", "vir", "g3", "g10", "g1", "g4"),
    ])


def _lib_riib_host_trefoil() -> Diagram:
    # Round form of the left trefoil reached from the slid host by cancelling
    # the virtual pair; isomorphic to the 2-strand negative braid closure.
    return _pd([
        ("c1", "neg", "h1", "h4", "h5", "h2"),
        ("c2", "neg", "h5", "h2", "h3", "h6"),
        ("c3", "neg", "h3", "h6", "h1", "h4"),
    ])


def torus_nonbraid(k: int) -> Diagram:
    """Nonbraidlike closed diagram of the (2, 2k+1) torus knot.

    A tower of 2k positive crossings wired like a 2-strand braid, closed
    through a three-crossing cluster (two positive, one negative) instead of
    plain closure arcs.
    """
    if k < 1:
        raise InputError("torus_nonbraid needs k >= 1")
    rows: list[tuple[str, str, str, str, str, str]] = []
    left, right = "e1", "e2"
    for j in range(1, 2 * k + 1):
        new_left = f"l{j}" if j < 2 * k else "etop"
        new_right = f"r{j}" if j < 2 * k else "earc"
        rows.append((f"t{j}", "pos", left, right, new_left, new_right))
        left, right = new_left, new_right
    rows.append(("ra", "pos", "etop", "e56", "e1", "e78"))
    rows.append(("rb", "pos", "ecb", "e78", "ebc", "e56"))
    rows.append(("rc", "neg", "ebc", "earc", "ecb", "e2"))
    return _pd(rows)


def torus_braid(k: int) -> BraidWord:
    """The 2-strand braid presentation of the (2, 2k+1) torus knot."""
    if k < 0:
        raise InputError("torus_braid needs k >= 0")
    return BraidWord(2, tuple((1, "pos") for _ in range(2 * k + 1)))


def _lib_exchange_beta(which: int) -> Diagram:
    words = {
        1: ((1, "pos"), (1, "vir"), (2, "vir"), (1, "pos"), (1, "vir"), (2, "vir")),
        2: ((1, "pos"), (1, "vir"), (2, "pos"), (1, "pos"), (1, "vir"), (2, "neg")),
    }
    return braid_closure(BraidWord(3, words[which]))


_LIBRARY = {
    "unknot": _lib_unknot,
    "trefoil_neg": _lib_trefoil_neg,
    "riib_host": lambda: _riib_host("pos", "pos"),
    "riib_host_vir": lambda: _riib_host("vir", "vir"),
    "riib_host_slid": _lib_riib_host_slid,
    "riib_host_trefoil": _lib_riib_host_trefoil,
    "exchange_beta1": lambda: _lib_exchange_beta(1),
    "exchange_beta2": lambda: _lib_exchange_beta(2),
}

_TORUS_RE = re.compile(r"^torus_nonbraid_k(\d+)$")
_TORUS_BRAID_RE = re.compile(r"^torus_braid_k(\d+)$")


def library_names() -> tuple[str, ...]:
    """Names accepted by :func:`library_diagram` (torus families take any k)."""
    return tuple(sorted(_LIBRARY)) + ("torus_nonbraid_k<k>", "torus_braid_k<k>")


def library_diagram(name: str) -> Diagram:
    """Fetch a built-in diagram by name.

    Fixed names: unknot, trefoil_neg, riib_host, riib_host_vir,
    riib_host_slid, riib_host_trefoil, exchange_beta1, exchange_beta2.
    Parameterized: torus_nonbraid_k<k> and torus_braid_k<k> (closure).
    """
    if name in _LIBRARY:
        return _LIBRARY[name]()
    m = _TORUS_RE.match(name)
    if m:
        return torus_nonbraid(int(m.group(1)))
    m = _TORUS_BRAID_RE.match(name)
    if m:
        return braid_closure(torus_braid(int(m.group(1))))
    raise InputError(f"unknown library diagram {name!r}; known: {', '.join(library_names())}")
