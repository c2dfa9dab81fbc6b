"""Graph evaluation engines for link polynomials.

Three related computations live here:

* :func:`eval_moy` evaluates closed 4-valent graphs (wide-edge vertices,
  virtual crossings, loops) by local rewriting, in either the classical or
  the deformed ruleset;
* :func:`homfly_state_sum` and :func:`pb_eval` expand a diagram's crossings
  into graph states and sum the evaluations with signed q-weights;
* :func:`skein_homfly_oracle` computes the same polynomial for braid
  closures by skein recursion on words, sharing no graph code with the
  state sum.

Incomplete rewriting is a first-class outcome: evaluations that exhaust the
neutral-move search budget report the residual graph instead of a value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .algebra import LaurentPoly, ONE, Q, A, RatFunc
from .diagram import (
    BraidWord,
    CROSSING_KINDS,
    Diagram,
    InputError,
    Node,
    braid_closure,
    resolve_states,
    splice_out,
)

__all__ = [
    "CIRCLE_VALUE",
    "CURL_VALUE",
    "LADDER_TAIL",
    "EvalResult",
    "RewriteRule",
    "RULES",
    "StuckError",
    "OracleError",
    "eval_moy",
    "resolved_graph",
    "homfly_state_sum",
    "pb_eval",
    "skein_homfly_oracle",
    "clear_eval_cache",
]

#: Value of a free oriented loop.
CIRCLE_VALUE = RatFunc(ONE + Q**2 * A, ONE - Q**2)
#: Value of a curl closed through a vertex, per free loop removed.
CURL_VALUE = RatFunc(ONE + Q**4 * A, ONE - Q**2)
#: Scalar of a parallel double edge between two vertices.
DOUBLE_EDGE_FACTOR = ONE + Q**2
#: Scalar of the arc branch of the antiparallel ladder rule.
LADDER_TAIL = RatFunc(Q**2 + Q**6 * A, ONE - Q**2)

_Q2 = Q**2


class StuckError(RuntimeError):
    """A state-sum evaluation hit a graph no rule reduces."""

    def __init__(self, graph: Diagram):
        super().__init__("graph evaluation stuck")
        self.graph = graph


class OracleError(RuntimeError):
    """The skein oracle exhausted its word-rewriting budget."""


@dataclass(frozen=True)
class RewriteRule:
    """Registry entry for one named rewrite rule.

    ``kind`` is ``reducing`` (greedy, shrinks the graph), ``branching``
    (equation with side terms, searched under a budget), ``spliced``
    (virtual move realized implicitly by deleting virtual crossings), or
    ``unused`` (registered for completeness, not part of any strategy).
    """

    name: str
    kind: str
    rulesets: tuple[str, ...]
    note: str


RULES: dict[str, RewriteRule] = {
    r.name: r
    for r in [
        RewriteRule("MOY0", "reducing", ("classical", "deformed"), "free loop removal"),
        RewriteRule("MOY1", "reducing", ("classical", "deformed"), "out-to-in curl on one vertex"),
        RewriteRule("MOY2a", "reducing", ("classical", "deformed"), "parallel double edge merge"),
        RewriteRule("MOY2b", "unused", (), "classical antiparallel double edge; excluded from the strategy"),
        RewriteRule("MOY2b_star", "reducing", ("deformed",), "antiparallel ladder split into a merged vertex plus arcs"),
        RewriteRule("MOY3", "branching", ("classical", "deformed"), "three-vertex slide with two split terms"),
        RewriteRule("VMOY2a", "spliced", ("deformed",), "virtual crossings are spliced out before rewriting"),
        RewriteRule("VMOY2b", "spliced", ("deformed",), "virtual crossings are spliced out before rewriting"),
        RewriteRule("VMOY3a", "spliced", ("deformed",), "virtual crossings are spliced out before rewriting"),
        RewriteRule("VMOY3b", "spliced", ("deformed",), "virtual crossings are spliced out before rewriting"),
        RewriteRule("VR1", "spliced", ("deformed",), "virtual kink removal via splicing"),
        RewriteRule("VR2a", "spliced", ("deformed",), "parallel virtual pair cancellation via splicing"),
        RewriteRule("VR2b", "spliced", ("deformed",), "antiparallel virtual pair cancellation via splicing"),
        RewriteRule("VR3", "spliced", ("deformed",), "virtual triangle slide via splicing"),
        RewriteRule("SVR", "spliced", ("deformed",), "mixed triangle slide via splicing"),
        RewriteRule("Z1p", "spliced", ("deformed",), "parallel slide of a virtual past a positive crossing"),
        RewriteRule("Z1n", "spliced", ("deformed",), "parallel slide of a virtual past a negative crossing"),
        RewriteRule("Z2p", "spliced", ("deformed",), "antiparallel slide of a virtual past a positive crossing"),
        RewriteRule("Z2n", "spliced", ("deformed",), "antiparallel slide of a virtual past a negative crossing"),
    ]
}


@dataclass(frozen=True)
class EvalResult:
    """Outcome of a graph evaluation: a value, or a residual stuck graph."""

    value: Optional[RatFunc]
    stuck: Optional[Diagram] = None
    trace: Optional[tuple[dict, ...]] = None

    def __bool__(self) -> bool:
        return self.value is not None


class _Stuck(Exception):
    def __init__(self, graph: Diagram):
        self.graph = graph


# -- graph surgery -----------------------------------------------------------


def _rebuild(
    g: Diagram,
    doomed: set[str],
    new_nodes: Sequence[Node],
    joins: Sequence[tuple[str, str]],
    discard: frozenset[str] = frozenset(),
) -> Diagram:
    """Remove ``doomed`` nodes, add ``new_nodes``, then merge each ``joins``
    pair (in_edge, out_edge) into one strand.  Edges in ``discard`` are
    consumed by the rewrite and deleted; strands that close up entirely
    through joins become free loops."""
    kept = [nd for nd in g.nodes if nd.id not in doomed]
    final_nodes = kept + list(new_nodes)
    for nd in final_nodes:
        for _, e in nd.ports():
            if e in discard:
                raise AssertionError(f"discarded edge {e} still referenced by {nd.id}")
    tails: dict[str, tuple[str, str]] = {}
    heads: dict[str, tuple[str, str]] = {}
    for nd in final_nodes:
        tails[nd.out1] = (nd.id, "out1")
        tails[nd.out2] = (nd.id, "out2")
        heads[nd.in1] = (nd.id, "in1")
        heads[nd.in2] = (nd.id, "in2")
    for i, e in enumerate(g.boundary_in):
        tails[e] = ("", f"in[{i}]")
    for i, e in enumerate(g.boundary_out):
        heads[e] = ("", f"out[{i}]")
    universe = set(g.edge_tails) - discard
    for nd in new_nodes:
        universe.update((nd.in1, nd.in2, nd.out1, nd.out2))
    parent = {e: e for e in universe}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t in joins:
        parent[find(s)] = find(t)
    classes: dict[str, list[str]] = {}
    for e in universe:
        classes.setdefault(find(e), []).append(e)
    rep: dict[str, str] = {}
    new_loops: list[str] = []
    for members in classes.values():
        with_tail = [e for e in members if e in tails]
        with_head = [e for e in members if e in heads]
        if not with_tail and not with_head:
            name = min(members)
            new_loops.append(name)
        else:
            if len(with_tail) != 1 or len(with_head) != 1:
                raise AssertionError(f"bad surgery: class {members} tails {with_tail} heads {with_head}")
            name = with_tail[0]
        for e in members:
            rep[e] = name
    renamed = []
    for nd in final_nodes:
        renamed.append(
            Node(nd.id, nd.kind, rep[nd.in1], rep[nd.in2], rep[nd.out1], rep[nd.out2])
        )
    loops = sorted(set([rep[e] for e in g.loops] + new_loops))
    return Diagram(
        tuple(renamed),
        tuple(rep[e] for e in g.boundary_in),
        tuple(rep[e] for e in g.boundary_out),
        tuple(loops),
    )


def _fresh(universe: set[str], stem: str, count: int) -> list[str]:
    out = []
    i = 0
    while len(out) < count:
        name = f"~{stem}{i}"
        if name not in universe:
            universe.add(name)
            out.append(name)
        i += 1
    return out


# -- memo keys ---------------------------------------------------------------


def _signature(g: Diagram, order: Sequence[Node]) -> tuple:
    naming: dict[str, int] = {}

    def name(e: str) -> int:
        if e not in naming:
            naming[e] = len(naming)
        return naming[e]

    rows = tuple(
        (nd.kind, name(nd.in1), name(nd.in2), name(nd.out1), name(nd.out2)) for nd in order
    )
    bounds = (
        tuple(name(e) for e in g.boundary_in),
        tuple(name(e) for e in g.boundary_out),
    )
    return rows + (bounds,) + (("loops", len(g.loops)),)


def graph_key(g: Diagram, max_perm: int = 6) -> tuple:
    """Deterministic hash key; canonical up to node relabeling for small graphs."""
    if len(g.nodes) <= max_perm:
        return min(_signature(g, perm) for perm in itertools.permutations(g.nodes))
    return _signature(g, g.nodes)


# -- rule matching -----------------------------------------------------------


def _vertices(g: Diagram) -> list[Node]:
    return [nd for nd in g.nodes if nd.kind == "moy"]


def _find_curl(g: Diagram):
    """An edge running from a vertex's out-port back to one of its in-ports."""
    for nd in _vertices(g):
        for e in (nd.in1, nd.in2):
            if g.edge_tails[e][0] == nd.id:
                other_in = nd.in2 if e == nd.in1 else nd.in1
                other_out = nd.out2 if g.edge_tails[e][1] == "out1" else nd.out1
                return nd, e, other_in, other_out
    return None


def _find_double_edge(g: Diagram):
    """Two vertices joined by both out-ports of one into both in-ports of the other."""
    for nd in _vertices(g):
        t1 = g.edge_heads[nd.out1]
        t2 = g.edge_heads[nd.out2]
        if t1[0] == t2[0] and t1[0] != nd.id:
            other = g.node_map[t1[0]]
            if other.kind == "moy":
                return nd, other
    return None


def _find_ladder(g: Diagram):
    """Two vertices with exactly one edge each way (antiparallel bigon)."""
    for nd in _vertices(g):
        for e_down in (nd.in1, nd.in2):
            src = g.edge_tails[e_down][0]
            if src == nd.id or not src:
                continue
            other = g.node_map[src]
            if other.kind != "moy":
                continue
            up = [e for e in (nd.out1, nd.out2) if g.edge_heads[e][0] == other.id]
            down = [e for e in (nd.in1, nd.in2) if g.edge_tails[e][0] == other.id]
            if len(up) == 1 and len(down) == 1:
                return nd, other, up[0], down[0]
    return None


# The three-vertex slide rule, stored once in the drawn layout and closed
# mechanically under mirror and half-turn symmetry.  Leg names x1..x3 enter
# the pattern, y1..y3 leave it; branch vertices list ports in
# (in1, in2, out1, out2) order using leg names or fresh internal names m1..m3.

_MOY3_BASE = {
    "edges": (("A", "out2", "B", "in1"), ("B", "out1", "C", "in2"), ("A", "out1", "C", "in1")),
    "legs": {
        "x1": ("A", "in1"),
        "x2": ("A", "in2"),
        "x3": ("B", "in2"),
        "y1": ("C", "out1"),
        "y2": ("C", "out2"),
        "y3": ("B", "out2"),
    },
    "branches": (
        (1, (("x2", "x3", "m2", "m3"), ("x1", "m2", "y1", "m1"), ("m1", "m3", "y2", "y3")), ()),
        (2, (("x1", "x2", "y1", "y2"),), (("x3", "y3"),)),
        (3, (("x2", "x3", "y2", "y3"),), (("x1", "y1"),)),
    ),
}

_MIRROR_SLOT = {"in1": "in2", "in2": "in1", "out1": "out2", "out2": "out1"}
_ROTATE_SLOT = {"in1": "out2", "in2": "out1", "out1": "in2", "out2": "in1"}


def _mirror_variant(rule: dict) -> dict:
    return {
        "edges": tuple((a, _MIRROR_SLOT[s], b, _MIRROR_SLOT[t]) for a, s, b, t in rule["edges"]),
        "legs": {k: (v, _MIRROR_SLOT[s]) for k, (v, s) in rule["legs"].items()},
        "branches": tuple(
            (tag, tuple((b, a, d, c) for a, b, c, d in verts), arcs)
            for tag, verts, arcs in rule["branches"]
        ),
    }


def _rotate_variant(rule: dict) -> dict:
    return {
        "edges": tuple((b, _ROTATE_SLOT[t], a, _ROTATE_SLOT[s]) for a, s, b, t in rule["edges"]),
        "legs": {k: (v, _ROTATE_SLOT[s]) for k, (v, s) in rule["legs"].items()},
        "branches": tuple(
            (tag, tuple((d, c, b, a) for a, b, c, d in verts), tuple((t, s) for s, t in arcs))
            for tag, verts, arcs in rule["branches"]
        ),
    }


def _moy3_variants() -> tuple[dict, ...]:
    seen = []
    for rule in (
        _MOY3_BASE,
        _mirror_variant(_MOY3_BASE),
        _rotate_variant(_MOY3_BASE),
        _mirror_variant(_rotate_variant(_MOY3_BASE)),
    ):
        if rule not in seen:
            seen.append(rule)
    return tuple(seen)


_MOY3_VARIANTS = _moy3_variants()


def _port(nd: Node, slot: str) -> str:
    return getattr(nd, slot)


def _moy3_sites(g: Diagram) -> Iterator[tuple[dict, dict[str, Node]]]:
    verts = _vertices(g)
    if len(verts) < 3:
        return
    for variant in _MOY3_VARIANTS:
        for trio in itertools.permutations(verts, 3):
            binding = dict(zip("ABC", trio))
            if all(
                _port(binding[a], s) == _port(binding[b], t)
                for a, s, b, t in variant["edges"]
            ):
                yield variant, binding


def _apply_moy3_branch(g: Diagram, variant: dict, binding: Mapping[str, Node], branch) -> Diagram:
    _, verts, arcs = branch
    legs = {name: _port(binding[v], s) for name, (v, s) in variant["legs"].items()}
    pattern_edges = frozenset(_port(binding[a], s) for a, s, _, _ in variant["edges"])
    universe = set(g.edge_tails)
    internal = {m: name for m, name in zip(("m1", "m2", "m3"), _fresh(universe, "m", 3))}

    def edge_of(label: str) -> str:
        return legs[label] if label in legs else internal[label]

    node_ids = {nd.id for nd in g.nodes}
    new_nodes = []
    i = 0
    for ports in verts:
        while f"~w{i}" in node_ids:
            i += 1
        node_ids.add(f"~w{i}")
        new_nodes.append(Node(f"~w{i}", "moy", *(edge_of(p) for p in ports)))
    joins = [(legs[s], legs[t]) for s, t in arcs]
    return _rebuild(g, {binding[v].id for v in "ABC"}, new_nodes, joins, pattern_edges)


# -- components --------------------------------------------------------------


def _split_components(g: Diagram) -> list[Diagram]:
    if not g.nodes:
        return [g]
    parent = {nd.id: nd.id for nd in g.nodes}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edge_tails:
        t, h = g.edge_tails[e][0], g.edge_heads[e][0]
        if t and h:
            parent[find(t)] = find(h)
    groups: dict[str, list[Node]] = {}
    for nd in g.nodes:
        groups.setdefault(find(nd.id), []).append(nd)
    if len(groups) == 1 and not g.loops:
        return [g]
    parts = [Diagram(tuple(nodes)) for nodes in groups.values()]
    parts.extend(Diagram((), loops=(e,)) for e in g.loops)
    return parts


# -- the evaluator -----------------------------------------------------------

_EVAL_CACHE: dict[tuple, RatFunc] = {}


def clear_eval_cache() -> None:
    _EVAL_CACHE.clear()
    _PERM_CLOSURE_CACHE.clear()


def _note(tr: Optional[list], rule: str, site: Sequence[str]) -> None:
    if tr is not None:
        tr.append({"rule": rule, "site": list(site)})


def _eval(g: Diagram, ruleset: str, budget: int, depth0: int, tr: Optional[list]) -> RatFunc:
    if not g.nodes:
        _note(tr, "MOY0", list(g.loops))
        return CIRCLE_VALUE ** len(g.loops)
    key = None
    if tr is None:
        key = (ruleset, graph_key(g))
        cached = _EVAL_CACHE.get(key)
        if cached is not None:
            return cached

    value: Optional[RatFunc] = None
    if g.loops:
        _note(tr, "MOY0", list(g.loops))
        rest = Diagram(g.nodes, g.boundary_in, g.boundary_out, ())
        value = CIRCLE_VALUE ** len(g.loops) * _eval(rest, ruleset, depth0, depth0, tr)
    else:
        parts = _split_components(g)
        if len(parts) > 1:
            value = RatFunc.one()
            for part in parts:
                value = value * _eval(part, ruleset, depth0, depth0, tr)
        else:
            value = _eval_connected(g, ruleset, budget, depth0, tr)
    if key is not None:
        _EVAL_CACHE[key] = value
    return value


def _eval_connected(g: Diagram, ruleset: str, budget: int, depth0: int, tr: Optional[list]) -> RatFunc:
    curl = _find_curl(g)
    if curl is not None:
        nd, loop_edge, other_in, other_out = curl
        _note(tr, "MOY1", [nd.id])
        after = _rebuild(g, {nd.id}, (), [(other_in, other_out)], frozenset({loop_edge}))
        return CURL_VALUE * _eval(after, ruleset, depth0, depth0, tr)
    double = _find_double_edge(g)
    if double is not None:
        nd, other = double
        _note(tr, "MOY2a", [nd.id, other.id])
        merged = Node(nd.id, "moy", nd.in1, nd.in2, other.out1, other.out2)
        after = _rebuild(
            g, {nd.id, other.id}, (merged,), (), frozenset({nd.out1, nd.out2})
        )
        return RatFunc(DOUBLE_EDGE_FACTOR) * _eval(after, ruleset, depth0, depth0, tr)
    if ruleset == "deformed":
        ladder = _find_ladder(g)
        if ladder is not None:
            left, right, e_to_right, e_to_left = ladder
            _note(tr, "MOY2b_star", [left.id, right.id])
            a_in = left.in2 if left.in1 == e_to_left else left.in1
            b_out = left.out2 if left.out1 == e_to_right else left.out1
            c_in = right.in2 if right.in1 == e_to_right else right.in1
            d_out = right.out2 if right.out1 == e_to_left else right.out1
            node_ids = {n.id for n in g.nodes}
            i = 0
            while f"~w{i}" in node_ids:
                i += 1
            merged = Node(f"~w{i}", "moy", a_in, c_in, b_out, d_out)
            discard = frozenset({e_to_right, e_to_left})
            wide = _rebuild(g, {left.id, right.id}, (merged,), (), discard)
            arcs = _rebuild(
                g, {left.id, right.id}, (), [(a_in, b_out), (c_in, d_out)], discard
            )
            return _eval(wide, ruleset, depth0, depth0, tr) + LADDER_TAIL * _eval(
                arcs, ruleset, depth0, depth0, tr
            )
    if budget <= 0:
        raise _Stuck(g)
    for variant, binding in _moy3_sites(g):
        site = [binding[v].id for v in "ABC"]
        try:
            _note(tr, "MOY3", site)
            swapped, keep_left, keep_right = (
                _apply_moy3_branch(g, variant, binding, branch) for branch in variant["branches"]
            )
            return (
                _eval(swapped, ruleset, budget - 1, depth0, tr)
                + RatFunc(_Q2) * _eval(keep_left, ruleset, depth0, depth0, tr)
                - RatFunc(_Q2) * _eval(keep_right, ruleset, depth0, depth0, tr)
            )
        except _Stuck:
            continue
    raise _Stuck(g)


def eval_moy(
    graph: Diagram,
    ruleset: str = "classical",
    depth: int = 8,
    trace: bool = False,
) -> EvalResult:
    """Evaluate a closed graph of vertices and virtual crossings.

    Parameters
    ----------
    graph:
        Closed diagram whose nodes are all of kind ``moy`` or ``vir``.
    ruleset:
        ``"classical"`` (vir-free input required) or ``"deformed"``
        (virtual crossings allowed; they are spliced out first, and the
        antiparallel ladder rule is available).
    depth:
        Budget of consecutive neutral three-vertex slides to search before
        reporting the graph as stuck.  The budget limits fresh search only:
        values memoized by earlier evaluations are returned even at depth 0
        (use :func:`clear_eval_cache` to measure search behavior).
    trace:
        When true, return the list of applied rules for audit.

    Returns
    -------
    EvalResult
        ``value`` on success, else ``stuck`` holding the residual graph.
    """
    if not graph.is_closed:
        raise InputError("eval_moy needs a closed graph")
    bad = [nd.id for nd in graph.nodes if nd.kind not in ("moy", "vir")]
    if bad:
        raise InputError(f"eval_moy input has unresolved crossings {bad}")
    virs = [nd.id for nd in graph.nodes if nd.kind == "vir"]
    if virs:
        if ruleset == "classical":
            raise InputError("classical ruleset requires a vir-free graph")
        graph = splice_out(graph, virs)
    tr: Optional[list] = [] if trace else None
    if trace and virs:
        _note(tr, "vir_splice", virs)
    try:
        value = _eval(graph, ruleset, depth, depth, tr)
    except _Stuck as stuck:
        return EvalResult(None, stuck.graph, tuple(tr) if tr is not None else None)
    return EvalResult(value, None, tuple(tr) if tr is not None else None)


# -- state sums --------------------------------------------------------------


def resolved_graph(state) -> Diagram:
    """The graph of one resolution: vertex choices become wide-edge nodes,
    smoothing choices connect in1->out1 and in2->out2."""
    base = state.base
    doomed = set(state.choices)
    new_nodes = []
    joins = []
    for node_id, choice in state.choices.items():
        nd = base.node_map[node_id]
        if choice == "vertex":
            new_nodes.append(Node(nd.id, "moy", nd.in1, nd.in2, nd.out1, nd.out2))
        else:
            joins.append((nd.in1, nd.out1))
            joins.append((nd.in2, nd.out2))
    return _rebuild(base, doomed, new_nodes, joins)


def _state_sum(d: Diagram, ruleset: str, depth: int) -> RatFunc:
    total = RatFunc.zero()
    for state in resolve_states(d):
        graph = resolved_graph(state)
        result = eval_moy(graph, ruleset, depth)
        if not result:
            raise StuckError(result.stuck)
        sign = -1 if state.vertex_count % 2 else 1
        total = total + result.value.shift(q=state.weight) * sign
    return total


def homfly_state_sum(d: Diagram, depth: int = 8) -> RatFunc:
    """HOMFLY-PT polynomial of a closed vir-free diagram by the state sum.

    Each crossing is resolved into its smoothing and its vertex; states are
    weighted by (-1)^vertices q^(-2 per positive crossing resolved to a
    vertex) and evaluated with the classical ruleset.

    Raises :class:`StuckError` (carrying the residual graph) if a state
    cannot be evaluated, and :class:`InputError` for open or virtual input.
    """
    if not d.is_closed:
        raise InputError("homfly_state_sum needs a closed diagram")
    if d.counts["vir"]:
        raise InputError("homfly_state_sum does not accept virtual crossings")
    return _state_sum(d, "classical", depth)


def pb_eval(d: Diagram, depth: int = 8) -> EvalResult:
    """Deformed polynomial of a closed diagram, virtual crossings allowed.

    Positive crossings resolve to [smoothing] - q^-2 [vertex], negative to
    [smoothing] - [vertex]; states are evaluated with the deformed ruleset.
    Returns an :class:`EvalResult` whose ``stuck`` field carries the first
    residual graph if some state cannot be evaluated.
    """
    if not d.is_closed:
        raise InputError("pb_eval needs a closed diagram")
    virs = [nd.id for nd in d.nodes if nd.kind == "vir"]
    if virs:
        d = splice_out(d, virs)
    try:
        return EvalResult(_state_sum(d, "deformed", depth))
    except StuckError as err:
        return EvalResult(None, err.graph)


# -- the skein oracle --------------------------------------------------------

# Applying the skein relation at a repeated crossing rewrites any word so
# that each pair of strands crosses at most once; words in that normal form
# are labelled by the permutation they induce.  The recursion below keeps a
# q-linear combination of such labels and never touches graph code.

_SKEIN_KEPT_POS = ONE - Q**-2
_SKEIN_KEPT_NEG = ONE - Q**2
_STAB_POS = -RatFunc(Q**-2)


def _word_key(strands: int, letters: tuple) -> tuple:
    rotations = [letters[i:] + letters[:i] for i in range(len(letters))] or [()]
    return (strands, min(rotations))


def _skein_mul(terms: Mapping[tuple, LaurentPoly], index: int, kind: str) -> dict:
    """Append one letter to a combination of normal-form words.

    INPUT: terms mapping endpoint permutations to coefficients, the letter's
    strand index (1-based) and kind.
    OUTPUT: the combination for the longer word, renormalized: when the new
    letter crosses an already-crossed pair, the skein relation trades it for
    the shorter words with the pair uncrossed or smoothed.
    """
    out: dict[tuple, LaurentPoly] = {}

    def add(perm: tuple, coeff: LaurentPoly) -> None:
        acc = out.get(perm)
        acc = coeff if acc is None else acc + coeff
        if acc.terms:
            out[perm] = acc
        elif perm in out:
            del out[perm]

    i = index - 1
    for perm, coeff in terms.items():
        swapped = perm[:i] + (perm[i + 1], perm[i]) + perm[i + 2 :]
        ascending = perm[i] < perm[i + 1]
        if kind == "pos":
            if ascending:
                add(swapped, coeff)
            else:
                add(swapped, coeff * Q**-2)
                add(perm, coeff * _SKEIN_KEPT_POS)
        else:
            if ascending:
                add(swapped, coeff * Q**2)
                add(perm, coeff * _SKEIN_KEPT_NEG)
            else:
                add(swapped, coeff)
    return out


_PERM_CLOSURE_CACHE: dict[tuple, RatFunc] = {}


def _perm_closure(perm: tuple) -> RatFunc:
    """Closure value of the positive normal-form word for one permutation.

    A strand that ends where it started closes to a free loop; otherwise the
    topmost strand carries a single positive crossing run, and removing it is
    a destabilization with the usual factor.
    """
    cached = _PERM_CLOSURE_CACHE.get(perm)
    if cached is not None:
        return cached
    n = len(perm)
    if n == 0:
        return RatFunc.one()
    p = perm.index(n - 1)
    if p == n - 1:
        value = CIRCLE_VALUE * _perm_closure(perm[:-1])
    else:
        sub: Mapping[tuple, LaurentPoly] = {perm[:p] + perm[p + 1 :]: ONE}
        for g in range(n - 2, p, -1):
            sub = _skein_mul(sub, g, "pos")
        value = _STAB_POS * sum(
            (RatFunc(coeff) * _perm_closure(w) for w, coeff in sub.items()),
            RatFunc.zero(),
        )
    _PERM_CLOSURE_CACHE[perm] = value
    return value


def skein_homfly_oracle(
    word: BraidWord,
    budget: int = 1_000_000,
    _memo: Optional[dict] = None,
) -> RatFunc:
    """HOMFLY-PT polynomial of a braid closure by skein recursion on words.

    Letters are consumed one at a time: whenever a letter makes two strands
    cross twice, the skein relation replaces it by shorter words, so every
    word becomes a combination of words crossing each strand pair at most
    once.  Those are closed off strand by strand with the free-loop and
    destabilization factors.  Raises :class:`OracleError` if the running
    combination ever exceeds ``budget`` terms.
    """
    if any(kind == "vir" for _, kind in word.letters):
        raise InputError("the skein oracle handles classical words only")
    memo: dict = {} if _memo is None else _memo
    letters = tuple(word.letters)
    key = _word_key(word.strands, letters)
    if key in memo:
        return memo[key]
    terms: Mapping[tuple, LaurentPoly] = {tuple(range(word.strands)): ONE}
    for index, kind in letters:
        terms = _skein_mul(terms, index, kind)
        if len(terms) > budget:
            raise OracleError(
                f"recursion budget exceeded for word on {word.strands} "
                f"strands: {letters}"
            )
    value = sum(
        (RatFunc(coeff) * _perm_closure(perm) for perm, coeff in terms.items()),
        RatFunc.zero(),
    )
    memo[key] = value
    return value
