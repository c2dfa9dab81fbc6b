from __future__ import annotations

import json
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkhom.diagram import (
    BraidWord,
    Diagram,
    InputError,
    Node,
    braid_closure,
    braid_to_text,
    insert_local,
    library_diagram,
    parse_braid,
    parse_pd,
    resolve_states,
    splice_out,
    torus_nonbraid,
)


def _states(d):
    return list(resolve_states(d))


def _closure(text):
    return braid_closure(parse_braid(text))


# -- braid parsing -----------------------------------------------------------


def test_parse_trefoil_word():
    w = parse_braid("n=2 ; -1 -1 -1")
    assert w.strands == 2
    assert w.letters == ((1, "neg"), (1, "neg"), (1, "neg"))


def test_parse_identity_word():
    w = parse_braid("n=3 ;")
    assert w.strands == 3
    assert w.letters == ()


def test_parse_virtual_tokens():
    assert parse_braid("n=2 ; v1 v1").letters == ((1, "vir"), (1, "vir"))
    assert parse_braid("n=3 ; v 2 +1").letters == ((2, "vir"), (1, "pos"))


@pytest.mark.parametrize(
    "text",
    [
        "-1 -1",  # no header
        "m=2 ; 1",
        "n=2 ; x3",
        "n=2 ; 0",
        "n=2 ; 2",  # out of range
        "n=2 ; v",
        "n=2 ; v2",  # out of range virtual
        "n=0 ;",
    ],
)
def test_parse_braid_rejects(text):
    with pytest.raises(InputError):
        parse_braid(text)


def test_braid_text_round_trip():
    for text in ["n=2 ; -1 -1 -1", "n=3 ;", "n=4 ; 1 v2 -3 v 1"]:
        w = parse_braid(text)
        assert parse_braid(braid_to_text(w)) == w


# -- closures ----------------------------------------------------------------


def test_closure_of_identity_is_unlink():
    d = braid_closure(BraidWord(1))
    assert d.nodes == ()
    assert d.loops == ("s1",)
    assert d.component_count() == 1


def test_closure_trefoil_shape():
    d = _closure("n=2 ; -1 -1 -1")
    assert len(d.nodes) == 3
    assert len(d.edges) == 6
    assert d.is_closed
    assert d.component_count() == 1
    assert d.writhe == -3


def test_closure_pos_neg_pair_has_two_components():
    d = _closure("n=2 ; 1 -1")
    assert len(d.nodes) == 2
    assert d.component_count() == 2


def test_closure_untouched_strand_becomes_loop():
    d = _closure("n=3 ; 1")
    assert d.loops == ("s3",)
    assert d.component_count() == 2


@st.composite
def _words(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    letters = ()
    if n > 1:
        letters = draw(
            st.lists(
                st.tuples(
                    st.integers(min_value=1, max_value=n - 1),
                    st.sampled_from(["pos", "neg", "vir"]),
                ),
                max_size=6,
            )
        )
    return BraidWord(n, tuple(letters))


@settings(max_examples=60, deadline=None)
@given(_words())
def test_closure_components_match_permutation_cycles(word):
    d = braid_closure(word)
    assert len(d.nodes) == len(word.letters)
    assert d.is_closed
    assert d.component_count() == word.component_count()


@settings(max_examples=40, deadline=None)
@given(_words())
def test_closure_json_round_trip_is_bit_exact(word):
    d = braid_closure(word)
    text = d.dumps()
    assert parse_pd(text).dumps() == text


# -- PD parsing --------------------------------------------------------------


def test_parse_single_closed_loop():
    d = parse_pd('{"loops": ["c"]}')
    assert d.nodes == ()
    assert d.component_count() == 1


def test_parse_open_antiparallel_pair_tangle():
    # Stacked negative-under-positive pair with two in / two out legs.
    d = parse_pd(
        json.dumps(
            {
                "nodes": [
                    {"id": "nb", "kind": "neg", "in1": "ml", "in2": "li", "out1": "mr", "out2": "ro"},
                    {"id": "nt", "kind": "pos", "in1": "mr", "in2": "ri", "out1": "ml", "out2": "lo"},
                ],
                "boundary_in": ["li", "ri"],
                "boundary_out": ["lo", "ro"],
            }
        )
    )
    assert not d.is_closed
    assert d.counts["pos"] == d.counts["neg"] == 1


@pytest.mark.parametrize(
    "obj",
    [
        {"nodes": [{"id": "n", "kind": "pos", "in1": "a", "in2": "b", "out1": "c", "out2": "d"}]},
        {"nodes": [{"id": "n", "kind": "pos", "in1": "a", "in2": "a", "out1": "a", "out2": "b"}]},
        {
            "nodes": [
                {"id": "n", "kind": "pos", "in1": "a", "in2": "b", "out1": "a", "out2": "b"},
                {"id": "m", "kind": "neg", "in1": "c", "in2": "d", "out1": "c", "out2": "d"},
            ],
            "loops": ["c"],
        },
        {"nodes": [], "loops": ["x", "x"]},
        {"nodes": [{"id": "n", "kind": "zip", "in1": "a", "in2": "b", "out1": "a", "out2": "b"}]},
        {"nodes": [], "loops": ["~mark"]},
        {"nodes": [], "circles": ["c"]},
    ],
)
def test_parse_pd_rejects(obj):
    with pytest.raises(InputError):
        parse_pd(json.dumps(obj))


def test_parse_pd_rejects_bad_json_text():
    with pytest.raises(InputError):
        parse_pd("{nodes: ")


def test_duplicate_node_id_rejected():
    with pytest.raises(InputError):
        Diagram(
            (
                Node("n", "pos", "a", "b", "a", "b"),
                Node("n", "neg", "c", "d", "c", "d"),
            )
        )


# -- resolution states -------------------------------------------------------


def test_trefoil_resolves_to_eight_states():
    states = _states(_closure("n=2 ; -1 -1 -1"))
    assert len(states) == 8
    profile = sorted((s.vertex_count, s.weight) for s in states)
    assert profile == sorted([(0, 0), (1, 0), (1, 0), (1, 0), (2, 0), (2, 0), (2, 0), (3, 0)])


def test_positive_pair_weights():
    states = _states(_closure("n=2 ; 1 1"))
    assert sorted(s.weight for s in states) == [-4, -2, -2, 0]


def test_zero_crossing_diagram_single_state():
    states = _states(parse_pd('{"loops": ["c"]}'))
    assert len(states) == 1
    assert states[0].weight == 0 and states[0].vertex_count == 0


def test_virtual_nodes_persist_unresolved():
    d = library_diagram("exchange_beta1")
    states = _states(d)
    assert len(states) == 4  # two classical crossings only
    for s in states:
        assert set(s.choices) == {n.id for n in d.nodes if n.kind in ("pos", "neg")}


@settings(max_examples=40, deadline=None)
@given(_words())
def test_state_weights_recount(word):
    d = braid_closure(word)
    states = _states(d)
    classical = [n for n in d.nodes if n.kind in ("pos", "neg")]
    assert len(states) == 2 ** len(classical)
    for s in states:
        pos_vertex = sum(
            1
            for n in classical
            if n.kind == "pos" and s.choices[n.id] == "vertex"
        )
        assert s.weight == -2 * pos_vertex
        assert s.vertex_count == sum(1 for c in s.choices.values() if c == "vertex")


# -- local insertions --------------------------------------------------------


def test_kink_on_edge_adds_one_node():
    d = _closure("n=2 ; -1 -1 -1")
    out = insert_local(d, "s1", "kink_pos")
    assert len(out.nodes) == 4
    assert out.component_count() == d.component_count()
    assert out.writhe == d.writhe + 1


def test_kink_on_free_loop():
    d = parse_pd('{"loops": ["c"]}')
    out = insert_local(d, "c", "kink_neg")
    assert len(out.nodes) == 1
    assert out.loops == ()
    assert out.component_count() == 1
    assert out.writhe == -1


def test_pair_insertion_kinds():
    d = _closure("n=2 ; -1 -1 -1")
    for pattern, kinds in [
        ("riib_pair", ("neg", "pos")),
        ("vir_over_neg", ("neg", "vir")),
        ("exchange_swap", ("pos", "neg")),
    ]:
        out = insert_local(d, ("s1", "s2"), pattern)
        assert len(out.nodes) == 5
        assert (out.nodes[-2].kind, out.nodes[-1].kind) == kinds
        assert out.component_count() == d.component_count()


def test_riib_insertion_round_trips_on_distinct_edges():
    d = _closure("n=2 ; -1 -1 -1")
    out = insert_local(d, ("s1", "e0"), "riib_pair")
    back = splice_out(out, [n.id for n in out.nodes if n.id not in d.node_map])
    assert back.dumps() == d.dumps()


def test_riib_insertion_round_trips_on_single_edge():
    d = _closure("n=2 ; -1 -1 -1")
    out = insert_local(d, ("s1", "s1"), "riib_pair")
    assert len(out.nodes) == 5
    back = splice_out(out, ["nb", "nt"])
    assert back.dumps() == d.dumps()


def test_riib_insertion_round_trips_on_loop():
    d = parse_pd('{"loops": ["c"]}')
    out = insert_local(d, ("c", "c"), "riib_pair")
    assert len(out.nodes) == 2
    assert out.loops == ()
    assert out.component_count() == 1
    back = splice_out(out, ["nb", "nt"])
    assert back.dumps() == d.dumps()


def test_riib_insertion_with_loop_on_one_side():
    d = _closure("n=3 ; 1")  # has free loop s3
    out = insert_local(d, ("s3", "s1"), "riib_pair")
    assert out.component_count() == d.component_count()
    back = splice_out(out, ["nb", "nt"])
    assert back.dumps() == d.dumps()


def test_double_riib_on_unknot_gives_four_crossings():
    d = parse_pd('{"loops": ["c"]}')
    once = insert_local(d, ("c", "c"), "riib_pair")
    edges = once.edges
    twice = insert_local(once, (edges[0], edges[1]), "riib_pair")
    assert len(twice.nodes) == 4
    assert twice.counts["pos"] == twice.counts["neg"] == 2
    assert twice.component_count() == 1


def test_insert_rejects_bad_sites():
    d = _closure("n=2 ; -1 -1 -1")
    with pytest.raises(InputError):
        insert_local(d, "zzz", "kink_pos")
    with pytest.raises(InputError):
        insert_local(d, ("s1", "zzz"), "riib_pair")
    with pytest.raises(InputError):
        insert_local(d, "s1", "riib_pair")
    with pytest.raises(InputError):
        insert_local(d, ("s1", "s2"), "nonsense")


# -- built-in library --------------------------------------------------------


def test_library_riib_host_family():
    host = library_diagram("riib_host")
    assert len(host.nodes) == 5
    assert host.counts == {"pos": 2, "neg": 3, "vir": 0, "moy": 0}
    assert host.component_count() == 1
    assert host.writhe == -1

    virred = library_diagram("riib_host_vir")
    assert virred.counts == {"pos": 0, "neg": 3, "vir": 2, "moy": 0}
    assert {n.id for n in virred.nodes if n.kind == "vir"} == {"c3", "c5"}
    assert virred.component_count() == 1

    slid = library_diagram("riib_host_slid")
    assert slid.counts == {"pos": 0, "neg": 3, "vir": 2, "moy": 0}
    assert slid.component_count() == 1

    tref = library_diagram("riib_host_trefoil")
    assert tref.counts == {"pos": 0, "neg": 3, "vir": 0, "moy": 0}
    assert tref.component_count() == 1


def test_library_virtual_cancellation_recovers_trefoil():
    # Splicing out the two virtual crossings of the slid host leaves a
    # 3-crossing diagram isomorphic to the round trefoil entry.
    slid = library_diagram("riib_host_slid")
    spliced = splice_out(slid, [n.id for n in slid.nodes if n.kind == "vir"])
    assert spliced.counts == {"pos": 0, "neg": 3, "vir": 0, "moy": 0}
    assert spliced.component_count() == 1


def test_library_torus_family():
    for k in (1, 2, 3):
        d = torus_nonbraid(k)
        assert len(d.nodes) == 2 * k + 3
        assert d.component_count() == 1
        assert d.writhe == 2 * k + 1
        braid = library_diagram(f"torus_braid_k{k}")
        assert len(braid.nodes) == 2 * k + 1
        assert braid.component_count() == 1


def test_library_exchange_closures():
    b1 = library_diagram("exchange_beta1")
    b2 = library_diagram("exchange_beta2")
    assert len(b1.nodes) == len(b2.nodes) == 6
    assert b1.component_count() == b2.component_count() == 3
    assert b1.counts["vir"] == 4 and b2.counts["vir"] == 2


def test_library_unknown_name():
    with pytest.raises(InputError):
        library_diagram("nope")


@pytest.mark.parametrize(
    "name",
    [
        "unknot",
        "trefoil_neg",
        "riib_host",
        "riib_host_vir",
        "riib_host_slid",
        "riib_host_trefoil",
        "exchange_beta1",
        "exchange_beta2",
        "torus_nonbraid_k1",
        "torus_nonbraid_k2",
        "torus_nonbraid_k3",
    ],
)
def test_shipped_data_files_match_builders(name):
    path = resources.files("linkhom").joinpath("data", f"{name}.json")
    assert path.read_text() == library_diagram(name).dumps() + "\n"
