"""Proved transition rules, system construction, and export."""

from __future__ import annotations

import json

import pytest

from revexp import (
    Act,
    BrsPrefix,
    NIL,
    Dot,
    Syn,
    brs_forward_steps,
    build_brs_lts,
    build_lts,
    encode,
    export,
    forward_steps,
    incoming,
    parse,
    render,
)
from revexp.errors import StateBudgetError, UnknownStateError
from revexp.generate import seed_terms
from revexp.semantics import undo_steps
from revexp.syntax import render_proof
from revexp.terms import Par, act


def test_forward_steps_duplicate_choice():
    steps = forward_steps(parse("a.0 + a.0"))
    assert [(render_proof(t), render(q)) for t, q in steps] == [
        ("+l a", "a!.0 + a.0"),
        ("+r a", "a.0 + a!.0"),
    ]


def test_forward_steps_blocked_synchronization():
    assert forward_steps(parse("a.0 |[a]| 0")) == []


def test_forward_steps_synchronization():
    steps = forward_steps(parse("c.0 |[c]| c.0"))
    assert len(steps) == 1
    theta, target = steps[0]
    assert theta == Syn(Act("c"), Act("c"))
    assert render(target) == "c!.0 |[c]| c!.0"


def test_forward_steps_propagate_under_executed_prefix():
    steps = forward_steps(parse("a!.b.0"))
    assert [(render_proof(t), render(q)) for t, q in steps] == [(".b", "a!.b!.0")]


def test_non_selected_choice_side_cannot_move():
    # only the side selected in the past keeps moving
    steps = forward_steps(parse("a!.b.0 + c.d.0"))
    assert [render_proof(t) for t, _ in steps] == ["+l .b"]


def test_brs_forward_steps():
    u = encode(parse("a.b.0"))
    (label, ready), target = brs_forward_steps(u)[0]
    assert label == Act("a") and ready == ("a",)
    ((label2, ready2), _t2), = brs_forward_steps(target)
    assert label2 == Dot(Act("b")) and ready2 == ("b",)
    assert brs_forward_steps(NIL) == []


def test_brs_step_carries_the_stored_ready_set():
    u = BrsPrefix("a", True, frozenset("a"),
                  BrsPrefix("b", False, frozenset("ab"), NIL, ready_order=("a", "b")))
    ((label, ready), _), = brs_forward_steps(u)
    assert label == Dot(Act("b"))
    assert ready == ("a", "b")


def test_build_lts_counts():
    assert build_lts(parse("a.0")).num_states == 2
    diamond = build_lts(parse("a.0 |[]| b.0"))
    assert diamond.num_states == 4 and len(diamond.transitions) == 4
    tree = build_lts(parse("a.b.0 + b.a.0"))
    assert tree.num_states == 5 and len(tree.transitions) == 4


def test_build_brs_lts_counts():
    assert build_brs_lts(encode(parse("a.0"))).num_states == 2
    assert build_brs_lts(NIL).num_states == 1
    # the two second-step states differ only in their ready sets
    lts = build_brs_lts(encode(parse("a.0 |[]| b.0")))
    assert lts.num_states == 5


def test_state_budget():
    with pytest.raises(StateBudgetError):
        build_lts(parse("a.0 |[]| b.0 |[]| c.0"), max_states=3)


def test_build_is_deterministic():
    a = build_lts(parse("a.0 |[a]| (a.0 + b.0)"))
    b = build_lts(parse("a.0 |[a]| (a.0 + b.0)"))
    assert a.renders == b.renders
    assert a.transitions == b.transitions


def test_incoming():
    diamond = build_lts(parse("a.0 |[]| b.0"))
    assert incoming(diamond, diamond.root) == []
    bottom = diamond.state_of(parse("a!.0 |[]| b!.0"))
    labels = {act(t.label) for t in incoming(diamond, bottom)}
    assert labels == {"a", "b"}
    tree = build_lts(parse("a.b.0 + b.a.0"))
    left_bottom = tree.state_of(parse("a!.b!.0 + b.a.0"))
    assert [act(t.label) for t in incoming(tree, left_bottom)] == ["b"]
    with pytest.raises(UnknownStateError):
        incoming(diamond, 99)


def test_loop_property_everywhere():
    for seed in seed_terms(3, ("a", "b")):
        lts = build_lts(seed)
        for sid in range(lts.num_states):
            assert lts.initial[sid] == (not lts.incoming_ids[sid])


def test_sequential_systems_are_trees():
    for seed in seed_terms(3, ("a", "b")):
        if any(isinstance(q, Par) for q in _subterms(seed)):
            continue
        lts = build_lts(seed)
        assert len(lts.transitions) == lts.num_states - 1
        for sid in range(lts.num_states):
            assert len(lts.incoming_ids[sid]) == (0 if lts.initial[sid] else 1)


def _subterms(p):
    yield p
    for attr in ("cont", "left", "right"):
        child = getattr(p, attr, None)
        if child is not None:
            yield from _subterms(child)


def test_undo_steps_are_the_incoming_transitions():
    p = parse("a!.0 |[]| b!.0")
    edges = undo_steps(p)
    assert {act(t) for t, _ in edges} == {"a", "b"}
    lts = build_lts(parse("a.0 |[]| b.0"))
    sid = lts.state_of(p)
    assert len(edges) == len(incoming(lts, sid))


def test_export_dot():
    lts = build_lts(parse("0"))
    dot = export(lts, "dot")
    assert dot.startswith("digraph lts {")
    assert dot.count("->") == 0
    diamond = export(build_lts(parse("a.0 |[]| b.0")), "dot")
    assert diamond.count("->") == 4
    assert diamond.count("n0 [") == 1


def test_export_json_round_trip():
    lts = build_lts(parse("a.0 |[]| b.0"))
    data = json.loads(export(lts, "json"))
    assert data["root"] == 0
    assert len(data["states"]) == lts.num_states
    assert len(data["transitions"]) == len(lts.transitions)
    assert all(parse(s["term"], allow_illformed=True) for s in data["states"])
    brs_lts = build_brs_lts(encode(parse("a.0 |[]| b.0")))
    data2 = json.loads(export(brs_lts, "json"))
    assert all("ready" in t for t in data2["transitions"])
    with pytest.raises(ValueError):
        export(lts, "xml")
