"""Ready-set encoding, parallel expansion, orders, and correspondence."""

from __future__ import annotations

import pytest

from revexp import (
    Act,
    HistoryOrder,
    LexOrder,
    ParL,
    ParR,
    Variant,
    check,
    check_brs,
    encode,
    expand_parallel,
    observe,
    parse,
    render,
    verify_correspondence,
)
from revexp.encoding import (
    brs_preserved_shape,
    canonical_history,
    default_order,
    last_executed,
    minimal_trace_histories,
)
from revexp.errors import EncodingInputError, NotReachableError, OrderUndefinedError
from revexp.generate import enumerate_processes
from revexp.terms import BrsPrefix, Choice, NIL, brs, is_initial, to_initial

P = parse


# --- observe -----------------------------------------------------------------

def test_observe():
    obs = observe(Act("a"), P("a!.0"))
    assert obs.action == "a" and obs.ready == frozenset("a")
    obs = observe(ParR(Act("b")), P("a!.0 |[]| b!.0"))
    assert obs == observe(ParR(Act("b")), P("b!.0 |[]| a!.0"))
    assert obs.ready == frozenset({"a", "b"})
    # equal actions collapse the ready set to a singleton
    assert observe(Act("a"), P("a!.0 |[]| a!.0")).ready == frozenset("a")


# --- encode ------------------------------------------------------------------

GOLDEN = [
    ("a.b.0 + b.a.0", "<a,{a}>.<b,{b}>.0 + <b,{b}>.<a,{a}>.0"),
    ("a!.b!.0", "<a!,{a}>.<b!,{b}>.0"),
    ("a.0 |[]| b.0", "<a,{a}>.<b,{a,b}>.0 + <b,{b}>.<a,{b,a}>.0"),
    ("a!.0 |[]| b.0", "<a!,{a}>.<b,{a,b}>.0 + <b,{b}>.<a,{b,a}>.0"),
    ("a!.0 |[]| b!.0", "<a!,{a}>.<b!,{a,b}>.0 + <b,{b}>.<a,{b,a}>.0"),
    ("a!.c!.0 |[c]| c!.b.0", "<a!,{a}>.<c!,{c}>.<b,{b}>.0"),
    (
        "(a.0 + c.0) |[]| (b.0 + d.0)",
        "<a,{a}>.(<b,{a,b}>.0 + <d,{a,d}>.0) + <c,{c}>.(<b,{c,b}>.0 + <d,{c,d}>.0)"
        " + <b,{b}>.(<a,{b,a}>.0 + <c,{b,c}>.0) + <d,{d}>.(<a,{d,a}>.0 + <c,{d,c}>.0)",
    ),
    (
        "(a.0 + c.0) |[]| (b!.0 + d.0)",
        "<b!,{b}>.(<a,{b,a}>.0 + <c,{b,c}>.0) + <d,{d}>.(<a,{d,a}>.0 + <c,{d,c}>.0)"
        " + <a,{a}>.(<b,{a,b}>.0 + <d,{a,d}>.0) + <c,{c}>.(<b,{c,b}>.0 + <d,{c,d}>.0)",
    ),
    (
        "(a.0 |[]| b.0) |[]| c.0",
        "<a,{a}>.(<b,{a,b}>.<c,{a,b,c}>.0 + <c,{a,c}>.<b,{a,c,b}>.0)"
        " + <b,{b}>.(<a,{b,a}>.<c,{b,a,c}>.0 + <c,{b,c}>.<a,{b,c,a}>.0)"
        " + <c,{c}>.(<a,{c,a}>.<b,{c,a,b}>.0 + <b,{c,b}>.<a,{c,b,a}>.0)",
    ),
    (
        "(a.0 |[]| c.0) + (b.0 |[]| d.0)",
        "<a,{a}>.<c,{a,c}>.0 + <c,{c}>.<a,{c,a}>.0"
        " + (<b,{b}>.<d,{b,d}>.0 + <d,{d}>.<b,{d,b}>.0)",
    ),
]


@pytest.mark.parametrize("src,expected", GOLDEN)
def test_encoding_goldens(src, expected):
    assert render(encode(P(src))) == expected


def test_encode_requires_reachability():
    with pytest.raises(NotReachableError):
        encode(P("a!.0 |[a]| 0"))


def test_encode_prefix_compositionality():
    from revexp.terms import Prefix
    # an unexecuted prefix turns into the same prefix carrying its own action
    for p in list(enumerate_processes(3, ("a", "b")))[:400]:
        if not is_initial(p):
            continue
        order = LexOrder()
        u = encode(p, order)
        prefixed = encode(Prefix("e", False, p), order)
        assert prefixed == BrsPrefix("e", False, frozenset("e"), u)


def test_encode_executed_prefix_compositionality():
    from revexp.terms import Prefix
    # the ready set of an executed prefix reflects the state right after it
    # fired, with the deeper flags not yet set (as in the worked examples:
    # the first prefix of the encoding of a!.b!.0 carries {a}, not {b})
    for src in ("a.0", "b!.c.0", "a.0 |[]| b.0"):
        p = P(src)
        u = encode(Prefix("e", True, p), LexOrder())
        assert isinstance(u, BrsPrefix) and u.executed and u.action == "e"
        assert u.ready == frozenset("e")
        assert u.cont == encode(p, LexOrder())


def test_encode_choice_compositionality():
    for left, right in [("a.b.0", "c.0"), ("a!.b.0", "c.0"), ("a.0 |[]| b.0", "c.c.0")]:
        l, r = P(left), P(right)
        combined = encode(Choice(l, r))
        assert combined == Choice(encode(l), encode(r))


def test_encode_preserves_initiality():
    for p in list(enumerate_processes(3, ("a", "b")))[:600]:
        assert is_initial(encode(p)) == is_initial(p)


def test_brs_preservation_and_its_documented_failure():
    for p in list(enumerate_processes(3, ("a", "b")))[:600]:
        if brs_preserved_shape(p):
            assert brs(encode(p)) == brs(p), render(p)
    # the documented counterexample under the a-first serialization
    p = P("a!.0 |[]| b!.0")
    assert not brs_preserved_shape(p)
    assert brs(p) == frozenset({"a", "b"})
    assert brs(encode(p)) == frozenset({"b"})


def test_last_executed():
    assert last_executed(encode(P("a!.b!.0"))) == "b"
    assert last_executed(encode(P("a!.b.0 + c.0"))) == "a"
    assert last_executed(encode(P("a.0"))) is None


# --- expand_parallel ---------------------------------------------------------

def test_expand_parallel_nil():
    env = P("0 |[]| 0")
    assert expand_parallel(NIL, NIL, (), env) == NIL


def test_expand_parallel_example():
    env = P("a!.0 |[]| b.0")
    u = expand_parallel(encode(P("a!.0")), encode(P("b.0")), (), env)
    assert render(u) == "<a!,{a}>.<b,{a,b}>.0 + <b,{b}>.<a,{b,a}>.0"


def test_expand_parallel_ladder():
    env = P("(a.0 + c.0) |[]| (b.0 + d.0)")
    u = expand_parallel(encode(P("a.0 + c.0")), encode(P("b.0 + d.0")), (), env)
    assert render(u) == render(encode(env))


def test_expand_parallel_requires_annotations():
    bare = BrsPrefix("a", False, frozenset("a"), NIL)
    with pytest.raises(EncodingInputError):
        expand_parallel(bare, NIL, (), P("a.0 |[]| 0"))


# --- serialization orders ------------------------------------------------------

def test_lex_order_on_par_sides():
    order = default_order()
    assert order.leq(ParL(Act("a")), ParR(Act("b")))
    assert order.leq(ParL(Act("a")), ParL(Act("a")))
    assert not order.leq(ParR(Act("a")), ParL(Act("b")))


def test_lex_order_is_total_on_executed_addresses():
    for p in list(enumerate_processes(2, ("a", "b")))[:80]:
        order = default_order(p)
        from revexp.semantics import undo_steps
        proofs = [t for t, _ in undo_steps(p)]
        for t1 in proofs:
            for t2 in proofs:
                assert order.leq(t1, t2) or order.leq(t2, t1)


def test_history_order():
    hist = (ParR(ParR(Act("b"))), ParR(ParL(Act("a"))))
    order = HistoryOrder(hist)
    assert order.leq(hist[0], hist[1])
    assert not order.leq(hist[1], hist[0])
    with pytest.raises(OrderUndefinedError):
        order.leq(Act("c"), hist[0])
    projected = order.project((ParR,))
    assert projected.leq(ParR(Act("b")), ParL(Act("a")))
    assert not projected.leq(ParL(Act("a")), ParR(Act("b")))


def test_history_order_resolves_synchronization_components():
    from revexp.terms import Syn
    hist = (Syn(Act("a"), ParL(Act("a"))),)
    order = HistoryOrder(hist)
    assert order.leq(ParL(Act("a")), Syn(Act("a"), ParL(Act("a"))))


def test_canonical_history_is_a_valid_history():
    for p in list(enumerate_processes(3, ("a", "b")))[:300]:
        hist = canonical_history(p)
        state = to_initial(p)
        from revexp.terms import upd
        for theta in hist:
            state = upd(state, theta)
        assert state == p


def test_minimal_trace_histories_share_observations():
    p = P("a!.b.0 |[]| a!.0")
    hists = minimal_trace_histories(p)
    assert len(hists) == 2  # the two independent executed actions tie
    assert canonical_history(p) in hists


# --- correspondence ------------------------------------------------------------

@pytest.mark.parametrize("src,edges", [
    ("a.0", 1),
    ("a.0 |[]| b.0", 4),
    ("c.0 |[c]| c.0", 1),
])
def test_verify_correspondence_examples(src, edges):
    report = verify_correspondence(P(src))
    assert report.ok
    assert report.edges_checked == edges


def test_verify_correspondence_mixed_cases():
    for src in ("a.0 |[a]| (a.0 |[]| b.0)", "(a.0 + c.0) |[c]| (b.0 + c.0)",
                "a.(b.0 |[b]| b.c.0)", "a.0 |[]| b.a.a.0"):
        assert verify_correspondence(P(src)).ok


def test_verify_correspondence_requires_initial():
    with pytest.raises(NotReachableError):
        verify_correspondence(P("a!.0"))


def test_corollary_on_encodings_sample():
    # equivalence of originals versus equivalence of their encodings
    terms = [p for p in enumerate_processes(2, ("a", "b"))]
    from revexp.axioms import Theory, theory_encoding
    for i in range(0, len(terms), 7):
        for j in range(0, len(terms), 11):
            p1, p2 = terms[i], terms[j]
            got = check_brs(
                theory_encoding(p1, Theory.FR), theory_encoding(p2, Theory.FR),
                Variant.FRB,
            ).equivalent
            assert got == check(p1, p2, Variant.FRB).equivalent
