"""Axiom systems, normal forms, and equality decision by canonicalization.

Three theories are decided here.  The forward theory works on plain
processes and eliminates parallel composition through an interleaving
expansion law; its normal form is an optional executed prefix over a sum of
unexecuted prefixes with initial normal continuations.  The reverse and
forward-reverse theories are equations between ready-set encodings; their
normal forms are, respectively, a chain of executed prefixes and an optional
executed branch next to a sum of unexecuted branches.

Equality is decided by normalizing and then canonicalizing (sorting,
deduplicating, absorbing) rather than by proof search; the normalizers
record the axiom instances they apply as a derivation trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .encoding import (
    ExecutionOrder,
    HistoryOrder,
    canonical_order,
    encode,
    minimal_trace_histories,
)
from .errors import NotNormalizedError, NotReachableError
from .semantics import is_reachable
from .syntax import render
from .terms import (
    NIL,
    BrsPrefix,
    BrsProcess,
    Choice,
    Nil,
    PAST,
    Par,
    Prefix,
    Process,
    is_initial,
    is_wellformed,
    to_initial,
)


class Theory(Enum):
    F = "f"
    R = "r"
    FR = "fr"


@dataclass(frozen=True)
class TraceStep:
    axiom: str
    path: str

    def __str__(self) -> str:
        return f"{self.axiom} @ {self.path or 'root'}"


Trace = list


def format_trace(trace: Trace) -> str:
    return "\n".join(f"{i + 1}. {step}" for i, step in enumerate(trace))


def _log(trace: Trace | None, axiom: str, path: tuple[str, ...]) -> None:
    if trace is not None:
        trace.append(TraceStep(axiom, " ".join(path)))


# --- forward normal form ---------------------------------------------------

def is_fnf(p: Process) -> bool:
    """Optional executed prefix over a sum of unexecuted prefixes whose
    continuations are initial and again in this form."""
    if isinstance(p, Prefix) and p.executed:
        return is_initial(p.cont) and _is_fnf_sum(p.cont, top=True)
    return _is_fnf_sum(p, top=True)


def _is_fnf_sum(p: Process, top: bool) -> bool:
    if isinstance(p, Nil):
        return top  # the empty sum; never a summand next to others
    if isinstance(p, Choice):
        return _is_fnf_sum(p.left, top=False) and _is_fnf_sum(p.right, top=False)
    if isinstance(p, Prefix) and not p.executed:
        return is_initial(p.cont) and _is_fnf_sum(p.cont, top=True)
    return False


def _summands(p: Process) -> list[Prefix]:
    if isinstance(p, Nil):
        return []
    if isinstance(p, Choice):
        return _summands(p.left) + _summands(p.right)
    return [p]


def _fnf_parts(p: Process) -> tuple[str | None, list[Prefix]]:
    if isinstance(p, Prefix) and p.executed:
        return p.action, _summands(p.cont)
    return None, _summands(p)


def _sum(parts: list) -> Process:
    if not parts:
        return NIL
    out = parts[0]
    for part in parts[1:]:
        out = Choice(out, part)
    return out


def expansion_law_f(p1: Process, p2: Process, sync) -> Process:
    """One expansion step of ``p1 || p2`` for operands in forward normal form.

    Produces the literal three-group sum (left moves outside the
    synchronization set, right moves, synchronizations), each group being 0
    when empty, under an executed prefix when either operand has one.
    """
    if not is_fnf(p1) or not is_fnf(p2):
        raise NotNormalizedError("expansion requires both operands in F-nf")
    sync = frozenset(sync)
    head1, sums1 = _fnf_parts(p1)
    head2, sums2 = _fnf_parts(p2)
    body1 = _sum(sums1)
    body2 = _sum(sums2)
    g1 = [
        Prefix(s.action, False, Par(tuple(sorted(sync)), s.cont, body2))
        for s in sums1 if s.action not in sync
    ]
    g2 = [
        Prefix(s.action, False, Par(tuple(sorted(sync)), body1, s.cont))
        for s in sums2 if s.action not in sync
    ]
    g3 = [
        Prefix(s1.action, False, Par(tuple(sorted(sync)), s1.cont, s2.cont))
        for s1 in sums1 if s1.action in sync
        for s2 in sums2 if s2.action == s1.action
    ]
    body = Choice(Choice(_sum(g1), _sum(g2)), _sum(g3))
    head = head1 if head1 is not None else head2
    return Prefix(head, True, body) if head is not None else body


def normalize_f(p: Process, trace: Trace | None = None) -> Process:
    """Forward normal form of a process, derivably equal to it.

    Collapses an executed prefix over a non-initial continuation, discards
    initial alternatives next to non-initial ones, eliminates 0 summands,
    and expands parallel compositions recursively.
    """
    if not is_wellformed(p):
        raise NotReachableError(f"{render(p)} is not well-formed")
    return _normalize_f(p, trace, ())


def _normalize_f(p: Process, trace: Trace | None, path: tuple[str, ...]) -> Process:
    if isinstance(p, Nil):
        return p
    if isinstance(p, Prefix):
        q = _normalize_f(p.cont, trace, path + (f"{p.action}.",))
        if not p.executed:
            return Prefix(p.action, False, q)
        if is_initial(q):
            return Prefix(p.action, True, q)
        _log(trace, "A_F,6", path)
        return q
    if isinstance(p, Choice):
        q1 = _normalize_f(p.left, trace, path + ("+l",))
        q2 = _normalize_f(p.right, trace, path + ("+r",))
        init1, init2 = is_initial(q1), is_initial(q2)
        if init1 and init2:
            if isinstance(q1, Nil):
                if not isinstance(q2, Nil):
                    _log(trace, "A_F,2", path)
                _log(trace, "A_F,3", path)
                return q2
            if isinstance(q2, Nil):
                _log(trace, "A_F,3", path)
                return q1
            return Choice(q1, q2)
        if not init1:
            _log(trace, "A_F,7", path)
            return q1
        _log(trace, "A_F,2", path)
        _log(trace, "A_F,7", path)
        return q2
    q1 = _normalize_f(p.left, trace, path + ("|l",))
    q2 = _normalize_f(p.right, trace, path + ("|r",))
    _log(trace, "A_F,8", path)
    expanded = expansion_law_f(q1, q2, p.sync)
    return _normalize_f(expanded, trace, path)


# --- reverse and forward-reverse normal forms ------------------------------

def is_rnf(u: BrsProcess) -> bool:
    """0 or a chain of executed prefixes ending in 0."""
    if isinstance(u, Nil):
        return True
    return isinstance(u, BrsPrefix) and u.executed and is_rnf(u.cont)


def _brs_summands(u: BrsProcess) -> list:
    if isinstance(u, Choice):
        return _brs_summands(u.left) + _brs_summands(u.right)
    return [u]


def _split_brs(u: BrsProcess) -> tuple[BrsPrefix | None, list[BrsPrefix], bool]:
    """(executed-branch summand, initial summands, had 0 summands inside a choice)."""
    head = None
    rest = []
    dropped = False
    leaves = _brs_summands(u)
    for leaf in leaves:
        if isinstance(leaf, Nil):
            dropped = dropped or len(leaves) > 1
            continue
        if leaf.executed or not is_initial(leaf.cont):
            if head is not None:
                raise NotNormalizedError("two non-initial summands in one choice")
            head = leaf
        else:
            rest.append(leaf)
    return head, rest, dropped


def is_frnf(u: BrsProcess) -> bool:
    """Optional executed branch, then a sum of unexecuted prefixes with
    initial continuations in the same form (up to association)."""
    if isinstance(u, Nil):
        return True
    leaves = _brs_summands(u)
    if any(isinstance(leaf, Nil) for leaf in leaves):
        return False
    heads = [i for i, leaf in enumerate(leaves) if leaf.executed]
    if any(not leaf.executed and not is_initial(leaf.cont) for leaf in leaves):
        return False
    if len(heads) > 1 or (heads and heads[0] != 0):
        return False
    for i, leaf in enumerate(leaves):
        if i in heads:
            if not is_frnf(leaf.cont):
                return False
        elif not (is_initial(leaf.cont) and is_frnf(leaf.cont)):
            return False
    return True


def _copy_prefix(s: BrsPrefix, cont: BrsProcess, executed: bool | None = None) -> BrsPrefix:
    return BrsPrefix(
        s.action, s.executed if executed is None else executed, s.ready, cont,
        ready_order=s.ready_order, proof=s.proof,
    )


def normalize_r(u: BrsProcess, trace: Trace | None = None,
                _path: tuple[str, ...] = ()) -> BrsProcess:
    """Reverse normal form of an encoding: only the executed spine survives."""
    head, rest, _ = _split_brs(u)
    if head is None:
        if not isinstance(u, Nil):
            _log(trace, "A_R,3", _path)
        return NIL
    if rest:
        _log(trace, "A_R,4", _path)
    return _copy_prefix(head, normalize_r(head.cont, trace, _path + (f"{head.action}!.",)))


def normalize_fr(u: BrsProcess, trace: Trace | None = None,
                 _path: tuple[str, ...] = ()) -> BrsProcess:
    """Forward-reverse normal form: drop 0 summands, executed branch first."""
    if isinstance(u, Nil):
        return u
    head, rest, dropped = _split_brs(u)
    if dropped:
        _log(trace, "A_FR,3", _path)
    parts: list[BrsProcess] = []
    if head is not None:
        leaves = _brs_summands(u)
        if leaves and leaves[0] is not head:
            _log(trace, "A_FR,2", _path)
        parts.append(_copy_prefix(
            head, normalize_fr(head.cont, trace, _path + (f"{head.action}!.",))
        ))
    parts.extend(
        _copy_prefix(s, normalize_fr(s.cont, trace, _path + (f"{s.action}.",)))
        for s in rest
    )
    return _sum(parts)


# --- canonical representatives --------------------------------------------

def canonical(x, theory: Theory, trace: Trace | None = None):
    """Canonical representative of a term already in the theory's normal form.

    Summands are recursively canonicalized, sorted, and deduplicated; the
    forward theory additionally forgets the identity of the leading executed
    action, and the forward-reverse theory absorbs an initial branch equal
    to the rollback of the executed one.
    """
    if theory is Theory.F:
        if not is_fnf(x):
            raise NotNormalizedError("canonical(F) requires forward normal form")
        return _canon_f(x, trace, ())
    if theory is Theory.R:
        if not is_rnf(x):
            raise NotNormalizedError("canonical(R) requires reverse normal form")
        return x
    if not is_frnf(x):
        raise NotNormalizedError("canonical(FR) requires forward-reverse normal form")
    return _canon_fr(x, trace, ())


def _canon_f(p: Process, trace: Trace | None, path: tuple[str, ...]) -> Process:
    head, sums = _fnf_parts(p)
    canon = [
        Prefix(s.action, False, _canon_f(s.cont, trace, path + (f"{s.action}.",)))
        for s in sums
    ]
    keyed = sorted({render(s): s for s in canon}.items())
    if len(keyed) < len(canon):
        _log(trace, "A_F,4", path)
    body = _sum([s for _, s in keyed])
    if head is None:
        return body
    if head != PAST:
        _log(trace, "A_F,5", path)
    return Prefix(PAST, True, body)


def _brs_key(u: BrsProcess):
    """Display-insensitive sort key (ready sets compared as sets)."""
    if isinstance(u, Nil):
        return (0,)
    if isinstance(u, BrsPrefix):
        return (1, u.action, u.executed, tuple(sorted(u.ready)), _brs_key(u.cont))
    return (2, _brs_key(u.left), _brs_key(u.right))


def structural_key(u: BrsProcess):
    """Hashable identity of a ready-set term, for grouping decider outputs."""
    return _brs_key(u)


def _canon_fr(u: BrsProcess, trace: Trace | None, path: tuple[str, ...]) -> BrsProcess:
    if isinstance(u, Nil):
        return u
    head, rest, _ = _split_brs(u)
    canon_rest = [
        _copy_prefix(s, _canon_fr(s.cont, trace, path + (f"{s.action}.",)))
        for s in rest
    ]
    parts: list[BrsProcess] = []
    if head is not None:
        canon_head = _copy_prefix(
            head, _canon_fr(head.cont, trace, path + (f"{head.action}!.",))
        )
        # the rollback loses its executed-branch-first ordering, so resort it
        rollback = _canon_fr(to_initial(canon_head), None, path)
        kept = [s for s in canon_rest if s != rollback]
        if len(kept) < len(canon_rest):
            _log(trace, "A_FR,4", path)
        canon_rest = kept
        parts.append(canon_head)
    deduped: list[BrsProcess] = []
    for s in sorted(canon_rest, key=_brs_key):
        if any(s == seen for seen in deduped):
            _log(trace, "A_FR,4", path)
        else:
            deduped.append(s)
    parts.extend(deduped)
    return _sum(parts)


# --- the deciders ----------------------------------------------------------

def theory_encoding(p: Process, theory: Theory) -> BrsProcess:
    """The encoding the reverse-sensitive deciders compare.

    The serialization order is the canonical history of the process; for the
    forward-reverse theory, when several histories share the minimal
    observation trace (independent executed actions with identical
    observations), the one whose canonical normal form is least is chosen,
    so that symmetric arrangements of the same behavior pick compatible
    serializations.
    """
    if theory is Theory.R:
        return encode(p, canonical_order(p))
    best = None
    for hist in minimal_trace_histories(p):
        u = encode(p, HistoryOrder(hist))
        key = structural_key(canonical(normalize_fr(u), Theory.FR))
        if best is None or key < best[0]:
            best = (key, u)
    return best[1]


def prove_eq(p1: Process, p2: Process, theory: Theory,
             trace: Trace | None = None,
             order: ExecutionOrder | None = None) -> bool:
    """Equality in the chosen axiom system, decided via normal forms.

    The forward theory works on the processes themselves; the reverse and
    forward-reverse theories encode both sides (under canonical histories,
    unless an explicit order is supplied) and compare the encodings' normal
    forms.
    """
    if theory is Theory.F:
        for p in (p1, p2):
            if not is_reachable(p):
                raise NotReachableError(f"{render(p)} is not reachable")
        n1 = canonical(normalize_f(p1, trace), Theory.F, trace)
        n2 = canonical(normalize_f(p2, trace), Theory.F, trace)
        return n1 == n2
    if order is not None:
        u1, u2 = encode(p1, order), encode(p2, order)
    else:
        u1, u2 = theory_encoding(p1, theory), theory_encoding(p2, theory)
    if theory is Theory.R:
        return normalize_r(u1, trace) == normalize_r(u2, trace)
    n1 = canonical(normalize_fr(u1, trace), Theory.FR, trace)
    n2 = canonical(normalize_fr(u2, trace), Theory.FR, trace)
    return n1 == n2
