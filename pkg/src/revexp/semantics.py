"""Proved transition relations and finite labeled transition systems.

A single symmetric transition relation realizes the loop property: a forward
transition from ``P`` to ``P'`` is also the backward (incoming) transition of
``P'``.  Every forward step flips exactly one executed flag, so the reachable
state space of any term is finite and :func:`build_lts` terminates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import NotReachableError, StateBudgetError, UnknownStateError
from .syntax import render, render_proof
from .terms import (
    Act,
    BrsPrefix,
    BrsProcess,
    Choice,
    Dot,
    Nil,
    Par,
    ParL,
    ParR,
    PlusL,
    PlusR,
    Prefix,
    Process,
    ProofTerm,
    Syn,
    act,
    is_initial,
    is_wellformed,
    to_initial,
)

DEFAULT_STATE_CAP = 10**6


def forward_steps(p: Process) -> list[tuple[ProofTerm, Process]]:
    """All proved transitions of ``p``, in a fixed derivation order.

    An unexecuted prefix fires only over an initial continuation and becomes
    executed; an executed prefix propagates inner moves under a dot marker;
    a choice side moves only while the other side is initial; parallel sides
    move independently outside the synchronization set and jointly on equal
    actions inside it.  Order: prefix rules, then left choice, right choice,
    left par, right par, synchronizations (left-major).
    """
    if isinstance(p, Nil):
        return []
    if isinstance(p, Prefix):
        if not p.executed:
            if is_initial(p.cont):
                return [(Act(p.action), Prefix(p.action, True, p.cont))]
            return []
        return [
            (Dot(theta), Prefix(p.action, True, cont))
            for theta, cont in forward_steps(p.cont)
        ]
    if isinstance(p, Choice):
        steps: list[tuple[ProofTerm, Process]] = []
        if is_initial(p.right):
            steps.extend(
                (PlusL(theta), Choice(left, p.right))
                for theta, left in forward_steps(p.left)
            )
        if is_initial(p.left):
            steps.extend(
                (PlusR(theta), Choice(p.left, right))
                for theta, right in forward_steps(p.right)
            )
        return steps
    sync = frozenset(p.sync)
    lsteps = forward_steps(p.left)
    rsteps = forward_steps(p.right)
    steps = [
        (ParL(theta), Par(p.sync, left, p.right))
        for theta, left in lsteps
        if act(theta) not in sync
    ]
    steps.extend(
        (ParR(theta), Par(p.sync, p.left, right))
        for theta, right in rsteps
        if act(theta) not in sync
    )
    for theta1, left in lsteps:
        a = act(theta1)
        if a not in sync:
            continue
        for theta2, right in rsteps:
            if act(theta2) == a:
                steps.append((Syn(theta1, theta2), Par(p.sync, left, right)))
    return steps


def brs_forward_steps(
    u: BrsProcess,
) -> list[tuple[tuple[ProofTerm, tuple[str, ...]], BrsProcess]]:
    """Transitions of a ready-set process; labels carry the fired ready set."""
    if isinstance(u, Nil):
        return []
    if isinstance(u, BrsPrefix):
        if not u.executed:
            if is_initial(u.cont):
                fired = BrsPrefix(
                    u.action, True, u.ready, u.cont,
                    ready_order=u.ready_order, proof=u.proof,
                )
                return [((Act(u.action), u.display_ready()), fired)]
            return []
        return [
            ((Dot(theta), ready), BrsPrefix(u.action, True, u.ready, cont,
                                            ready_order=u.ready_order, proof=u.proof))
            for (theta, ready), cont in brs_forward_steps(u.cont)
        ]
    steps: list[tuple[tuple[ProofTerm, tuple[str, ...]], BrsProcess]] = []
    if is_initial(u.right):
        steps.extend(
            ((PlusL(theta), ready), Choice(left, u.right))
            for (theta, ready), left in brs_forward_steps(u.left)
        )
    if is_initial(u.left):
        steps.extend(
            ((PlusR(theta), ready), Choice(u.left, right))
            for (theta, ready), right in brs_forward_steps(u.right)
        )
    return steps


def undo_steps(p: Process) -> list[tuple[ProofTerm, Process]]:
    """The incoming transitions of ``p``, viewed backward.

    A predecessor differs from ``p`` by exactly one executed flag (two for a
    synchronization), so candidates are found by unflagging one executed
    prefix and replaying the forward step.
    """
    edges: list[tuple[ProofTerm, Process]] = []
    for cand in _unflag_one(p):
        if not is_wellformed(cand):
            continue
        for theta, target in forward_steps(cand):
            if target == p:
                edges.append((theta, cand))
    return edges


def _unflag_one(p: Process) -> list[Process]:
    out: list[Process] = []
    if isinstance(p, Prefix):
        if p.executed:
            out.append(Prefix(p.action, False, p.cont))
        out.extend(Prefix(p.action, p.executed, c) for c in _unflag_one(p.cont))
    elif isinstance(p, Choice):
        out.extend(Choice(l, p.right) for l in _unflag_one(p.left))
        out.extend(Choice(p.left, r) for r in _unflag_one(p.right))
    elif isinstance(p, Par):
        out.extend(Par(p.sync, l, p.right) for l in _unflag_one(p.left))
        out.extend(Par(p.sync, p.left, r) for r in _unflag_one(p.right))
        # a synchronized pair is undone in one joint step
        for l in _unflag_one(p.left):
            for r in _unflag_one(p.right):
                out.append(Par(p.sync, l, r))
    return out


def is_reachable(p: Process, cap: int = DEFAULT_STATE_CAP) -> bool:
    """Replay forward steps from the initial version of ``p`` until it shows up."""
    if not is_wellformed(p):
        return False
    target = render(p)
    start = to_initial(p)
    seen = {render(start)}
    frontier = [start]
    if render(start) == target:
        return True
    while frontier:
        q = frontier.pop()
        for _, nxt in forward_steps(q):
            key = render(nxt)
            if key in seen:
                continue
            if key == target:
                return True
            if len(seen) >= cap:
                raise StateBudgetError(f"state budget of {cap} states exceeded")
            seen.add(key)
            frontier.append(nxt)
    return False


@dataclass(frozen=True, slots=True)
class Transition:
    source: int
    label: ProofTerm
    target: int


@dataclass(frozen=True, slots=True)
class BrsTransition:
    source: int
    proof: ProofTerm
    ready: tuple[str, ...]
    target: int


@dataclass
class Lts:
    """Finite proved transition system with interned states.

    ``kind`` is ``"proved"`` for plain processes and ``"brs"`` for ready-set
    processes.  States are interned by their canonical text rendering, so
    construction is deterministic.
    """

    kind: str
    root: int
    terms: list
    renders: list[str]
    initial: list[bool]
    transitions: list
    outgoing: list[list[int]] = field(repr=False)
    incoming_ids: list[list[int]] = field(repr=False)
    index: dict[str, int] = field(default_factory=dict, repr=False)

    @property
    def num_states(self) -> int:
        return len(self.terms)

    def state_of(self, term) -> int:
        key = render(term)
        if key not in self.index:
            raise UnknownStateError(f"{key} is not a state of this system")
        return self.index[key]


def _build(kind: str, roots: list, step_fn, label_fn, max_states: int) -> Lts:
    terms = []
    renders = []
    index: dict[str, int] = {}
    transitions = []
    outgoing: list[list[int]] = []
    incoming_ids: list[list[int]] = []
    queue = []
    for root in roots:
        key = render(root)
        if key in index:
            continue
        index[key] = len(terms)
        queue.append(len(terms))
        terms.append(root)
        renders.append(key)
        outgoing.append([])
        incoming_ids.append([])
    qi = 0
    while qi < len(queue):
        sid = queue[qi]
        qi += 1
        for label, target in step_fn(terms[sid]):
            key = render(target)
            tid = index.get(key)
            if tid is None:
                if len(terms) >= max_states:
                    raise StateBudgetError(
                        f"state budget of {max_states} states exceeded"
                    )
                tid = len(terms)
                index[key] = tid
                terms.append(target)
                renders.append(key)
                outgoing.append([])
                incoming_ids.append([])
                queue.append(tid)
            tr_id = len(transitions)
            transitions.append(label_fn(sid, label, tid))
            outgoing[sid].append(tr_id)
            incoming_ids[tid].append(tr_id)
    initial = [is_initial(t) for t in terms]
    return Lts(kind, 0, terms, renders, initial, transitions, outgoing, incoming_ids, index)


def build_lts(root: Process, max_states: int = DEFAULT_STATE_CAP) -> Lts:
    """Close ``root`` under forward steps.  Callers normally pass an initial term."""
    if not is_wellformed(root):
        raise NotReachableError(f"{render(root)} is not well-formed")
    return _build(
        "proved", [root], forward_steps,
        lambda s, theta, t: Transition(s, theta, t), max_states,
    )


def build_brs_lts(root: BrsProcess, max_states: int = DEFAULT_STATE_CAP) -> Lts:
    if not is_wellformed(root):
        raise NotReachableError(f"{render(root)} is not well-formed")
    return _build(
        "brs", [root], brs_forward_steps,
        lambda s, label, t: BrsTransition(s, label[0], label[1], t), max_states,
    )


def build_union(roots: list, kind: str = "proved",
                max_states: int = DEFAULT_STATE_CAP) -> Lts:
    """One system closing several roots at once, with shared interning."""
    for root in roots:
        if not is_wellformed(root):
            raise NotReachableError(f"{render(root)} is not well-formed")
    if kind == "proved":
        return _build("proved", list(roots), forward_steps,
                      lambda s, theta, t: Transition(s, theta, t), max_states)
    return _build("brs", list(roots), brs_forward_steps,
                  lambda s, label, t: BrsTransition(s, label[0], label[1], t),
                  max_states)


def incoming(lts: Lts, sid: int):
    """All transitions whose target is ``sid`` (the state's backward moves)."""
    if not 0 <= sid < lts.num_states:
        raise UnknownStateError(f"no state {sid} in a {lts.num_states}-state system")
    return [lts.transitions[i] for i in lts.incoming_ids[sid]]


def merge_lts(a: Lts, b: Lts) -> tuple[Lts, int]:
    """Disjoint union of two systems of the same kind; returns the id offset of ``b``."""
    if a.kind != b.kind:
        raise ValueError("cannot merge systems of different kinds")
    off = a.num_states
    transitions = list(a.transitions)
    for t in b.transitions:
        if a.kind == "proved":
            transitions.append(Transition(t.source + off, t.label, t.target + off))
        else:
            transitions.append(BrsTransition(t.source + off, t.proof, t.ready, t.target + off))
    n_a = len(a.transitions)
    outgoing = [list(ids) for ids in a.outgoing] + [
        [i + n_a for i in ids] for ids in b.outgoing
    ]
    incoming_ids = [list(ids) for ids in a.incoming_ids] + [
        [i + n_a for i in ids] for ids in b.incoming_ids
    ]
    merged = Lts(
        a.kind, a.root, a.terms + b.terms, a.renders + b.renders,
        a.initial + b.initial, transitions, outgoing, incoming_ids, {},
    )
    return merged, off


def _edge_label(lts: Lts, t) -> str:
    if lts.kind == "proved":
        return render_proof(t.label)
    return f"{render_proof(t.proof)} / {{{','.join(t.ready)}}}"


def export(lts: Lts, fmt: str = "dot") -> str:
    """Serialize as a DOT digraph or as the JSON interchange schema."""
    if fmt == "dot":
        lines = ["digraph lts {"]
        for sid in range(lts.num_states):
            shape = ", shape=doublecircle" if sid == lts.root else ""
            lines.append(f'  n{sid} [label="{lts.renders[sid]}"{shape}];')
        for t in lts.transitions:
            src = t.source
            dst = t.target
            lines.append(f'  n{src} -> n{dst} [label="{_edge_label(lts, t)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        states = [
            {"id": sid, "term": lts.renders[sid], "initial": lts.initial[sid]}
            for sid in range(lts.num_states)
        ]
        transitions = []
        for t in lts.transitions:
            entry = {"src": t.source, "dst": t.target}
            if lts.kind == "proved":
                entry["proof"] = render_proof(t.label)
            else:
                entry["proof"] = render_proof(t.proof)
                entry["ready"] = list(t.ready)
            transitions.append(entry)
        return json.dumps(
            {"root": lts.root, "states": states, "transitions": transitions},
            indent=2,
        )
    raise ValueError(f"unknown export format {fmt!r}")
