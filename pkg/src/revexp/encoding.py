"""Ready-set observations and the encoding into sequential ready-set processes.

The encoder rewrites a reachable process into a sequential term whose
prefixes carry the backward ready set of the state reached by firing them.
It threads two pieces of state:

* an *environment*: the whole root process with every executed flag that has
  not yet been serialized into the output erased.  Each emitted prefix marks
  one action occurrence executed in the environment (via ``upd``) and reads
  its ready set there, so ready sets of nested parallel contexts come out
  right;
* a *branch trace*: the actions marked along the current output branch,
  oldest first, which fixes the display order of ready sets.

Parallel composition is eliminated by :func:`expand_parallel`.  When both
operands have executed actions that did not synchronize, the expansion must
serialize them into a single chain (executed actions cannot sit on both
sides of a choice), and a total order over executed-action proofs decides
which comes first.  The order is an explicit parameter: verification walks
supply the genuine execution history, static entry points default to a
fixed lexicographic order, and the equational deciders derive a canonical
history from the term's own undo structure so that equivalent operand
arrangements serialize compatibly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    EncodingInputError,
    NotReachableError,
    OrderUndefinedError,
)
from .semantics import brs_forward_steps, forward_steps, is_reachable, undo_steps
from .syntax import render, render_proof
from .terms import (
    NIL,
    Act,
    addressed_occurrences,
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
    ProofPath,
    ProofTerm,
    Syn,
    act,
    brs,
    compose,
    is_initial,
    size,
    to_initial,
    upd,
)


@dataclass(frozen=True)
class Observation:
    """What reverse-sensitive equivalences actually compare on a transition."""

    action: str
    ready: frozenset[str]


def observe(t: ProofTerm, target: Process) -> Observation:
    """Observation of a proved transition: its action and brs of the target."""
    return Observation(act(t), brs(target))


# --- serialization orders --------------------------------------------------

class ExecutionOrder:
    """Total order over proof terms of executed actions."""

    def leq(self, t1: ProofTerm, t2: ProofTerm) -> bool:
        raise NotImplementedError

    def project(self, prefix: ProofPath) -> "ExecutionOrder":
        """The order seen from inside an operator context ``prefix``."""
        raise NotImplementedError


class LexOrder(ExecutionOrder):
    """Static order on the rendered proof terms (operator tags first)."""

    def leq(self, t1: ProofTerm, t2: ProofTerm) -> bool:
        return render_proof(t1) <= render_proof(t2)

    def project(self, prefix: ProofPath) -> "ExecutionOrder":
        # Wrapping both sides in the same context preserves the comparison.
        return self


class HistoryOrder(ExecutionOrder):
    """Order induced by an actual execution trace, oldest first.

    A proof term ranks at the instant of the history entry that executed the
    occurrences it addresses, so a component of a synchronization ranks at
    the synchronization's own step.
    """

    def __init__(self, history: tuple[ProofTerm, ...], prefix: ProofPath = ()):
        self.history = tuple(history)
        self.prefix = tuple(prefix)
        self._entries = [addressed_occurrences(t) for t in self.history]

    def _index(self, t: ProofTerm) -> int:
        full = compose(self.prefix, t)
        addrs = addressed_occurrences(full)
        for i, entry in enumerate(self._entries):
            if addrs <= entry:
                return i
        raise OrderUndefinedError(
            f"proof term {render_proof(full)} does not occur in the history"
        )

    def leq(self, t1: ProofTerm, t2: ProofTerm) -> bool:
        return self._index(t1) <= self._index(t2)

    def extended(self, t: ProofTerm) -> "HistoryOrder":
        """History with ``t`` appended as the newest executed proof."""
        return HistoryOrder(self.history + (t,), self.prefix)

    def project(self, prefix: ProofPath) -> "ExecutionOrder":
        return HistoryOrder(self.history, self.prefix + tuple(prefix))


def canonical_history(p: Process) -> tuple[ProofTerm, ...]:
    """A deterministic execution history consistent with the flags of ``p``.

    Chooses, among all ways of undoing the executed actions of ``p`` back to
    its initial version, the one whose sequence of observations (action and
    backward ready set of the state each step leaves) is lexicographically
    least, breaking exact observation ties by the rendered proofs.  The
    observation sequence read backward is precisely the executed spine the
    serialization produces, so equivalent processes pick compatible
    histories regardless of which side of a parallel composition their
    actions sit on.  Every executed occurrence of ``p`` is covered: each
    undo removes one flag (a synchronized pair removes two under one joint
    proof).
    """
    memo: dict = {}

    def best(q: Process):
        got = memo.get(q)
        if got is not None:
            return got
        if is_initial(q):
            result = ((), (), ())
        else:
            edges = undo_steps(q)
            if not edges:
                raise NotReachableError(
                    f"{render(q)} has executed actions that cannot be undone"
                )
            candidates = []
            for theta, pred in edges:
                labels, renders, hist = best(pred)
                label = (act(theta), tuple(sorted(brs(q))))
                candidates.append((
                    (label,) + labels,
                    (render_proof(theta),) + renders,
                    hist + (theta,),
                ))
            result = min(candidates)
        memo[q] = result
        return result

    _, _, hist = best(p)
    return hist


def minimal_trace_histories(p: Process, cap: int = 512) -> tuple[tuple[ProofTerm, ...], ...]:
    """All histories of ``p`` whose observation trace is the minimal one.

    When independent executed actions carry identical observations, several
    serializations share the minimal trace; deciders that depend on the full
    encoding structure canonicalize over this tie set.  Deterministic order;
    at most ``cap`` histories are returned.
    """
    label_memo: dict = {}

    def best_labels(q: Process):
        got = label_memo.get(q)
        if got is not None:
            return got
        if is_initial(q):
            result = ()
        else:
            edges = undo_steps(q)
            if not edges:
                raise NotReachableError(
                    f"{render(q)} has executed actions that cannot be undone"
                )
            obs = tuple(sorted(brs(q)))
            result = min(((act(t), obs),) + best_labels(pred) for t, pred in edges)
        label_memo[q] = result
        return result

    hist_memo: dict = {}

    def all_min(q: Process):
        got = hist_memo.get(q)
        if got is not None:
            return got
        if is_initial(q):
            result = [()]
        else:
            target = best_labels(q)
            obs = tuple(sorted(brs(q)))
            result = []
            for theta, pred in sorted(undo_steps(q), key=lambda e: render_proof(e[0])):
                if ((act(theta), obs),) + best_labels(pred) != target:
                    continue
                for hist in all_min(pred):
                    result.append(hist + (theta,))
                    if len(result) >= cap:
                        break
                if len(result) >= cap:
                    break
        hist_memo[q] = result
        return result

    return tuple(all_min(p))


def default_order(p: Process | None = None) -> ExecutionOrder:
    """Serialization order used when no genuine history is supplied."""
    return LexOrder()


def canonical_order(p: Process) -> ExecutionOrder:
    """Order from the canonical history; used by the equational deciders."""
    if is_initial(p):
        return LexOrder()
    return HistoryOrder(canonical_history(p))


# --- the encoding ----------------------------------------------------------

def _ready_of(env: Process, trace: tuple[str, ...]) -> tuple[frozenset[str], tuple[str, ...]]:
    s = brs(env)
    last = {}
    for i, a in enumerate(trace):
        last[a] = i
    order = tuple(sorted(s, key=lambda a: (last.get(a, -1), a)))
    return s, order


def _emit(action: str, executed: bool, env: Process, trace: tuple[str, ...],
          phi: ProofTerm, cont: BrsProcess) -> BrsPrefix:
    ready, order = _ready_of(env, trace)
    return BrsPrefix(action, executed, ready, cont, ready_order=order, proof=phi)


def encode(p: Process, order: ExecutionOrder | None = None) -> BrsProcess:
    """Sequential ready-set form of a reachable process."""
    if not is_reachable(p):
        raise NotReachableError(f"{render(p)} is not reachable")
    if order is None:
        order = default_order(p)
    return _encode(p, (), to_initial(p), (), order)


def _encode(p: Process, sigma: ProofPath, env: Process,
            trace: tuple[str, ...], order: ExecutionOrder) -> BrsProcess:
    if isinstance(p, Nil):
        return NIL
    if isinstance(p, Prefix):
        phi = compose(sigma, Act(p.action))
        env2 = upd(env, phi)
        trace2 = trace + (p.action,)
        cont = _encode(p.cont, sigma + (Dot,), env2, trace2, order)
        return _emit(p.action, p.executed, env2, trace2, phi, cont)
    if isinstance(p, Choice):
        return Choice(
            _encode(p.left, sigma + (PlusL,), env, trace, order),
            _encode(p.right, sigma + (PlusR,), env, trace, order),
        )
    u1 = _encode(p.left, (), to_initial(p.left), (), order.project(sigma + (ParL,)))
    u2 = _encode(p.right, (), to_initial(p.right), (), order.project(sigma + (ParR,)))
    return _expand(u1, u2, frozenset(p.sync), sigma, env, trace, order)


def _flatten(u: BrsProcess) -> list[BrsPrefix]:
    if isinstance(u, Nil):
        return []
    if isinstance(u, BrsPrefix):
        return [u]
    return _flatten(u.left) + _flatten(u.right)


def _decompose(u: BrsProcess) -> tuple[BrsPrefix | None, list[BrsPrefix]]:
    """Split into the executed head summand (if any) and the initial summands."""
    head = None
    rest = []
    for s in _flatten(u):
        if s.proof is None:
            raise EncodingInputError(
                "expansion operands must carry proof annotations; use encode()"
            )
        if s.executed or not is_initial(s.cont):
            if head is not None:
                raise EncodingInputError("operand has two non-initial summands")
            head = s
        else:
            rest.append(s)
    return head, rest


def _sum(summands: list[BrsProcess]) -> BrsProcess:
    if not summands:
        return NIL
    out = summands[0]
    for s in summands[1:]:
        out = Choice(out, s)
    return out


def expand_parallel(u1: BrsProcess, u2: BrsProcess, sync, env: Process,
                    sigma: ProofPath = (), order: ExecutionOrder | None = None) -> BrsProcess:
    """Expansion of ``u1 || u2`` into a choice of ready-set prefixes.

    ``u1`` and ``u2`` must be encodings of the two operands (their prefixes
    carry proof annotations); ``env`` is a process containing their
    composition at the operator path ``sigma``.
    """
    if order is None:
        order = default_order()
    cleared = _clear_at(env, sigma)
    return _expand(u1, u2, frozenset(sync), tuple(sigma), cleared, (), order)


def _clear_at(env: Process, sigma: ProofPath) -> Process:
    if not sigma:
        return to_initial(env)
    head, rest = sigma[0], sigma[1:]
    if head is Dot and isinstance(env, Prefix):
        return Prefix(env.action, env.executed, _clear_at(env.cont, rest))
    if head is PlusL and isinstance(env, Choice):
        return Choice(_clear_at(env.left, rest), env.right)
    if head is PlusR and isinstance(env, Choice):
        return Choice(env.left, _clear_at(env.right, rest))
    if head is ParL and isinstance(env, Par):
        return Par(env.sync, _clear_at(env.left, rest), env.right)
    if head is ParR and isinstance(env, Par):
        return Par(env.sync, env.left, _clear_at(env.right, rest))
    raise EncodingInputError("operator path does not match the environment")


def _expand(u1: BrsProcess, u2: BrsProcess, sync: frozenset[str], sigma: ProofPath,
            env: Process, trace: tuple[str, ...], order: ExecutionOrder) -> BrsProcess:
    head1, alts1 = _decompose(u1)
    head2, alts2 = _decompose(u2)
    out: list[BrsProcess] = []

    def emit(phi: ProofTerm, action: str, executed: bool,
             left: BrsProcess, right: BrsProcess) -> None:
        env2 = upd(env, phi)
        trace2 = trace + (action,)
        cont = _expand(left, right, sync, sigma, env2, trace2, order)
        out.append(_emit(action, executed, env2, trace2, phi, cont))

    def left_moves(frag2: BrsProcess) -> None:
        for s in alts1:
            if s.action not in sync:
                emit(compose(sigma, ParL(s.proof)), s.action, False, s.cont, frag2)

    def right_moves(frag1: BrsProcess) -> None:
        for s in alts2:
            if s.action not in sync:
                emit(compose(sigma, ParR(s.proof)), s.action, False, frag1, s.cont)

    def sync_moves() -> None:
        for s1 in alts1:
            if s1.action not in sync:
                continue
            for s2 in alts2:
                if s2.action == s1.action:
                    emit(compose(sigma, Syn(s1.proof, s2.proof)), s1.action, False,
                         s1.cont, s2.cont)

    if head1 is None and head2 is None:
        left_moves(u2)
        right_moves(u1)
        sync_moves()
    elif head2 is None:
        if head1.action in sync:
            raise NotReachableError(
                "executed synchronizing action without a synchronized partner"
            )
        emit(compose(sigma, ParL(head1.proof)), head1.action, True, head1.cont, u2)
        left_moves(u2)
        right_moves(to_initial(u1))
        sync_moves()
    elif head1 is None:
        if head2.action in sync:
            raise NotReachableError(
                "executed synchronizing action without a synchronized partner"
            )
        emit(compose(sigma, ParR(head2.proof)), head2.action, True, u1, head2.cont)
        right_moves(u1)
        left_moves(to_initial(u2))
        sync_moves()
    else:
        in1 = head1.action in sync
        in2 = head2.action in sync
        phi1 = compose(sigma, ParL(head1.proof))
        phi2 = compose(sigma, ParR(head2.proof))

        def replay_head2() -> None:
            # redo of the right head after rollback; a synchronizing head is
            # re-offered against same-action alternatives of the left side
            if not in2:
                emit(phi2, head2.action, False,
                     to_initial(u1), to_initial(head2.cont))
            else:
                for s in alts1:
                    if s.action == head2.action:
                        emit(compose(sigma, Syn(s.proof, head2.proof)),
                             head2.action, False, s.cont, to_initial(head2.cont))

        def replay_head1() -> None:
            if not in1:
                emit(phi1, head1.action, False,
                     to_initial(head1.cont), to_initial(u2))
            else:
                for s in alts2:
                    if s.action == head1.action:
                        emit(compose(sigma, Syn(head1.proof, s.proof)),
                             head1.action, False, to_initial(head1.cont), s.cont)

        if in1 and in2:
            if head1.action != head2.action:
                raise NotReachableError(
                    "both operands executed different synchronizing actions"
                )
            emit(compose(sigma, Syn(head1.proof, head2.proof)), head1.action, True,
                 head1.cont, head2.cont)
            replay_head1()
            replay_head2()
            for s in alts1:
                if s.action not in sync:
                    emit(compose(sigma, ParL(s.proof)), s.action, False,
                         s.cont, to_initial(u2))
            for s in alts2:
                if s.action not in sync:
                    emit(compose(sigma, ParR(s.proof)), s.action, False,
                         to_initial(u1), s.cont)
            sync_moves()
        elif not in1 and (in2 or order.leq(phi1, phi2)):
            emit(phi1, head1.action, True, head1.cont, u2)
            replay_head2()
            for s in alts1:
                if s.action not in sync:
                    emit(compose(sigma, ParL(s.proof)), s.action, False,
                         s.cont, to_initial(u2))
            for s in alts2:
                if s.action not in sync:
                    emit(compose(sigma, ParR(s.proof)), s.action, False,
                         to_initial(u1), s.cont)
            sync_moves()
        elif not in2:
            emit(phi2, head2.action, True, u1, head2.cont)
            replay_head1()
            for s in alts1:
                if s.action not in sync:
                    emit(compose(sigma, ParL(s.proof)), s.action, False,
                         s.cont, to_initial(u2))
            for s in alts2:
                if s.action not in sync:
                    emit(compose(sigma, ParR(s.proof)), s.action, False,
                         to_initial(u1), s.cont)
            sync_moves()
        else:  # pragma: no cover - guarded by the totality of orders
            raise OrderUndefinedError("cannot order the two executed actions")
    return _sum(out)


# --- correctness checks ----------------------------------------------------

@dataclass(frozen=True)
class Violation:
    process: str
    history: tuple[str, ...]
    detail: str


@dataclass
class CorrespondenceReport:
    states_checked: int = 0
    edges_checked: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_correspondence(p0: Process, depth: int | None = None,
                          max_violations: int = 10) -> CorrespondenceReport:
    """Check transition correspondence between a process and its encoding.

    Walks every forward path from the initial process ``p0`` up to ``depth``
    steps, keeping the genuine execution history as the serialization order.
    At every visited state the proved transitions and the transitions of the
    encoding must match bijectively on (action, ready set of the target) and
    the encoded targets must be the encodings under the extended history.
    """
    if not is_initial(p0):
        raise NotReachableError("correspondence walks start from an initial process")
    if depth is None:
        depth = size(p0)
    report = CorrespondenceReport()
    seen: set[tuple[str, tuple[str, ...]]] = set()
    stack: list[tuple[Process, tuple[ProofTerm, ...]]] = [(p0, ())]
    while stack:
        p, hist = stack.pop()
        key = (render(p), tuple(render_proof(t) for t in hist))
        if key in seen:
            continue
        seen.add(key)
        report.states_checked += 1
        encoded = _encode(p, (), to_initial(p), (), HistoryOrder(hist))
        steps = forward_steps(p)
        expected = []
        nexts = []
        for theta, target in steps:
            enc_target = _encode(
                target, (), to_initial(target), (), HistoryOrder(hist + (theta,))
            )
            expected.append((act(theta), brs(target), comparison_key(enc_target)))
            nexts.append((theta, target))
        actual = [
            (act(theta), frozenset(ready), comparison_key(target))
            for (theta, ready), target in brs_forward_steps(encoded)
        ]
        report.edges_checked += len(steps)
        missing = _multiset_diff(expected, actual)
        extra = _multiset_diff(actual, expected)
        for label, kind in ((missing, "unmatched proved transition"),
                            (extra, "unmatched encoded transition")):
            for action, ready, _target in label:
                report.violations.append(Violation(
                    render(p), key[1],
                    f"{kind}: {action} / {{{','.join(sorted(ready))}}}",
                ))
                if len(report.violations) >= max_violations:
                    return report
        if len(hist) < depth:
            for theta, target in nexts:
                stack.append((target, hist + (theta,)))
    return report


def _multiset_diff(xs, ys):
    remaining = list(ys)
    out = []
    for x in xs:
        if x in remaining:
            remaining.remove(x)
        else:
            out.append(x)
    return out


def comparison_key(u: BrsProcess):
    """Identity of an encoded state up to summand order, duplicates, and the
    absorption of an initial branch equal to the rollback of the executed
    one.

    Firing a prefix in place keeps rollback alternatives that a fresh
    expansion may omit when their synchronization partner is the executed
    branch itself; the two forms are equal in the forward-reverse theory, so
    state comparison works at that granularity.
    """
    if isinstance(u, Nil):
        return ("0",)
    head = None
    rest = []
    for s in _flatten(u):
        if s.executed or not is_initial(s.cont):
            head = s
        else:
            rest.append(s)
    keys = {_summand_key(s) for s in rest}
    if head is None:
        return ("+",) + tuple(sorted(keys))
    keys.discard(_summand_key(to_initial(head)))
    return ("+", _summand_key(head)) + tuple(sorted(keys))


def _summand_key(s: BrsPrefix):
    return (s.action, s.executed, tuple(sorted(s.ready)), comparison_key(s.cont))


# --- preservation helpers --------------------------------------------------

def last_executed(u: BrsProcess) -> str | None:
    """Action of the most recently executed prefix of a ready-set process."""
    head, _ = _split_plain(u)
    if head is None:
        return None
    inner = last_executed(head.cont)
    return inner if inner is not None else head.action


def _split_plain(u: BrsProcess) -> tuple[BrsPrefix | None, list[BrsPrefix]]:
    head = None
    rest = []
    for s in _flatten(u):
        if s.executed or not is_initial(s.cont):
            head = s
        else:
            rest.append(s)
    return head, rest


def brs_preserved_shape(p: Process, order: ExecutionOrder | None = None) -> bool:
    """Side condition under which the encoding preserves backward ready sets.

    Fails exactly when some parallel subterm has both operands non-initial
    with different last executed actions, neither in the synchronization set.
    """
    if order is None:
        order = default_order(p)
    if isinstance(p, (Nil,)):
        return True
    if isinstance(p, Prefix):
        return brs_preserved_shape(p.cont, order)
    if isinstance(p, Choice):
        return brs_preserved_shape(p.left, order) and brs_preserved_shape(p.right, order)
    if not (brs_preserved_shape(p.left, order) and brs_preserved_shape(p.right, order)):
        return False
    if is_initial(p.left) or is_initial(p.right):
        return True
    b1 = last_executed(_encode(p.left, (), to_initial(p.left), (), order))
    b2 = last_executed(_encode(p.right, (), to_initial(p.right), (), order))
    if b1 == b2:
        return True
    return b1 in p.sync or b2 in p.sync
