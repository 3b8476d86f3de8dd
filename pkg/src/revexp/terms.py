"""Process and proof-term syntax with the structural predicates and measures.

Two term families live here.  Plain processes are built from the terminated
process, action prefixes (optionally flagged as already executed), binary
choice, and CSP-style parallel composition with a synchronization set.
Ready-set processes are the sequential target of the encoding: the parallel
operator is gone and every prefix additionally carries the set of actions
that label the incoming transitions of the state the prefix leads to.

``Nil`` and ``Choice`` are shared by both families; a tree is a plain process
when its prefixes are ``Prefix`` nodes and a ready-set process when they are
``BrsPrefix`` nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import ActUndefinedError

TAU = "tau"

# The reserved placeholder used when the identity of a past action is
# irrelevant; it is not parsable from user input.
PAST = "#past"


@dataclass(frozen=True, slots=True)
class Nil:
    pass


@dataclass(frozen=True, slots=True)
class Prefix:
    action: str
    executed: bool
    cont: "Process"


@dataclass(frozen=True, slots=True)
class Choice:
    left: "ProcessLike"
    right: "ProcessLike"


@dataclass(frozen=True, slots=True)
class Par:
    sync: tuple[str, ...]
    left: "Process"
    right: "Process"

    def __post_init__(self):
        if TAU in self.sync:
            raise ValueError("tau cannot belong to a synchronization set")
        canon = tuple(sorted(set(self.sync)))
        if canon != self.sync:
            object.__setattr__(self, "sync", canon)


@dataclass(frozen=True, slots=True)
class BrsPrefix:
    """Prefix of a ready-set process: action, executed flag, ready set.

    ``ready_order`` is a display hint (the order in which the actions of the
    ready set were executed, oldest first); it does not take part in equality.
    ``proof`` records which action occurrence of the source process this
    prefix stands for; it is attached by the encoder and also excluded from
    equality.
    """

    action: str
    executed: bool
    ready: frozenset[str]
    cont: "BrsProcess"
    ready_order: tuple[str, ...] = field(default=(), compare=False, repr=False)
    proof: "ProofTerm | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.ready_order:
            object.__setattr__(self, "ready_order", tuple(sorted(self.ready)))

    def display_ready(self) -> tuple[str, ...]:
        return self.ready_order


Process = Union[Nil, Prefix, Choice, Par]
BrsProcess = Union[Nil, BrsPrefix, Choice]
ProcessLike = Union[Process, BrsProcess]

NIL = Nil()


# --- proof terms -----------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Act:
    name: str


@dataclass(frozen=True, slots=True)
class Dot:
    inner: "ProofTerm"


@dataclass(frozen=True, slots=True)
class PlusL:
    inner: "ProofTerm"


@dataclass(frozen=True, slots=True)
class PlusR:
    inner: "ProofTerm"


@dataclass(frozen=True, slots=True)
class ParL:
    inner: "ProofTerm"


@dataclass(frozen=True, slots=True)
class ParR:
    inner: "ProofTerm"


@dataclass(frozen=True, slots=True)
class Syn:
    left: "ProofTerm"
    right: "ProofTerm"


ProofTerm = Union[Act, Dot, PlusL, PlusR, ParL, ParR, Syn]

# Markers usable in operator paths (sequences of unary proof-term wrappers).
Marker = type
ProofPath = tuple[Marker, ...]


def compose(path: ProofPath, t: ProofTerm) -> ProofTerm:
    """Wrap ``t`` in the markers of ``path``, outermost marker first."""
    for m in reversed(path):
        t = m(t)
    return t


def act(t: ProofTerm) -> str:
    """Extract the action of a proof term.

    Defined on synchronization pairs only when both components carry the
    same action; otherwise raises :class:`ActUndefinedError`.
    """
    if isinstance(t, Act):
        return t.name
    if isinstance(t, (Dot, PlusL, PlusR, ParL, ParR)):
        return act(t.inner)
    a1 = act(t.left)
    a2 = act(t.right)
    if a1 != a2:
        raise ActUndefinedError(f"synchronization pairs actions {a1!r} and {a2!r}")
    return a1


# --- predicates ------------------------------------------------------------

def is_initial(p: ProcessLike) -> bool:
    """True when no prefix of ``p`` is flagged as executed."""
    if isinstance(p, Nil):
        return True
    if isinstance(p, (Prefix, BrsPrefix)):
        return not p.executed and is_initial(p.cont)
    if isinstance(p, Choice):
        return is_initial(p.left) and is_initial(p.right)
    return is_initial(p.left) and is_initial(p.right)


def is_wellformed(p: ProcessLike) -> bool:
    """The inductive well-formedness predicate.

    An unexecuted prefix must be followed by an initial process, an executed
    prefix by a well-formed one, and at most one side of a choice may be
    non-initial.  Parallel composition requires both sides well-formed.
    """
    if isinstance(p, Nil):
        return True
    if isinstance(p, (Prefix, BrsPrefix)):
        if p.executed:
            return is_wellformed(p.cont)
        return is_initial(p.cont)
    if isinstance(p, Choice):
        return (is_wellformed(p.left) and is_initial(p.right)) or (
            is_initial(p.left) and is_wellformed(p.right)
        )
    return is_wellformed(p.left) and is_wellformed(p.right)


def to_initial(p: ProcessLike) -> ProcessLike:
    """Erase every executed flag of ``p``."""
    if isinstance(p, Nil):
        return p
    if isinstance(p, Prefix):
        return Prefix(p.action, False, to_initial(p.cont))
    if isinstance(p, BrsPrefix):
        return BrsPrefix(
            p.action, False, p.ready, to_initial(p.cont),
            ready_order=p.ready_order, proof=p.proof,
        )
    if isinstance(p, Choice):
        return Choice(to_initial(p.left), to_initial(p.right))
    return Par(p.sync, to_initial(p.left), to_initial(p.right))


# --- ready sets ------------------------------------------------------------

def frs(p: ProcessLike) -> frozenset[str]:
    """Forward ready set: the actions ``p`` can immediately execute."""
    if isinstance(p, Nil):
        return frozenset()
    if isinstance(p, (Prefix, BrsPrefix)):
        if p.executed:
            return frs(p.cont)
        return frozenset((p.action,))
    if isinstance(p, Choice):
        li, ri = is_initial(p.left), is_initial(p.right)
        if li and ri:
            return frs(p.left) | frs(p.right)
        return frs(p.left) if not li else frs(p.right)
    bar = lambda s: s - frozenset(p.sync)
    fl, fr_ = frs(p.left), frs(p.right)
    return bar(fl) | bar(fr_) | (fl & fr_ & frozenset(p.sync))


def brs(p: ProcessLike) -> frozenset[str]:
    """Backward ready set: the actions whose execution led to ``p``."""
    if isinstance(p, Nil):
        return frozenset()
    if isinstance(p, (Prefix, BrsPrefix)):
        if not p.executed:
            return frozenset()
        if is_initial(p.cont):
            return frozenset((p.action,))
        return brs(p.cont)
    if isinstance(p, Choice):
        li, ri = is_initial(p.left), is_initial(p.right)
        if li and ri:
            return frozenset()
        return brs(p.left) if not li else brs(p.right)
    bar = lambda s: s - frozenset(p.sync)
    bl, br_ = brs(p.left), brs(p.right)
    return bar(bl) | bar(br_) | (bl & br_ & frozenset(p.sync))


# --- measures and updates --------------------------------------------------

def size(p: Process) -> int:
    """Upper bound on the length of any forward trace from ``p``.

    Prefixes count one each, a choice contributes the larger branch, and a
    parallel composition the sum of its sides.
    """
    if isinstance(p, Nil):
        return 0
    if isinstance(p, (Prefix, BrsPrefix)):
        return 1 + size(p.cont)
    if isinstance(p, Choice):
        return max(size(p.left), size(p.right))
    return size(p.left) + size(p.right)


def height(p: ProcessLike) -> int:
    if isinstance(p, Nil):
        return 0
    if isinstance(p, (Prefix, BrsPrefix)):
        return 1 + height(p.cont)
    return 1 + max(height(p.left), height(p.right))


def upd(e: Process, t: ProofTerm) -> Process:
    """Mark the single action occurrence addressed by ``t`` as executed.

    Total: whenever the proof term does not match the structure of ``e`` the
    corresponding subterm is returned unchanged.  A synchronization pair
    updates both sides of a parallel composition.
    """
    if isinstance(e, Nil):
        return e
    if isinstance(e, Prefix):
        if not e.executed:
            if isinstance(t, Act) and t.name == e.action:
                return Prefix(e.action, True, e.cont)
            return e
        if isinstance(t, Dot):
            return Prefix(e.action, True, upd(e.cont, t.inner))
        return e
    if isinstance(e, Choice):
        if isinstance(t, PlusL):
            return Choice(upd(e.left, t.inner), e.right)
        if isinstance(t, PlusR):
            return Choice(e.left, upd(e.right, t.inner))
        return e
    if isinstance(t, ParL):
        return Par(e.sync, upd(e.left, t.inner), e.right)
    if isinstance(t, ParR):
        return Par(e.sync, e.left, upd(e.right, t.inner))
    if isinstance(t, Syn):
        return Par(e.sync, upd(e.left, t.left), upd(e.right, t.right))
    return e


def addressed_occurrences(t: ProofTerm) -> frozenset[tuple[str, ...]]:
    """Syntax paths of the action occurrences a proof term addresses.

    Mirrors the navigation of ``upd``: one path for a plain action, both
    sides for a synchronization pair.
    """
    if isinstance(t, Act):
        return frozenset({()})
    if isinstance(t, Dot):
        return frozenset((".",) + p for p in addressed_occurrences(t.inner))
    if isinstance(t, PlusL):
        return frozenset(("+l",) + p for p in addressed_occurrences(t.inner))
    if isinstance(t, PlusR):
        return frozenset(("+r",) + p for p in addressed_occurrences(t.inner))
    if isinstance(t, ParL):
        return frozenset(("|l",) + p for p in addressed_occurrences(t.inner))
    if isinstance(t, ParR):
        return frozenset(("|r",) + p for p in addressed_occurrences(t.inner))
    return frozenset(("|l",) + p for p in addressed_occurrences(t.left)) | frozenset(
        ("|r",) + p for p in addressed_occurrences(t.right)
    )


def actions_of(p: ProcessLike) -> frozenset[str]:
    """All action names occurring in ``p`` (prefixes and sync sets)."""
    if isinstance(p, Nil):
        return frozenset()
    if isinstance(p, (Prefix, BrsPrefix)):
        return frozenset((p.action,)) | actions_of(p.cont)
    if isinstance(p, Choice):
        return actions_of(p.left) | actions_of(p.right)
    return frozenset(p.sync) | actions_of(p.left) | actions_of(p.right)
