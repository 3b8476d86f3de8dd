"""Decision procedures for the four equivalences, with witnesses.

All four are decided by partition refinement over the disjoint union of the
two transition systems, which is sound because every incoming transition of
a reachable state originates from a reachable state.  Observations compare
only the action carried by a proof term; for ready-set systems they compare
the pair of action and ready set.  Signatures are deduplicated per state:
matching in the transfer clauses is existential per observation, so the
multiplicity of equally labeled transitions must not split blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import NotReachableError
from .semantics import (
    DEFAULT_STATE_CAP,
    Lts,
    build_brs_lts,
    build_lts,
    merge_lts,
)
from .syntax import render
from .terms import (
    BrsProcess,
    Process,
    act,
    brs,
    frs,
    is_wellformed,
    to_initial,
)


class Variant(Enum):
    FB = "fb"
    FBPS = "fbps"
    RB = "rb"
    FRB = "frb"

    @property
    def forward(self) -> bool:
        return self in (Variant.FB, Variant.FBPS, Variant.FRB)

    @property
    def backward(self) -> bool:
        return self in (Variant.RB, Variant.FRB)

    @property
    def past_sensitive(self) -> bool:
        return self is Variant.FBPS


@dataclass(frozen=True)
class Counterexample:
    left: str
    right: str
    direction: str  # "forward" | "backward" | "initiality"
    observation: str
    detail: str


@dataclass(frozen=True)
class Verdict:
    equivalent: bool
    variant: Variant
    witness: tuple[tuple[str, ...], ...] | None = None
    counterexample: Counterexample | None = None


def _observation(lts: Lts, t):
    if lts.kind == "proved":
        return act(t.label)
    return (act(t.proof), tuple(sorted(set(t.ready))))


def _signature(lts: Lts, blocks: list[int], sid: int, variant: Variant):
    parts = []
    if variant.forward:
        parts.append(tuple(sorted({
            (_observation(lts, lts.transitions[i]), blocks[lts.transitions[i].target])
            for i in lts.outgoing[sid]
        })))
    if variant.backward:
        parts.append(tuple(sorted({
            (_observation(lts, lts.transitions[i]), blocks[lts.transitions[i].source])
            for i in lts.incoming_ids[sid]
        })))
    return tuple(parts)


def refine(lts: Lts, variant: Variant, watch: tuple[int, int] | None = None):
    """Coarsest stable partition; optionally reports the step splitting ``watch``.

    Returns ``(blocks, split)`` where ``blocks`` maps state id to block id and
    ``split`` is ``None`` or ``(sig_left, sig_right)`` captured at the first
    refinement round on which the watched pair lands in different blocks.
    """
    n = lts.num_states
    if variant.past_sensitive:
        blocks = [1 if lts.initial[s] else 0 for s in range(n)]
    else:
        blocks = [0] * n
    split = None
    if watch is not None and blocks[watch[0]] != blocks[watch[1]]:
        split = ((), ())  # separated by the initiality seed itself
    while True:
        sigs = [(blocks[s], _signature(lts, blocks, s, variant)) for s in range(n)]
        ids: dict = {}
        new_blocks = []
        for sig in sigs:
            bid = ids.get(sig)
            if bid is None:
                bid = len(ids)
                ids[sig] = bid
            new_blocks.append(bid)
        if (
            watch is not None
            and split is None
            and new_blocks[watch[0]] != new_blocks[watch[1]]
        ):
            split = (sigs[watch[0]][1], sigs[watch[1]][1])
        if len(ids) == len(set(blocks)):
            return blocks, split
        blocks = new_blocks


def largest_bisimulation(lts: Lts, variant: Variant) -> list[list[int]]:
    """Blocks of the coarsest partition of ``lts`` stable for ``variant``."""
    blocks, _ = refine(lts, variant)
    grouped: dict[int, list[int]] = {}
    for sid, bid in enumerate(blocks):
        grouped.setdefault(bid, []).append(sid)
    return [grouped[b] for b in sorted(grouped)]


def _describe_split(lts: Lts, variant: Variant, s1: int, s2: int, split) -> Counterexample:
    left, right = lts.renders[s1], lts.renders[s2]
    if split == ((), ()):
        return Counterexample(
            left, right, "initiality",
            "", "one process is initial and the other is not",
        )
    sig1, sig2 = split
    directions = (["forward"] if variant.forward else []) + (
        ["backward"] if variant.backward else []
    )
    for k, direction in enumerate(directions):
        part1, part2 = set(sig1[k]), set(sig2[k])
        if part1 == part2:
            continue
        diff = part1 ^ part2
        obs, _ = min(diff, key=repr)
        obs_text = obs if isinstance(obs, str) else f"{obs[0]} / {{{','.join(obs[1])}}}"
        only_left = (obs in {o for o, _ in part1}) != (obs in {o for o, _ in part2})
        if only_left:
            detail = f"a {direction} transition labeled {obs_text!r} exists on one side only"
        else:
            detail = (
                f"{direction} transitions labeled {obs_text!r} reach inequivalent states"
            )
        return Counterexample(left, right, direction, obs_text, detail)
    return Counterexample(left, right, directions[-1], "", "signatures differ")


def _witness(lts: Lts, blocks: list[int]) -> tuple[tuple[str, ...], ...]:
    grouped: dict[int, list[str]] = {}
    for sid, bid in enumerate(blocks):
        grouped.setdefault(bid, []).append(lts.renders[sid])
    return tuple(tuple(sorted(set(members))) for _, members in sorted(grouped.items()))


def _check_on(lts1: Lts, lts2: Lts, s1_term, s2_term, variant: Variant) -> Verdict:
    merged, off = merge_lts(lts1, lts2)
    s1 = lts1.state_of(s1_term)
    s2 = lts2.state_of(s2_term) + off
    blocks, split = refine(merged, variant, watch=(s1, s2))
    if blocks[s1] == blocks[s2]:
        return Verdict(True, variant, witness=_witness(merged, blocks))
    return Verdict(
        False, variant,
        counterexample=_describe_split(merged, variant, s1, s2, split),
    )


def check(p1: Process, p2: Process, variant: Variant,
          max_states: int = DEFAULT_STATE_CAP) -> Verdict:
    """Decide whether two reachable processes are equivalent under ``variant``."""
    lts1 = build_lts(to_initial(p1), max_states)
    lts2 = build_lts(to_initial(p2), max_states)
    for p, lts in ((p1, lts1), (p2, lts2)):
        if render(p) not in lts.index:
            raise NotReachableError(f"{render(p)} is not reachable")
    return _check_on(lts1, lts2, p1, p2, variant)


def check_brs(u1: BrsProcess, u2: BrsProcess, variant: Variant,
              max_states: int = DEFAULT_STATE_CAP) -> Verdict:
    """Decide reverse or forward-reverse equivalence over ready-set processes."""
    if not variant.backward:
        raise ValueError("ready-set systems are compared under RB or FRB only")
    lts1 = build_brs_lts(to_initial(u1), max_states)
    lts2 = build_brs_lts(to_initial(u2), max_states)
    for u, lts in ((u1, lts1), (u2, lts2)):
        if render(u) not in lts.index:
            raise NotReachableError(f"{render(u)} is not reachable")
    return _check_on(lts1, lts2, u1, u2, variant)


def necessary_check(p1: Process, p2: Process, variant: Variant) -> bool:
    """Fast refutation filter: equality of the variant's ready sets."""
    if not (is_wellformed(p1) and is_wellformed(p2)):
        raise NotReachableError("necessary_check requires well-formed processes")
    ok = True
    if variant.forward:
        ok = ok and frs(p1) == frs(p2)
    if variant.backward:
        ok = ok and brs(p1) == brs(p2)
    return ok


def verify_partition(lts: Lts, blocks: list[int], variant: Variant) -> str | None:
    """Replay the transfer clauses over a partition; ``None`` when it holds.

    Used to machine-check witnesses: for every ordered pair of states in a
    block, each (observation, target block) of one must occur on the other,
    in every direction the variant observes.
    """
    members: dict[int, list[int]] = {}
    for sid, bid in enumerate(blocks):
        members.setdefault(bid, []).append(sid)
    for bid, states in members.items():
        sigs = [_signature(lts, blocks, s, variant) for s in states]
        for s, sig in zip(states, sigs):
            if sig != sigs[0]:
                return (
                    f"states {lts.renders[states[0]]} and {lts.renders[s]} share a "
                    f"block but have different signatures"
                )
        if variant.past_sensitive:
            flags = {lts.initial[s] for s in states}
            if len(flags) > 1:
                return f"block {bid} mixes initial and non-initial states"
    return None
