"""Differential suites tying the deciders to each other.

The completeness results make the axiom systems and the bisimilarity
checkers interchangeable oracles: on every pair of enumerated processes the
forward theory must agree with past-sensitive forward bisimilarity, the
reverse theory with reverse bisimilarity, and the forward-reverse theory
with forward-reverse bisimilarity; and the ready-set encoding must preserve
the two reverse-sensitive equivalences.  Comparing all pairs is done by
comparing partitions: bisimilarity classes come from one refinement over
the union system of every enumerated term, decider classes from canonical
normal-form keys, and the two partitions coincide exactly when the verdicts
agree on every pair.  A pairwise spot check against the public two-process
entry points guards the partition shortcut itself.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .axioms import (
    Theory,
    canonical,
    normalize_f,
    normalize_fr,
    normalize_r,
    prove_eq,
    structural_key,
    theory_encoding,
)
from .bisim import Variant, check, check_brs, refine
from .encoding import brs_preserved_shape, encode, verify_correspondence
from .errors import NotReachableError
from .generate import enumerate_processes, seed_terms
from .semantics import DEFAULT_STATE_CAP, build_lts, build_union
from .syntax import render
from .terms import Par, Process, brs, frs, is_initial, to_initial


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "" if self.ok else f"; first: {self.failures[0]}"
        return f"{status} {self.name}: {self.checked} checks, {len(self.failures)} failures{extra}"


def class_ids(terms: list[Process], variant: Variant,
              max_states: int = DEFAULT_STATE_CAP) -> list[int]:
    """Bisimilarity class of each term, from one refinement over their union."""
    union = build_union([to_initial(t) for t in terms], "proved", max_states)
    blocks, _ = refine(union, variant)
    return [blocks[union.index[render(t)]] for t in terms]


def brs_class_ids(encodings: list, variant: Variant,
                  max_states: int = DEFAULT_STATE_CAP) -> list[int]:
    union = build_union([to_initial(u) for u in encodings], "brs", max_states)
    blocks, _ = refine(union, variant)
    return [blocks[union.index[render(u)]] for u in encodings]


def _partitions_agree(name: str, terms: list[Process],
                      left: list, right: list) -> SuiteReport:
    """Whether two labelings of ``terms`` induce the same partition."""
    report = SuiteReport(name)
    by_left: dict = {}
    by_right: dict = {}
    n = len(terms)
    report.checked = n * (n - 1) // 2
    for term, l, r in zip(terms, left, right):
        for key, value, table in ((l, r, by_left), (r, l, by_right)):
            prev = table.get(key)
            if prev is None:
                table[key] = (value, term)
            elif prev[0] != value:
                report.failures.append(
                    f"{render(term)} vs {render(prev[1])}: one side identifies "
                    f"them, the other does not"
                )
    return report


def _spot_check(report: SuiteReport, terms, class_of, pair_fn,
                samples: int, seed: int) -> None:
    """Validate the partition shortcut against the pairwise entry point."""
    rng = random.Random(seed)
    n = len(terms)
    if n < 2:
        return
    for _ in range(samples):
        i, j = rng.randrange(n), rng.randrange(n)
        expected = class_of[i] == class_of[j]
        got = pair_fn(terms[i], terms[j])
        report.checked += 1
        if got != expected:
            report.failures.append(
                f"pairwise check on {render(terms[i])} vs {render(terms[j])} "
                f"disagrees with the partition"
            )


def completeness_suite(max_size: int, alphabet,
                       spot_samples: int = 60, seed: int = 7) -> list[SuiteReport]:
    """Axiom-system verdicts against bisimilarity verdicts, all pairs."""
    terms = list(enumerate_processes(max_size, alphabet))
    r_encodings = [theory_encoding(p, Theory.R) for p in terms]
    fr_encodings = [theory_encoding(p, Theory.FR) for p in terms]
    reports = []

    pairs = [
        ("completeness F vs FB:ps", Theory.F, Variant.FBPS,
         [render(canonical(normalize_f(p), Theory.F)) for p in terms]),
        ("completeness R vs RB", Theory.R, Variant.RB,
         [structural_key(normalize_r(u)) for u in r_encodings]),
        ("completeness FR vs FRB", Theory.FR, Variant.FRB,
         [structural_key(canonical(normalize_fr(u), Theory.FR)) for u in fr_encodings]),
    ]
    for name, theory, variant, keys in pairs:
        ids = class_ids(terms, variant)
        report = _partitions_agree(name, terms, ids, keys)
        _spot_check(
            report, terms, ids,
            lambda p, q, t=theory: prove_eq(p, q, t),
            spot_samples, seed,
        )
        _spot_check(
            report, terms, ids,
            lambda p, q, v=variant: check(p, q, v).equivalent,
            spot_samples // 3, seed + 1,
        )
        reports.append(report)
    return reports


def corollary_suite(max_size: int, alphabet,
                    spot_samples: int = 60, seed: int = 11) -> list[SuiteReport]:
    """Equivalence of processes versus equivalence of their encodings."""
    terms = list(enumerate_processes(max_size, alphabet))
    reports = []
    for variant in (Variant.RB, Variant.FRB):
        theory = Theory.R if variant is Variant.RB else Theory.FR
        encodings = [theory_encoding(p, theory) for p in terms]
        ids = class_ids(terms, variant)
        enc_ids = brs_class_ids(encodings, variant)
        report = _partitions_agree(
            f"encoding preserves {variant.name}", terms, ids, enc_ids
        )
        rng = random.Random(seed)
        n = len(terms)
        for _ in range(min(spot_samples, n * n)):
            i, j = rng.randrange(n), rng.randrange(n)
            got = check_brs(encodings[i], encodings[j], variant).equivalent
            report.checked += 1
            if got != (ids[i] == ids[j]):
                report.failures.append(
                    f"check_brs on encodings of {render(terms[i])} vs "
                    f"{render(terms[j])} disagrees with the original verdict"
                )
        reports.append(report)
    return reports


def correspondence_suite(max_size: int, alphabet,
                         max_violations: int = 5) -> SuiteReport:
    """Transition correspondence on every enumerated initial process."""
    report = SuiteReport("transition correspondence")
    for seed in seed_terms(max_size, alphabet):
        result = verify_correspondence(seed)
        report.checked += result.edges_checked
        for violation in result.violations:
            report.failures.append(
                f"{violation.process} after {list(violation.history)}: {violation.detail}"
            )
            if len(report.failures) >= max_violations:
                return report
    return report


def congruence_suite(max_size: int, alphabet, samples: int = 200,
                     seed: int = 23) -> SuiteReport:
    """Parallel contexts preserve every variant's verdict on equivalent pairs."""
    report = SuiteReport("congruence for parallel composition")
    terms = list(enumerate_processes(max_size, alphabet))
    contexts = [p for p in terms if is_initial(p)]
    sync_choices = [()] + [(a,) for a in alphabet] + [tuple(sorted(alphabet))]
    rng = random.Random(seed)
    variants = list(Variant)
    pools: dict[Variant, list[list[int]]] = {}
    for variant in variants:
        ids = class_ids(terms, variant)
        classes: dict[int, list[int]] = {}
        for idx, cid in enumerate(ids):
            classes.setdefault(cid, []).append(idx)
        pools[variant] = [members for members in classes.values() if len(members) > 1]
    made = 0
    attempts = 0
    while made < samples and attempts < samples * 50:
        attempts += 1
        variant = variants[attempts % len(variants)]
        if not pools[variant]:
            continue
        members = rng.choice(pools[variant])
        i, j = rng.sample(members, 2)
        q = rng.choice(contexts)
        sync = rng.choice(sync_choices)
        if rng.random() < 0.5:
            c1, c2 = Par(sync, terms[i], q), Par(sync, terms[j], q)
        else:
            c1, c2 = Par(sync, q, terms[i]), Par(sync, q, terms[j])
        try:
            verdict = check(c1, c2, variant)
        except NotReachableError:
            continue  # composite not reachable under this synchronization set
        made += 1
        report.checked += 1
        if not verdict.equivalent:
            report.failures.append(
                f"{variant.name}: {render(terms[i])} ~ {render(terms[j])} but "
                f"{render(c1)} !~ {render(c2)}"
            )
    return report


def necessary_condition_suite(max_size: int, alphabet) -> SuiteReport:
    """No equivalent pair may differ on the variant's ready sets."""
    report = SuiteReport("ready sets are necessary conditions")
    terms = list(enumerate_processes(max_size, alphabet))
    for variant in Variant:
        ids = class_ids(terms, variant)
        classes: dict[int, tuple] = {}
        for term, cid in zip(terms, ids):
            sets = (
                frs(term) if variant.forward else None,
                brs(term) if variant.backward else None,
            )
            report.checked += 1
            prev = classes.get(cid)
            if prev is None:
                classes[cid] = (sets, term)
            elif prev[0] != sets:
                report.failures.append(
                    f"{variant.name}: {render(term)} and {render(prev[1])} are "
                    f"equivalent but their ready sets differ"
                )
    return report


def preservation_suite(max_size: int, alphabet) -> SuiteReport:
    """Initiality always preserved; ready sets preserved under the side condition."""
    report = SuiteReport("encoding preserves initiality and ready sets")
    for p in enumerate_processes(max_size, alphabet):
        u = encode(p)
        report.checked += 1
        if is_initial(u) != is_initial(p):
            report.failures.append(f"initiality not preserved on {render(p)}")
            continue
        if brs_preserved_shape(p) and brs(u) != brs(p):
            report.failures.append(f"backward ready set not preserved on {render(p)}")
    return report


def loop_and_tree_suite(max_size: int, alphabet) -> SuiteReport:
    """Non-initial states have incoming transitions; sequential systems are trees."""
    report = SuiteReport("loop and tree properties")
    for seed in seed_terms(max_size, alphabet):
        lts = build_lts(seed)
        sequential = not any(isinstance(sub, Par) for sub in _subterms(seed))
        for sid in range(lts.num_states):
            report.checked += 1
            has_incoming = bool(lts.incoming_ids[sid])
            if lts.initial[sid] == has_incoming:
                report.failures.append(
                    f"{lts.renders[sid]}: initiality and incoming transitions disagree"
                )
            elif sequential and not lts.initial[sid] and len(lts.incoming_ids[sid]) != 1:
                report.failures.append(
                    f"{lts.renders[sid]}: sequential state with several incoming transitions"
                )
        if sequential and len(lts.transitions) != lts.num_states - 1:
            report.failures.append(f"{render(seed)}: sequential system is not a tree")
    return report


def _subterms(p):
    yield p
    for attr in ("cont", "left", "right"):
        child = getattr(p, attr, None)
        if child is not None:
            yield from _subterms(child)


def run_selftest(max_size: int, alphabet) -> list[SuiteReport]:
    reports = []
    reports.extend(completeness_suite(max_size, alphabet))
    reports.extend(corollary_suite(max_size, alphabet))
    reports.append(correspondence_suite(min(max_size, 3), alphabet))
    reports.append(necessary_condition_suite(max_size, alphabet))
    reports.append(preservation_suite(max_size, alphabet))
    reports.append(loop_and_tree_suite(max_size, alphabet))
    return reports
