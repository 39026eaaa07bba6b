"""Single-carrier quotient spaces and the exhaustive desk experiments on them.

A superposition space is the one-factor case: words over a single carrier,
identified by {x, x'} ~ {op(x, x')}.  The experiments sweep every operation
of a small size, or probe one capped affine operation in depth, and always
carry an independent prediction column next to the observed one.
"""
from __future__ import annotations

import itertools
import multiprocessing
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (CayleyOp, Carrier, affine_capped_op, check_op_laws,
                      left_fold, op_from_index)
from .closure import (DEFAULT_UNIVERSE_BUDGET, CensusReport, EquivClasses,
                      SpanningForest, class_census, enumerate_universe,
                      equiv_search, saturate)
from .errors import InvalidCap, NotAssociative
from .tensor import TensorSpace, analyze_iota, build_tensor
from .words import (RuleSystem, TupleAlphabet, Word, compile_from_binary_ops,
                    one_step_entries)


def single_alphabet(carrier: Carrier) -> TupleAlphabet:
    return TupleAlphabet((carrier,))


def relations_from_op(op: CayleyOp) -> RuleSystem:
    """The identifications {x, x'} ~ {op(x, x')} for every defined entry."""
    return compile_from_binary_ops(single_alphabet(op.carrier), (op,))


def build_superposition(op: CayleyOp, cap_len: int, slack: int,
                        budget: int = DEFAULT_UNIVERSE_BUDGET) -> TensorSpace:
    return build_tensor(relations_from_op(op), cap_len, slack, budget)


def _iota_flags(equiv: EquivClasses, cap_len: int, n_letters: int) -> Tuple[bool, bool]:
    """(injective, surjective) of the length-1 embedding, straight off the partition.

    Length-1 words are exactly the first n_letters universe entries.
    """
    reps = {equiv.rep_index(i) for i in range(n_letters)}
    injective = len(reps) == n_letters
    surjective = equiv.n_classes(cap_len) == len(reps)
    return injective, surjective


@dataclass(frozen=True)
class OpRow:
    index: int
    associative: bool
    commutative: bool
    injective: bool
    surjective: bool

    @property
    def oracle_injective(self) -> bool:
        """Independent prediction: folding is class-invariant exactly here."""
        return self.associative and self.commutative

    @property
    def claimed_injective(self) -> bool:
        """The headline claim under test: associativity alone should suffice."""
        return self.associative

    @property
    def oracle_mismatch(self) -> bool:
        return self.injective != self.oracle_injective

    @property
    def flagged(self) -> bool:
        """Observed behaviour contradicts the headline claim."""
        return self.injective != self.claimed_injective


@dataclass(frozen=True)
class RerunRecord:
    index: int
    slack: int
    injective: bool


@dataclass(frozen=True)
class SweepReport:
    size: int
    cap_len: int
    slack: int
    n_ops: int
    n_associative: int
    n_commutative: int
    n_both: int
    n_injective: int
    n_surjective: int
    oracle_mismatches: Tuple[int, ...]
    flagged: Tuple[int, ...]
    reruns: Tuple[RerunRecord, ...]
    rows: Tuple[OpRow, ...]

    def summary(self) -> Dict[str, object]:
        """The JSON-facing view; per-op rows stay in memory only."""
        return {
            "size": self.size,
            "cap_len": self.cap_len,
            "slack": self.slack,
            "n_ops": self.n_ops,
            "n_associative": self.n_associative,
            "n_commutative": self.n_commutative,
            "n_both": self.n_both,
            "n_injective": self.n_injective,
            "n_surjective": self.n_surjective,
            "oracle_mismatches": list(self.oracle_mismatches),
            "flagged": list(self.flagged),
            "reruns": [[r.index, r.slack, r.injective] for r in self.reruns],
        }


def _sweep_chunk(args: Tuple[int, int, int, int, int, int]) -> List[Tuple[int, bool, bool, bool, bool]]:
    size, cap_len, slack, budget, start, stop = args
    carrier = Carrier.ints("S", size)
    alphabet = TupleAlphabet((carrier,))
    universe = enumerate_universe(alphabet, cap_len + slack, budget)
    out = []
    for idx in range(start, stop):
        op = op_from_index(carrier, idx)
        laws = check_op_laws(op)
        system = compile_from_binary_ops(alphabet, (op,))
        equiv = saturate(universe, system)
        inj, surj = _iota_flags(equiv, cap_len, alphabet.n_letters)
        out.append((idx, laws.associative, laws.commutative, inj, surj))
    return out


def sweep_all_ops(size: int, cap_len: int = 4, slack: int = 2, workers: int = 1,
                  budget: int = DEFAULT_UNIVERSE_BUDGET) -> SweepReport:
    """Embedding behaviour of every total operation of the given size.

    The observed injectivity column is recomputed at slack+1 and slack+2 for
    any row disagreeing with the fold oracle, to rule out window artifacts
    before reporting the disagreement.
    """
    n_ops = size ** (size * size)
    if workers < 1:
        raise ValueError("workers must be positive")
    if workers == 1:
        raw = _sweep_chunk((size, cap_len, slack, budget, 0, n_ops))
    else:
        step = max(1, -(-n_ops // (workers * 4)))
        chunks = [(size, cap_len, slack, budget, lo, min(lo + step, n_ops))
                  for lo in range(0, n_ops, step)]
        with multiprocessing.Pool(processes=workers) as pool:
            raw = [row for chunk in pool.map(_sweep_chunk, chunks) for row in chunk]
    rows = tuple(OpRow(*r) for r in raw)
    mismatches = tuple(r.index for r in rows if r.oracle_mismatch)
    reruns: List[RerunRecord] = []
    for idx in mismatches:
        for extra in (1, 2):
            redo = _sweep_chunk((size, cap_len, slack + extra, budget, idx, idx + 1))
            reruns.append(RerunRecord(idx, slack + extra, redo[0][3]))
    return SweepReport(
        size=size,
        cap_len=cap_len,
        slack=slack,
        n_ops=n_ops,
        n_associative=sum(r.associative for r in rows),
        n_commutative=sum(r.commutative for r in rows),
        n_both=sum(r.associative and r.commutative for r in rows),
        n_injective=sum(r.injective for r in rows),
        n_surjective=sum(r.surjective for r in rows),
        oracle_mismatches=mismatches,
        flagged=tuple(r.index for r in rows if r.flagged),
        reruns=tuple(reruns),
        rows=rows,
    )


@dataclass(frozen=True)
class IsoReport:
    bijective: bool
    op_preserved: bool
    flagged_noncommutative: bool
    witness: Optional[tuple]


def sweep_flag_details(report: SweepReport,
                       budget: int = DEFAULT_UNIVERSE_BUDGET) -> List[Dict[str, object]]:
    """Replayable witnesses for every flagged sweep row.

    Each flagged operation is rebuilt and its merged singletons extracted with
    their rewrite chains, so a disagreement with the headline claim can be
    checked by hand from the report alone.
    """
    carrier = Carrier.ints("S", report.size)
    details: List[Dict[str, object]] = []
    for idx in report.flagged:
        op = op_from_index(carrier, idx)
        row = report.rows[idx]
        space = build_superposition(op, report.cap_len, report.slack, budget)
        iota = analyze_iota(space)
        merged = [{"a": "".join(str(c) for c in p.letter_a),
                   "b": "".join(str(c) for c in p.letter_b),
                   "chain": [str(w) for w in p.chain]}
                  for p in iota.merged_pairs[:2]]
        details.append({
            "kind": "injectivity-claim-mismatch",
            "op_index": idx,
            "table": [list(r) for r in op.table],
            "associative": row.associative,
            "commutative": row.commutative,
            "injective_within_cap": row.injective,
            "merged": merged,
        })
    return details


def semigroup_iso_check(op: CayleyOp, cap_len: int = 4, slack: int = 2,
                        budget: int = DEFAULT_UNIVERSE_BUDGET) -> IsoReport:
    """Is the embedding an isomorphism onto the quotient, for an associative op?

    Sorted words silently commute the letters, so a non-commutative operation
    breaks bijectivity no matter how associative it is; that case comes back
    flagged rather than as an error.
    """
    laws = check_op_laws(op)
    if not laws.associative:
        raise NotAssociative(laws.witnesses["associative"])
    space = build_superposition(op, cap_len, slack, budget)
    n = op.carrier.size
    classes = [space.iota((x,)) for x in range(n)]
    bijective = len(set(classes)) == n and space.n_classes == n
    witness = None
    op_preserved = True
    for x in range(n):
        for y in range(n):
            v = op(x, y)
            if v is None:
                continue
            got = space.op(classes[x], classes[y])
            if got != classes[v]:
                op_preserved = False
                witness = (x, y, v, got)
                break
        if not op_preserved:
            break
    return IsoReport(
        bijective=bijective,
        op_preserved=op_preserved,
        flagged_noncommutative=not laws.commutative and not (bijective and op_preserved),
        witness=witness,
    )


@dataclass(frozen=True)
class AffineConfig:
    """Parameters for the capped a*x + b*y probe."""

    a: int = 2
    b: int = 2
    cap_value: int = 16
    cap_len: int = 3
    slack: int = 2
    search_budget: int = 20_000

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise InvalidCap(f"coefficients must be positive, got a={self.a} b={self.b}")
        if self.a + self.b < 3:
            raise InvalidCap("a=b=1 is plain capped addition; folding is order-blind there")
        if self.cap_value < 1:
            raise InvalidCap(f"cap_value must be positive, got {self.cap_value}")
        if self.cap_len < 1 or self.slack < 0:
            raise InvalidCap("cap_len must be >= 1 and slack >= 0")


def _right_fold(op: CayleyOp, values: Sequence[int]) -> Optional[int]:
    acc: Optional[int] = values[-1]
    for v in reversed(values[:-1]):
        if acc is None:
            return None
        acc = op(v, acc)
    return acc


@dataclass(frozen=True)
class IdentityOutcome:
    word: str
    order: Tuple[int, ...]
    direction: str  # "left" | "right"
    value: int
    proven: bool
    chain_len: int


@dataclass(frozen=True)
class ValueMerge:
    """Two distinct carrier values identified by the quotient, with the chain."""
    low: int
    high: int
    chain: Tuple[str, ...]
    validated: bool


@dataclass(frozen=True)
class CoefficientCheck:
    """Left-fold coefficients at one length against the ascending-power claim.

    The documented pattern assigns position i the coefficient a^i; the true
    left fold of ax + by with a = b repeats the top power on the first two
    positions and descends from there.  The witness evaluates both on the
    all-ones word, with the in-window verdict saying whether the quotient
    itself separates the two predicted values.
    """
    h: int
    actual: Tuple[int, ...]
    claimed: Tuple[int, ...]
    match: bool
    witness_word: str
    witness_actual: Optional[int]
    witness_claimed: Optional[int]
    separated_in_window: Optional[bool]


@dataclass(frozen=True)
class AffineReport:
    config: AffineConfig
    distinct_small_ok: bool
    n_identity_words: int
    n_instances: int
    n_proven: int
    merges: Tuple[ValueMerge, ...]
    coefficient_checks: Tuple[CoefficientCheck, ...]
    census: CensusReport
    discrepancies: Tuple[str, ...]
    outcomes: Tuple[IdentityOutcome, ...]

    def flags(self) -> List[Dict[str, object]]:
        out: List[Dict[str, object]] = []
        for c in self.coefficient_checks:
            if not c.match:
                out.append({
                    "kind": "fold-coefficient-mismatch",
                    "h": c.h,
                    "actual": list(c.actual),
                    "claimed": list(c.claimed),
                    "witness_word": c.witness_word,
                    "witness_actual": c.witness_actual,
                    "witness_claimed": c.witness_claimed,
                    "separated_in_window": c.separated_in_window,
                })
        for d in self.discrepancies:
            out.append({"kind": "identity-not-connected", "detail": d})
        for m in self.merges:
            if not m.validated:
                out.append({"kind": "merge-chain-invalid",
                            "pair": [m.low, m.high]})
        return out

    def summary(self) -> Dict[str, object]:
        return {
            "a": self.config.a, "b": self.config.b, "cap_value": self.config.cap_value,
            "cap_len": self.config.cap_len, "slack": self.config.slack,
            "distinct_small_ok": self.distinct_small_ok,
            "n_identity_words": self.n_identity_words,
            "n_instances": self.n_instances,
            "n_proven": self.n_proven,
            "merges": [
                {"low": m.low, "high": m.high, "chain": list(m.chain),
                 "validated": m.validated} for m in self.merges],
            "coefficient_checks": [
                {"h": c.h, "actual": list(c.actual), "claimed": list(c.claimed),
                 "match": c.match, "witness_word": c.witness_word,
                 "witness_actual": c.witness_actual,
                 "witness_claimed": c.witness_claimed,
                 "separated_in_window": c.separated_in_window}
                for c in self.coefficient_checks],
            "census": {
                "n_words": self.census.n_words,
                "n_classes": self.census.n_classes,
                "n_singletons": self.census.n_singletons,
                "largest_class": self.census.largest_class,
                "size_histogram": [list(p) for p in self.census.size_histogram],
            },
            "discrepancies": list(self.discrepancies),
            "flags": self.flags(),
        }


def _validated_chain(space: TensorSpace, forest: SpanningForest,
                     i: int, j: int) -> Tuple[Tuple[str, ...], bool]:
    chain = forest.chain(i, j)
    words = space.universe.words
    ok = all(words[v] in one_step_entries(words[u], space.system.rules)
             for u, v in zip(chain, chain[1:]))
    return tuple(str(space.universe.word_at(x)) for x in chain), ok


def affine_experiment(config: AffineConfig = AffineConfig()) -> AffineReport:
    """Fold identities, small-value separation, and value collisions for ax + by.

    Every canonical word of length <= cap_len is tried in every evaluation
    order whose fold stays within the cap; each in-range instance must connect
    to the length-1 word of its fold value.  A connection found by saturation
    is replayed step by step; one missed there falls back to uncapped search
    with a quadrupled budget before being reported as a discrepancy.
    """
    carrier = Carrier.ints(f"0..{config.cap_value}", config.cap_value + 1)
    op = affine_capped_op(carrier, config.a, config.b)
    space = build_superposition(op, config.cap_len, config.slack)
    system = space.system
    alphabet = space.alphabet
    universe = space.universe
    forest = SpanningForest(space.equiv)

    small = [space.iota((x,)) for x in range(config.a)]
    distinct_small_ok = len(set(small)) == len(small)

    outcomes: List[IdentityOutcome] = []
    discrepancies: List[str] = []
    words_with_instance = 0
    pair_memo: Dict[Tuple[int, int], Tuple[bool, int]] = {}
    for entries in universe.words:
        if len(entries) > config.cap_len:
            break
        seen_orders = set()
        word_hit = False
        for order in itertools.permutations(range(len(entries))):
            seq = tuple(entries[i][0] for i in order)
            if seq in seen_orders:
                continue
            seen_orders.add(seq)
            for direction, fold in (("left", left_fold), ("right", _right_fold)):
                value = fold(op, seq)
                if value is None:
                    continue
                word_hit = True
                start_idx = universe.index[entries]
                target_idx = universe.index[((value,),)]
                key = (start_idx, target_idx)
                if key not in pair_memo:
                    if space.equiv.same_indices(start_idx, target_idx):
                        chain, ok = _validated_chain(space, forest, start_idx, target_idx)
                        pair_memo[key] = (ok, len(chain))
                    else:
                        verdict = equiv_search(Word(alphabet, entries),
                                               Word.of(alphabet, (value,)), system,
                                               node_budget=config.search_budget * 4)
                        pair_memo[key] = (verdict.proven, len(verdict.chain))
                proven, chain_len = pair_memo[key]
                if not proven:
                    discrepancies.append(
                        f"{Word(alphabet, entries)} in order {seq} ({direction}) "
                        f"not connected to {value}")
                outcomes.append(IdentityOutcome(
                    word=str(Word(alphabet, entries)), order=seq, direction=direction,
                    value=value, proven=proven, chain_len=chain_len))
        if word_hit:
            words_with_instance += 1

    by_class: Dict[int, List[int]] = {}
    for v in range(config.cap_value + 1):
        by_class.setdefault(space.iota((v,)), []).append(v)
    merges: List[ValueMerge] = []
    for values in by_class.values():
        anchor = values[0]
        for other in values[1:]:
            chain, ok = _validated_chain(
                space, forest, universe.index[((anchor,),)],
                universe.index[((other,),)])
            merges.append(ValueMerge(anchor, other, chain, ok))
    merges.sort(key=lambda m: (m.low, m.high))

    checks: List[CoefficientCheck] = []
    if config.a == config.b:
        # The ascending-power claim is stated for equal coefficients only.
        for h in range(2, config.cap_len + 1):
            actual = _fold_coefficients(config.a, config.b, h)
            claimed = tuple(config.a ** i for i in range(1, h + 1))
            ones = (1,) * h
            w_actual = left_fold(op, ones)
            total = sum(claimed)
            w_claimed = total if total <= config.cap_value else None
            separated: Optional[bool] = None
            if w_actual is not None and w_claimed is not None:
                separated = space.iota((w_actual,)) != space.iota((w_claimed,))
            checks.append(CoefficientCheck(
                h=h, actual=actual, claimed=claimed,
                match=sorted(actual) == sorted(claimed),
                witness_word="γ".join("1" * h),
                witness_actual=w_actual, witness_claimed=w_claimed,
                separated_in_window=separated))

    return AffineReport(
        config=config,
        distinct_small_ok=distinct_small_ok,
        n_identity_words=words_with_instance,
        n_instances=len(outcomes),
        n_proven=sum(o.proven for o in outcomes),
        merges=tuple(merges),
        coefficient_checks=tuple(checks),
        census=class_census(space.equiv, config.cap_len),
        discrepancies=tuple(discrepancies),
        outcomes=tuple(outcomes),
    )


def _fold_coefficients(a: int, b: int, h: int) -> Tuple[int, ...]:
    """Coefficient of each position in the left fold of ax + by over h values."""
    coeffs = [a, b]
    for _ in range(h - 2):
        coeffs = [a * c for c in coeffs]
        coeffs.append(b)
    return tuple(coeffs)
