"""Quotient word spaces: classes, the length-1 embedding, induced concatenation.

A space is the saturated partition of a bounded universe with a class-counting
cap: words between the cap and the universe ceiling only carry identifications.
The induced operation concatenates representatives and is partial, since a
result can escape the window.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .algebra import Carrier, CayleyOp
from .closure import (DEFAULT_UNIVERSE_BUDGET, EquivClasses,
                      chain_within_universe, enumerate_universe, saturate)
from .errors import CongruenceViolation, RuleSetNotNested
from .words import (Entries, Letter, RuleSystem, TupleAlphabet, Word,
                    empty_system, ordinal)

# Induced-op tables are materialized up to this many classes, memoized beyond.
EAGER_TABLE_LIMIT = 256


class TensorSpace:
    """The quotient of a bounded word universe by rewrite connectivity."""

    def __init__(self, system: RuleSystem, equiv: EquivClasses, cap_len: int):
        if cap_len < 1 or cap_len > equiv.universe.max_len:
            raise ValueError("class cap must lie within the universe")
        self.system = system
        self.equiv = equiv
        self.universe = equiv.universe
        self.alphabet = system.alphabet
        self.cap_len = cap_len
        self._parts = equiv.classes(cap_len)
        self._class_id: Dict[int, int] = {}
        for cid, part in enumerate(self._parts):
            self._class_id[self.equiv.rep_index(part[0])] = cid
        self._op_memo: Dict[Tuple[int, int], Optional[int]] = {}

    @property
    def n_classes(self) -> int:
        return len(self._parts)

    @property
    def slack(self) -> int:
        return self.universe.max_len - self.cap_len

    def class_of_entries(self, entries: Entries) -> int:
        """Class id of a word; the word may use the slack zone, its class may not."""
        i = self.universe.index_of(entries)
        cid = self._class_id.get(self.equiv.rep_index(i))
        if cid is None:
            raise KeyError(f"class of {entries} has no member within the cap {self.cap_len}")
        return cid

    def class_of(self, word: Word) -> int:
        return self.class_of_entries(word.entries)

    def iota(self, letter: Letter) -> int:
        """The canonical embedding: a tuple goes to the class of its length-1 word."""
        return self.class_of_entries((tuple(letter),))

    def rep_entries(self, cid: int) -> Entries:
        return self.universe.words[self._parts[cid][0]]

    def rep_word(self, cid: int) -> Word:
        return Word(self.alphabet, self.rep_entries(cid))

    def members(self, cid: int) -> List[Entries]:
        """Members within the class cap, in (length, lex) order."""
        return [self.universe.words[i] for i in self._parts[cid]]

    def is_entangled(self, cid: int) -> bool:
        # The representative is the least-ordinal member, so a class contains
        # a length-1 word exactly when its representative is one.
        return len(self.rep_entries(cid)) > 1

    def op(self, c1: int, c2: int) -> Optional[int]:
        """Class of the concatenation of representatives; None when it escapes the window."""
        key = (c1, c2)
        got = self._op_memo.get(key, self)
        if got is not self:
            return got
        merged = tuple(sorted(self.rep_entries(c1) + self.rep_entries(c2)))
        if len(merged) > self.universe.max_len:
            result: Optional[int] = None
        else:
            i = self.universe.index_of(merged)
            result = self._class_id.get(self.equiv.rep_index(i))
        self._op_memo[key] = result
        return result

    def op_table(self) -> Tuple[Tuple[Optional[int], ...], ...]:
        n = self.n_classes
        if n > EAGER_TABLE_LIMIT:
            raise ValueError(f"{n} classes is past the eager table limit {EAGER_TABLE_LIMIT}")
        return tuple(tuple(self.op(a, b) for b in range(n)) for a in range(n))

    def as_cayley(self, name: str = "tensor-op") -> CayleyOp:
        """The induced operation as an explicit table over class representatives."""
        carrier = Carrier(name + "-carrier", tuple(str(self.rep_word(c))
                                                   for c in range(self.n_classes)))
        return CayleyOp(carrier, self.op_table(), name)

    def check_induced_op(self, raise_on_failure: bool = True,
                         pair_budget: Optional[int] = None) -> List[tuple]:
        """Cross-member stability of the induced operation.

        For every same-class pair and every joining word the two concatenations
        must land in one class whenever both stay inside the counting cap.
        """
        failures = congruence_failures(self, max_failures=1 if raise_on_failure else None,
                                       pair_budget=pair_budget)
        if failures and raise_on_failure:
            u, v, w, cu, cv = failures[0]
            raise CongruenceViolation(
                f"{u} ~ {v} but joining {w} separates them (classes {cu} vs {cv})")
        return failures


# One build verifies at most this many (u, v, w) concatenation triples.
BUILD_VERIFY_TRIPLES = 50_000


def build_tensor(system: RuleSystem, cap_len: int, slack: int,
                 budget: int = DEFAULT_UNIVERSE_BUDGET,
                 verify_triples: Optional[int] = BUILD_VERIFY_TRIPLES) -> TensorSpace:
    """Enumerate words up to cap_len+slack, saturate, and wrap as a space.

    The induced operation is spot-verified on a deterministic prefix of the
    exhaustive triple enumeration; a violation is a hard failure.  Pass
    verify_triples=None to skip (the acceptance checks run it exhaustively).
    """
    if slack < 0:
        raise ValueError("slack must be nonnegative")
    universe = enumerate_universe(system.alphabet, cap_len + slack, budget)
    space = TensorSpace(system, saturate(universe, system), cap_len)
    if verify_triples is not None:
        space.check_induced_op(raise_on_failure=True, pair_budget=verify_triples)
    return space


def multiset_quotient(alphabet: TupleAlphabet, cap_len: int,
                      budget: int = DEFAULT_UNIVERSE_BUDGET) -> TensorSpace:
    """No rules: every word is its own class, the free commutative word structure."""
    return build_tensor(empty_system(alphabet), cap_len, 0, budget)


def congruence_failures(space: TensorSpace, concat_cap: Optional[int] = None,
                        max_failures: Optional[int] = None,
                        pair_budget: Optional[int] = None) -> List[tuple]:
    """Exhaustive search for u ~ v whose concatenations with some w disagree.

    Quantifies over every same-class pair and every word w such that both
    concatenations stay within concat_cap.  The default cap is the class cap,
    not the universe ceiling: above the cap only chain-carrying words live, and
    identifications proved by chains that peak near the ceiling do not survive
    concatenation there.  A nonempty result at the class cap means the window
    is too small to present the partition as a congruence, or saturation is
    broken.  pair_budget bounds how many (u, v, w) triples are examined.
    """
    universe = space.universe
    equiv = space.equiv
    words = universe.words
    cap = space.cap_len if concat_cap is None else concat_cap
    if cap > universe.max_len:
        raise ValueError("concat cap cannot exceed the universe ceiling")
    # words are length-sorted: prefix_len[h] = how many have length <= h
    prefix_len = [0] * (universe.max_len + 1)
    for w in words:
        prefix_len[len(w)] += 1
    for h in range(1, universe.max_len + 1):
        prefix_len[h] += prefix_len[h - 1]

    failures: List[tuple] = []
    examined = 0
    for part in equiv.classes(None):
        for a in range(len(part) - 1):
            u = words[part[a]]
            for b in range(a + 1, len(part)):
                v = words[part[b]]
                room = cap - len(v)  # v is the longer one (ordinal order)
                if room < 1:
                    continue
                for wi in range(prefix_len[room]):
                    if pair_budget is not None and examined >= pair_budget:
                        return failures
                    examined += 1
                    w = words[wi]
                    cu = equiv.rep_index(universe.index[tuple(sorted(u + w))])
                    cv = equiv.rep_index(universe.index[tuple(sorted(v + w))])
                    if cu != cv:
                        failures.append((u, v, w, cu, cv))
                        if max_failures is not None and len(failures) >= max_failures:
                            return failures
    return failures


@dataclass(frozen=True)
class MergedPair:
    letter_a: Letter
    letter_b: Letter
    chain: Tuple[Word, ...]


@dataclass(frozen=True)
class IotaReport:
    injective: bool
    surjective: bool
    merged_pairs: Tuple[MergedPair, ...]
    entangled: Tuple[int, ...]  # class ids with no length-1 member
    n_letters: int
    n_classes: int


def analyze_iota(space: TensorSpace) -> IotaReport:
    """Is the length-1 embedding injective / onto the capped classes?

    Every merged letter pair comes with a replayable rewrite chain recovered
    from the saturated universe.
    """
    by_class: Dict[int, List[Letter]] = {}
    for letter in space.alphabet.letters():
        by_class.setdefault(space.iota(letter), []).append(letter)
    merged: List[MergedPair] = []
    for cid in sorted(by_class):
        group = by_class[cid]
        for other in group[1:]:
            i = space.universe.index_of((group[0],))
            j = space.universe.index_of((other,))
            chain = chain_within_universe(space.equiv, i, j)
            merged.append(MergedPair(
                group[0], other,
                tuple(space.universe.word_at(x) for x in chain)))
    entangled = tuple(cid for cid in range(space.n_classes) if space.is_entangled(cid))
    return IotaReport(
        injective=not merged,
        surjective=not entangled,
        merged_pairs=tuple(merged),
        entangled=entangled,
        n_letters=space.alphabet.n_letters,
        n_classes=space.n_classes,
    )


def entangled_classes(space: TensorSpace) -> List[int]:
    """Classes outside the image of the embedding: no length-1 member."""
    return [cid for cid in range(space.n_classes) if space.is_entangled(cid)]


@dataclass(frozen=True)
class RefinementReport:
    mapping: Tuple[int, ...]  # source class id -> target class id
    well_defined: bool
    surjective: bool
    op_preserving: bool
    op_pairs_checked: int


def refinement_map(src: TensorSpace, tgt: TensorSpace) -> RefinementReport:
    """The collapse map between quotients when the target has every source rule.

    With nested rule sets each source class sits inside one target class, so
    sending a class to the target class of its representative is well defined;
    the report re-verifies that, surjectivity, and operation preservation.
    """
    if src.alphabet != tgt.alphabet:
        raise ValueError("spaces live over different alphabets")
    if src.universe.max_len != tgt.universe.max_len or src.cap_len != tgt.cap_len:
        raise ValueError("spaces use different windows")
    if not set(src.system.rules) <= set(tgt.system.rules):
        missing = sorted(set(src.system.rules) - set(tgt.system.rules),
                         key=lambda r: (ordinal(r.left), ordinal(r.right)))
        raise RuleSetNotNested(f"{len(missing)} source rules missing from target, "
                               f"first: {missing[0]}")
    mapping = tuple(tgt.class_of_entries(src.rep_entries(c)) for c in range(src.n_classes))
    well_defined = all(
        tgt.class_of_entries(m) == mapping[cid]
        for cid in range(src.n_classes) for m in src.members(cid))
    surjective = len(set(mapping)) == tgt.n_classes
    op_preserving = True
    checked = 0
    for a in range(src.n_classes):
        for b in range(src.n_classes):
            s = src.op(a, b)
            t = tgt.op(mapping[a], mapping[b])
            if s is None or t is None:
                continue
            checked += 1
            if mapping[s] != t:
                op_preserving = False
    return RefinementReport(mapping, well_defined, surjective, op_preserving, checked)
