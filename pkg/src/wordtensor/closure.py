"""Bounded word universes, rewrite saturation, and unbounded pair search.

The universe holds every canonical word of length 1..max_len.  Saturation
links words one rewrite apart and returns the connected components; words
above the class-counting cap act as bridges only.  For pairs that bounded
saturation cannot settle, a bidirectional search without a length cap can
still prove equivalence (never disprove it).
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BudgetExceeded
from .words import Entries, RuleSystem, TupleAlphabet, Word, one_step_entries

DEFAULT_UNIVERSE_BUDGET = 5_000_000


def universe_size(n_letters: int, max_len: int) -> int:
    """Number of canonical words of length 1..max_len over n_letters letters."""
    return sum(math.comb(n_letters + h - 1, h) for h in range(1, max_len + 1))


@dataclass(frozen=True)
class WordUniverse:
    """All canonical words up to max_len, in (length, lex) order, with an index."""

    alphabet: TupleAlphabet
    max_len: int
    words: Tuple[Entries, ...]
    index: Dict[Entries, int]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, entries: Entries) -> bool:
        return entries in self.index

    def index_of(self, entries: Entries) -> int:
        try:
            return self.index[entries]
        except KeyError:
            raise KeyError(f"word of length {len(entries)} not in universe "
                           f"(max_len {self.max_len})") from None

    def word_at(self, i: int) -> Word:
        return Word(self.alphabet, self.words[i])


def enumerate_universe(alphabet: TupleAlphabet, max_len: int,
                       budget: int = DEFAULT_UNIVERSE_BUDGET) -> WordUniverse:
    """Materialize the universe; refuses upfront if it would exceed the budget.

    Sorted letter tuples from combinations-with-replacement are exactly the
    canonical words, already in (length, lex) order.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    needed = universe_size(alphabet.n_letters, max_len)
    if needed > budget:
        raise BudgetExceeded(needed, budget)
    letters = list(alphabet.letters())
    words: List[Entries] = []
    for h in range(1, max_len + 1):
        words.extend(itertools.combinations_with_replacement(letters, h))
    index = {w: i for i, w in enumerate(words)}
    return WordUniverse(alphabet, max_len, tuple(words), index)


class EquivClasses:
    """The partition of a universe under one-step rewrite connectivity."""

    def __init__(self, universe: WordUniverse, system: RuleSystem, root: List[int]):
        self.universe = universe
        self.system = system
        self._root = root
        members: Dict[int, List[int]] = {}
        for i, r in enumerate(root):
            members.setdefault(r, []).append(i)
        # Universe order is ordinal order, so the first member is the representative.
        self._members = {m[0]: m for m in members.values()}
        self._rep = [0] * len(root)
        for rep, mem in self._members.items():
            for i in mem:
                self._rep[i] = rep

    def reps(self) -> List[int]:
        """Representative indices, ascending (= by class ordinal)."""
        return sorted(self._members)

    def rep_index(self, i: int) -> int:
        return self._rep[i]

    def rep_of(self, entries: Entries) -> Entries:
        return self.universe.words[self._rep[self.universe.index_of(entries)]]

    def same_indices(self, i: int, j: int) -> bool:
        return self._rep[i] == self._rep[j]

    def same(self, a: Entries, b: Entries) -> bool:
        return self.same_indices(self.universe.index_of(a), self.universe.index_of(b))

    def members(self, i: int) -> Sequence[int]:
        return self._members[self._rep[i]]

    def classes(self, max_len: Optional[int] = None) -> List[List[int]]:
        """Classes with members restricted to words of length <= max_len.

        Classes whose members all exceed max_len are dropped: they only exist
        to carry identifications between shorter words.
        """
        if max_len is None or max_len >= self.universe.max_len:
            return [list(m) for _, m in sorted(self._members.items())]
        words = self.universe.words
        out = []
        for rep, mem in sorted(self._members.items()):
            kept = [i for i in mem if len(words[i]) <= max_len]
            if kept:
                out.append(kept)
        return out

    def n_classes(self, max_len: Optional[int] = None) -> int:
        return len(self.classes(max_len))


def saturate(universe: WordUniverse, system: RuleSystem) -> EquivClasses:
    """Union words one rewrite apart, for every word in the universe.

    The rewrite edge set is symmetric and fixed, so one sweep with union-find
    already yields the full congruence restricted to the universe.
    """
    if universe.alphabet != system.alphabet:
        raise ValueError("universe and rules live over different alphabets")
    n = len(universe.words)
    parent = list(range(n))
    size = [1] * n

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rules = system.rules
    cap = universe.max_len
    index = universe.index
    for i, entries in enumerate(universe.words):
        for result in one_step_entries(entries, rules, max_len=cap):
            j = index[result]
            ri, rj = find(i), find(j)
            if ri == rj:
                continue
            if size[ri] < size[rj]:
                ri, rj = rj, ri
            parent[rj] = ri
            size[ri] += size[rj]
    root = [find(i) for i in range(n)]
    return EquivClasses(universe, system, root)


class Verdict(Enum):
    PROVEN = "proven"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SearchVerdict:
    verdict: Verdict
    chain: Tuple[Word, ...]
    cost: int

    @property
    def proven(self) -> bool:
        return self.verdict is Verdict.PROVEN


def _validate_chain(chain: Sequence[Entries], rules) -> None:
    for u, v in zip(chain, chain[1:]):
        if v not in one_step_entries(u, rules):
            raise AssertionError(f"invalid rewrite step in reconstructed chain: {u} -> {v}")


def equiv_search(start: Word, target: Word, system: RuleSystem,
                 node_budget: int = 20_000) -> SearchVerdict:
    """Bidirectional breadth-first search for a rewrite chain, no length cap.

    Equivalence is semidecidable here: PROVEN comes with a replay-checked
    chain, UNKNOWN only means the budget ran out.
    """
    if start.alphabet != system.alphabet or target.alphabet != system.alphabet:
        raise ValueError("words and rules live over different alphabets")
    if start.entries == target.entries:
        return SearchVerdict(Verdict.PROVEN, (start,), 0)
    rules = system.rules
    # parent maps double as visited sets; the two roots carry None.
    parents: Tuple[Dict[Entries, Optional[Entries]], ...] = (
        {start.entries: None}, {target.entries: None})
    frontiers = (deque([start.entries]), deque([target.entries]))
    expanded = 0
    meet: Optional[Entries] = None
    while frontiers[0] and frontiers[1] and meet is None:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        mine, theirs = parents[side], parents[1 - side]
        frontier = frontiers[side]
        for _ in range(len(frontier)):
            u = frontier.popleft()
            expanded += 1
            if expanded > node_budget:
                return SearchVerdict(Verdict.UNKNOWN, (), expanded)
            for v in one_step_entries(u, rules):
                if v in mine:
                    continue
                mine[v] = u
                if v in theirs:
                    meet = v
                    break
                frontier.append(v)
            if meet is not None:
                break
    if meet is None:
        return SearchVerdict(Verdict.UNKNOWN, (), expanded)
    half: List[Entries] = []
    node: Optional[Entries] = meet
    while node is not None:
        half.append(node)
        node = parents[0][node]
    half.reverse()  # start .. meet
    node = parents[1][meet]
    while node is not None:
        half.append(node)
        node = parents[1][node]
    _validate_chain(half, rules)
    chain = tuple(Word(start.alphabet, e) for e in half)
    return SearchVerdict(Verdict.PROVEN, chain, expanded)


class SpanningForest:
    """One rewrite-edge tree per class, rooted at the representative.

    Costs a single sweep over the universe and then yields a replayable chain
    between any two same-class words without further search.
    """

    def __init__(self, classes: EquivClasses):
        self.classes = classes
        universe = classes.universe
        n = len(universe.words)
        prev = [-1] * n
        visited = [False] * n
        rules = classes.system.rules
        cap = universe.max_len
        index = universe.index
        for rep in classes.reps():
            visited[rep] = True
            queue = deque([rep])
            while queue:
                u = queue.popleft()
                for result in one_step_entries(universe.words[u], rules, max_len=cap):
                    v = index[result]
                    if not visited[v]:
                        visited[v] = True
                        prev[v] = u
                        queue.append(v)
        self._prev = prev

    def path_to_rep(self, i: int) -> List[int]:
        path = [i]
        while self._prev[path[-1]] != -1:
            path.append(self._prev[path[-1]])
        return path

    def chain(self, i: int, j: int) -> List[int]:
        """Rewrite chain i .. j through the tree, trimmed at the meeting point."""
        if not self.classes.same_indices(i, j):
            raise ValueError("words are not in the same class")
        a = self.path_to_rep(i)
        b = self.path_to_rep(j)
        # both end at the representative; strip the common tail down to one node
        while len(a) > 1 and len(b) > 1 and a[-1] == b[-1] and a[-2] == b[-2]:
            a.pop()
            b.pop()
        assert a[-1] == b[-1]
        return a + b[-2::-1]


def chain_within_universe(classes: EquivClasses, i: int, j: int) -> List[int]:
    """Indices of a rewrite chain from word i to word j inside the universe.

    Both must be in the same class; saturation merged them through in-universe
    edges, so a breadth-first pass over those edges must reconnect them.
    """
    if not classes.same_indices(i, j):
        raise ValueError("words are not in the same class")
    if i == j:
        return [i]
    universe = classes.universe
    rules = classes.system.rules
    cap = universe.max_len
    prev = {i: -1}
    queue = deque([i])
    while queue:
        u = queue.popleft()
        for result in one_step_entries(universe.words[u], rules, max_len=cap):
            v = universe.index[result]
            if v in prev:
                continue
            prev[v] = u
            if v == j:
                chain = [j]
                while chain[-1] != i:
                    chain.append(prev[chain[-1]])
                chain.reverse()
                return chain
            queue.append(v)
    raise AssertionError("same class but no in-universe chain; saturation is inconsistent")


@dataclass(frozen=True)
class CensusReport:
    n_words: int
    n_classes: int
    n_singletons: int
    largest_class: int
    # (class size, how many classes have it), ascending by size
    size_histogram: Tuple[Tuple[int, int], ...]


def class_census(classes: EquivClasses, max_len: Optional[int] = None) -> CensusReport:
    parts = classes.classes(max_len)
    sizes = sorted(len(p) for p in parts)
    hist: Dict[int, int] = {}
    for s in sizes:
        hist[s] = hist.get(s, 0) + 1
    return CensusReport(
        n_words=sum(sizes),
        n_classes=len(parts),
        n_singletons=hist.get(1, 0),
        largest_class=sizes[-1] if sizes else 0,
        size_histogram=tuple(sorted(hist.items())),
    )
