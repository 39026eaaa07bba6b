"""Canonical words over a tuple alphabet, and symmetric block-rewrite rules.

A letter is one index per factor carrier.  A word is a finite multiset of
letters kept as a lexicographically sorted tuple, so reordering is absorbed
into the representation and never needs rewrite steps.  Rules replace one
sub-multiset with another anywhere in a word; the empty word is never formed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .algebra import CayleyOp, SubsetGenerator, Carrier, enumerate_ops, is_compatible

Letter = Tuple[int, ...]
Entries = Tuple[Letter, ...]


@dataclass(frozen=True)
class TupleAlphabet:
    """Letters are tuples picking one element index from each factor carrier."""

    factors: Tuple[Carrier, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("alphabet needs at least one factor")

    @property
    def n_factors(self) -> int:
        return len(self.factors)

    @property
    def n_letters(self) -> int:
        s = 1
        for c in self.factors:
            s *= c.size
        return s

    def letters(self) -> Iterable[Letter]:
        """All letters in lexicographic order."""
        return itertools.product(*(range(c.size) for c in self.factors))

    def valid_letter(self, letter: Sequence[int]) -> bool:
        return len(letter) == len(self.factors) and all(
            0 <= v < c.size for v, c in zip(letter, self.factors))

    def format_letter(self, letter: Letter) -> str:
        syms = [c.elements[v] for v, c in zip(letter, self.factors)]
        if len(syms) == 1:
            return syms[0]
        return "(" + ",".join(syms) + ")"

    def parse_letter(self, text: str) -> Letter:
        from .errors import ParseError

        body = text.strip()
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1]
        parts = [p.strip() for p in body.split(",")] if body else []
        if len(parts) != len(self.factors):
            raise ParseError(f"letter {text!r}: expected {len(self.factors)} coordinates")
        out = []
        for sym, c in zip(parts, self.factors):
            try:
                out.append(c.index(sym))
            except KeyError:
                raise ParseError(f"letter {text!r}: {sym!r} not in carrier {c.name!r}") from None
        return tuple(out)


def canonical_entries(entries: Iterable[Sequence[int]]) -> Entries:
    return tuple(sorted(tuple(e) for e in entries))


def ordinal(entries: Entries) -> Tuple[int, Entries]:
    """Sort key: shorter words first, then lexicographic."""
    return (len(entries), entries)


# Word text form: letters joined by the connective, e.g. "(1,0)γ(0,1)".
CONNECTIVE = "γ"


@dataclass(frozen=True)
class Word:
    """A nonempty canonical word.  Entries are sorted on construction."""

    alphabet: TupleAlphabet
    entries: Entries

    def __post_init__(self):
        ents = canonical_entries(self.entries)
        object.__setattr__(self, "entries", ents)
        if not ents:
            raise ValueError("the empty word is not an element")
        for e in ents:
            if not self.alphabet.valid_letter(e):
                raise ValueError(f"letter {e} not valid for this alphabet")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def ordinal(self) -> Tuple[int, Entries]:
        return ordinal(self.entries)

    def concat(self, other: "Word") -> "Word":
        """Juxtaposition followed by canonical reordering."""
        if self.alphabet != other.alphabet:
            raise ValueError("words live over different alphabets")
        return Word(self.alphabet, self.entries + other.entries)

    def __str__(self) -> str:
        return CONNECTIVE.join(self.alphabet.format_letter(e) for e in self.entries)

    @staticmethod
    def of(alphabet: TupleAlphabet, *letters: Sequence[int]) -> "Word":
        return Word(alphabet, tuple(tuple(l) for l in letters))

    @staticmethod
    def parse(alphabet: TupleAlphabet, text: str) -> "Word":
        from .errors import ParseError

        normalized = text.replace("|", CONNECTIVE)
        parts = [p for p in (s.strip() for s in normalized.split(CONNECTIVE)) if p]
        if not parts:
            raise ParseError(f"no letters in word {text!r}")
        return Word(alphabet, tuple(alphabet.parse_letter(p) for p in parts))


@dataclass(frozen=True)
class Rule:
    """An unordered pair of ground sub-multisets; rewriting swaps one for the other.

    Sides are canonical entry tuples and are stored smaller-side-first, so two
    rules are equal exactly when they allow the same replacements.
    """

    alphabet: TupleAlphabet
    left: Entries
    right: Entries
    label: str = field(default="", compare=False)

    def __post_init__(self):
        a = canonical_entries(self.left)
        b = canonical_entries(self.right)
        if ordinal(a) > ordinal(b):
            a, b = b, a
        object.__setattr__(self, "left", a)
        object.__setattr__(self, "right", b)
        if not a and not b:
            raise ValueError("rule with two empty sides")
        for side in (a, b):
            for e in side:
                if not self.alphabet.valid_letter(e):
                    raise ValueError(f"letter {e} not valid for this alphabet")

    @property
    def is_identity(self) -> bool:
        return self.left == self.right

    @property
    def has_empty_side(self) -> bool:
        return len(self.left) == 0

    @property
    def growth(self) -> int:
        """Largest length change a single application can cause."""
        return len(self.right) - len(self.left)

    def __str__(self) -> str:
        fmt = lambda side: CONNECTIVE.join(self.alphabet.format_letter(e) for e in side) or "·"
        return f"{fmt(self.left)} ~ {fmt(self.right)}"


@dataclass(frozen=True)
class Provenance:
    kind: str
    detail: str = ""
    accepted: Tuple[str, ...] = ()


@dataclass(frozen=True)
class RuleSystem:
    alphabet: TupleAlphabet
    rules: Tuple[Rule, ...]
    provenance: Provenance = Provenance("explicit")
    # Instantiation count before dedup: compilers emit one rule per defined
    # table entry and context, and distinct entries can yield the same rule.
    n_emitted: int = field(init=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "n_emitted", len(self.rules))
        ordered = tuple(sorted(set(self.rules), key=lambda r: (ordinal(r.left), ordinal(r.right))))
        object.__setattr__(self, "rules", ordered)
        for r in ordered:
            if r.alphabet != self.alphabet:
                raise ValueError("rule over a different alphabet")

    @property
    def max_growth(self) -> int:
        return max((r.growth for r in self.rules), default=0)

    @property
    def has_size_changing_rules(self) -> bool:
        return any(r.growth != 0 for r in self.rules)

    def describe(self) -> str:
        head = f"{len(self.rules)} rules ({self.provenance.kind})"
        return head + "".join(f"\n  {r}" for r in self.rules)


def empty_system(alphabet: TupleAlphabet) -> RuleSystem:
    """No rules at all: the quotient is the free commutative word structure."""
    return RuleSystem(alphabet, (), Provenance("empty"))


def _letter_with(letter: Letter, pos: int, value: int) -> Letter:
    return letter[:pos] + (value,) + letter[pos + 1:]


def _op_rules(alphabet: TupleAlphabet, pos: int, op: CayleyOp) -> List[Rule]:
    """Rules identifying a two-letter block with its combination at one coordinate.

    For every defined entry op(u, u') = v and every fixing of the remaining
    coordinates y: the pair {(u;y), (u';y)} trades with the single {(v;y)}.
    """
    if op.carrier != alphabet.factors[pos]:
        raise ValueError(f"op {op.name!r} does not act on factor {pos}")
    other = [range(c.size) for i, c in enumerate(alphabet.factors) if i != pos]
    out = []
    n = op.carrier.size
    for u in range(n):
        for u2 in range(n):
            v = op(u, u2)
            if v is None:
                continue
            for rest in itertools.product(*other):
                ctx = rest[:pos] + (None,) + rest[pos:]
                mk = lambda val: tuple(val if c is None else c for c in ctx)
                out.append(Rule(
                    alphabet,
                    (mk(u), mk(u2)),
                    (mk(v),),
                    label=f"{op.name}@{pos}",
                ))
    return out


def compile_from_binary_ops(alphabet: TupleAlphabet, ops: Sequence[CayleyOp]) -> RuleSystem:
    """One operation per factor; undefined entries contribute nothing."""
    if len(ops) != alphabet.n_factors:
        raise ValueError(f"need {alphabet.n_factors} ops, got {len(ops)}")
    rules: List[Rule] = []
    for pos, op in enumerate(ops):
        rules.extend(_op_rules(alphabet, pos, op))
    detail = ", ".join(op.name for op in ops)
    return RuleSystem(alphabet, tuple(rules), Provenance("binary-ops", detail))


def compile_from_op_sets(alphabet: TupleAlphabet,
                         op_sets: Sequence[Sequence[CayleyOp]]) -> RuleSystem:
    """A set of operations per factor; the rule set is the union over each set.

    Larger sets can only add rules, so the induced identification is monotone
    in every factor's set.
    """
    if len(op_sets) != alphabet.n_factors:
        raise ValueError(f"need {alphabet.n_factors} op sets, got {len(op_sets)}")
    rules: List[Rule] = []
    names = []
    for pos, ops in enumerate(op_sets):
        for op in ops:
            rules.extend(_op_rules(alphabet, pos, op))
        names.append("{" + ", ".join(op.name for op in ops) + "}")
    return RuleSystem(alphabet, tuple(rules), Provenance("op-sets", ", ".join(names)))


def compile_from_generators(alphabet: TupleAlphabet,
                            generators: Sequence[SubsetGenerator],
                            candidates: Optional[Sequence[Sequence[CayleyOp]]] = None,
                            ) -> RuleSystem:
    """Rules from every candidate operation compatible with its factor's generator.

    Compatibility: the closure of each subset under the operation stays inside
    the generator's value on that subset.  With no explicit candidates, all
    total operations on the factor are tried (small carriers only).
    """
    if len(generators) != alphabet.n_factors:
        raise ValueError(f"need {alphabet.n_factors} generators, got {len(generators)}")
    rules: List[Rule] = []
    accepted: List[str] = []
    for pos, psi in enumerate(generators):
        if psi.carrier != alphabet.factors[pos]:
            raise ValueError(f"generator {psi.name!r} does not act on factor {pos}")
        pool = candidates[pos] if candidates is not None else enumerate_ops(alphabet.factors[pos])
        for op in pool:
            if is_compatible(op, psi):
                rules.extend(_op_rules(alphabet, pos, op))
                accepted.append(f"{pos}:{op.name}")
    detail = ", ".join(psi.name for psi in generators)
    return RuleSystem(alphabet, tuple(rules), Provenance("generators", detail, tuple(accepted)))


def compile_explicit(alphabet: TupleAlphabet,
                     pairs: Sequence[Tuple[Sequence[Sequence[int]], Sequence[Sequence[int]]]],
                     detail: str = "") -> RuleSystem:
    """Ground rules given directly as (left entries, right entries) pairs."""
    rules = [Rule(alphabet, canonical_entries(l), canonical_entries(r), label=f"explicit{i}")
             for i, (l, r) in enumerate(pairs)]
    notes = [detail] if detail else []
    if any(r.has_empty_side for r in rules):
        notes.append("has insertion/deletion rules")
    return RuleSystem(alphabet, tuple(rules), Provenance("explicit", "; ".join(notes)))


def _subtract_block(entries: Entries, block: Entries) -> Optional[Tuple[Letter, ...]]:
    """Multiset difference entries - block, or None when block is not contained."""
    if len(block) > len(entries):
        return None
    rest = []
    i = 0
    n = len(entries)
    for b in block:
        while i < n and entries[i] < b:
            rest.append(entries[i])
            i += 1
        if i >= n or entries[i] != b:
            return None
        i += 1
    rest.extend(entries[i:])
    return tuple(rest)


def one_step_entries(entries: Entries, rules: Sequence[Rule],
                     max_len: Optional[int] = None) -> List[Entries]:
    """Canonical results of a single rule application, in both directions.

    A word maps to itself exactly under identity rules; results that would be
    empty or longer than max_len are dropped.  Each (rule, direction) yields at
    most one result because replacement is multiset arithmetic.
    """
    out = []
    seen = set()
    for rule in rules:
        directions = ((rule.left, rule.right),) if rule.is_identity \
            else ((rule.left, rule.right), (rule.right, rule.left))
        for take, give in directions:
            new_len = len(entries) - len(take) + len(give)
            if new_len == 0 or (max_len is not None and new_len > max_len):
                continue
            rest = _subtract_block(entries, take)
            if rest is None:
                continue
            result = tuple(sorted(rest + give))
            if result not in seen:
                seen.add(result)
                out.append(result)
    return out


def one_step(word: Word, system: RuleSystem, max_len: Optional[int] = None) -> List[Word]:
    """Words one rewrite away, deduplicated and ordered by (length, entries)."""
    if word.alphabet != system.alphabet:
        raise ValueError("word and rules live over different alphabets")
    results = one_step_entries(word.entries, system.rules, max_len)
    return [Word(word.alphabet, e) for e in sorted(results, key=ordinal)]
