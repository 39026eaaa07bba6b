"""Finite carriers, Cayley-table operations, power-set generators.

Operations are explicit (possibly partial) tables over a named finite set.
Generators are extensive monotone self-maps of the power set; the one derived
from an operation sends a subset to its closure under that operation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import CarrierTooLarge

# Exhaustive op enumeration is capped here: 4**16 tables is not desk scale.
ENUMERATION_LIMIT = 3

# Generators keep a full 2**size table up to this carrier size.
GENERATOR_TABLE_LIMIT = 16


@dataclass(frozen=True)
class Carrier:
    """A named finite set; element order fixes the lexicographic order used downstream."""

    name: str
    elements: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise ValueError("carrier must have at least one element")
        if len(set(self.elements)) != len(self.elements):
            raise ValueError(f"carrier {self.name!r} has duplicate elements")

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, symbol: str) -> int:
        try:
            return self.elements.index(symbol)
        except ValueError:
            raise KeyError(f"{symbol!r} not in carrier {self.name!r}") from None

    @staticmethod
    def ints(name: str, n: int) -> "Carrier":
        """Carrier {0, 1, .., n-1} with decimal symbols."""
        return Carrier(name, tuple(str(i) for i in range(n)))


@dataclass(frozen=True)
class CayleyOp:
    """A binary operation as an explicit size x size table; None marks an undefined entry."""

    carrier: Carrier
    table: Tuple[Tuple[Optional[int], ...], ...]
    name: str = "op"

    def __post_init__(self):
        n = self.carrier.size
        rows = tuple(tuple(row) for row in self.table)
        object.__setattr__(self, "table", rows)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError(f"op {self.name!r}: table must be {n}x{n}")
        for row in rows:
            for v in row:
                if v is not None and not (0 <= v < n):
                    raise ValueError(f"op {self.name!r}: entry {v} out of range")

    def __call__(self, i: int, j: int) -> Optional[int]:
        return self.table[i][j]

    @property
    def total(self) -> bool:
        return all(v is not None for row in self.table for v in row)

    @staticmethod
    def from_function(carrier: Carrier, fn: Callable[[int, int], Optional[int]],
                      name: str = "op") -> "CayleyOp":
        n = carrier.size
        return CayleyOp(carrier, tuple(tuple(fn(i, j) for j in range(n)) for i in range(n)), name)


def mod_add_op(carrier: Carrier) -> CayleyOp:
    """Addition modulo the carrier size, on indices."""
    n = carrier.size
    return CayleyOp.from_function(carrier, lambda i, j: (i + j) % n, f"mod-add {n}")


def affine_capped_op(carrier: Carrier, a: int, b: int) -> CayleyOp:
    """(x, y) -> a*x + b*y on {0..N}, undefined past N (no wrap-around)."""
    n = carrier.size
    return CayleyOp.from_function(
        carrier,
        lambda i, j: a * i + b * j if a * i + b * j < n else None,
        f"affine {a} {b} cap {n - 1}",
    )


def projection_op(carrier: Carrier, side: str) -> CayleyOp:
    if side not in ("left", "right"):
        raise ValueError(f"projection side must be left or right, got {side!r}")
    pick = (lambda i, j: i) if side == "left" else (lambda i, j: j)
    return CayleyOp.from_function(carrier, pick, f"projection {side}")


def product_carrier(a: Carrier, b: Carrier, name: str = "") -> Carrier:
    """Pairs of a and b as a single carrier, row-major order."""
    label = name or f"{a.name}x{b.name}"
    return Carrier(label, tuple(f"{x}.{y}" for x in a.elements for y in b.elements))


@dataclass(frozen=True)
class LawReport:
    total: bool
    associative: bool
    commutative: bool
    # law name -> first counterexample (index tuple), or None when the law holds
    witnesses: Dict[str, Optional[tuple]] = field(compare=False)


def check_op_laws(op: CayleyOp) -> LawReport:
    """Associativity/commutativity/totality with concrete witnesses.

    On partial tables a law holds vacuously wherever one side is undefined.
    """
    n = op.carrier.size
    t = op.table
    total_w = None
    assoc_w = None
    comm_w = None
    for i in range(n):
        for j in range(n):
            v = t[i][j]
            if v is None and total_w is None:
                total_w = (i, j)
            if comm_w is None:
                w = t[j][i]
                if v is not None and w is not None and v != w:
                    comm_w = (i, j)
    for i in range(n):
        for j in range(n):
            ij = t[i][j]
            for k in range(n):
                lhs = t[ij][k] if ij is not None else None
                jk = t[j][k]
                rhs = t[i][jk] if jk is not None else None
                if lhs is not None and rhs is not None and lhs != rhs:
                    assoc_w = (i, j, k)
                    break
            if assoc_w is not None:
                break
        if assoc_w is not None:
            break
    return LawReport(
        total=total_w is None,
        associative=assoc_w is None,
        commutative=comm_w is None,
        witnesses={"total": total_w, "associative": assoc_w, "commutative": comm_w},
    )


@dataclass(frozen=True)
class Subset:
    """A subset of a carrier as a bit mask over element indices."""

    carrier: Carrier
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < (1 << self.carrier.size):
            raise ValueError(f"mask {self.mask} out of range for {self.carrier.name!r}")

    @staticmethod
    def of(carrier: Carrier, indices: Sequence[int]) -> "Subset":
        m = 0
        for i in indices:
            if not 0 <= i < carrier.size:
                raise ValueError(f"index {i} out of range")
            m |= 1 << i
        return Subset(carrier, m)

    @staticmethod
    def empty(carrier: Carrier) -> "Subset":
        return Subset(carrier, 0)

    @staticmethod
    def full(carrier: Carrier) -> "Subset":
        return Subset(carrier, (1 << carrier.size) - 1)

    def indices(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.carrier.size) if self.mask >> i & 1)

    def symbols(self) -> Tuple[str, ...]:
        return tuple(self.carrier.elements[i] for i in self.indices())

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def issubset(self, other: "Subset") -> bool:
        return self.mask & ~other.mask == 0

    def __le__(self, other: "Subset") -> bool:
        return self.issubset(other)


def _close_mask(op: CayleyOp, mask: int) -> int:
    """Least op-stable superset of mask, as a bit mask."""
    t = op.table
    members = [i for i in range(op.carrier.size) if mask >> i & 1]
    work = list(members)
    while work:
        u = work.pop()
        for v in list(members):
            for w in (t[u][v], t[v][u]):
                if w is not None and not mask >> w & 1:
                    mask |= 1 << w
                    members.append(w)
                    work.append(w)
    return mask


def stable_closure(op: CayleyOp, a: Subset) -> Subset:
    """Smallest subset containing a that is closed under op (undefined entries skipped)."""
    if op.carrier != a.carrier:
        raise ValueError("operation and subset live on different carriers")
    return Subset(a.carrier, _close_mask(op, a.mask))


@dataclass(frozen=True)
class SubsetGenerator:
    """A total map from subsets to subsets, meant to be extensive and monotone.

    Table-backed (all 2**size values) up to GENERATOR_TABLE_LIMIT, an opaque
    memoized callable beyond that.
    """

    carrier: Carrier
    table: Optional[Tuple[int, ...]] = None
    fn: Optional[Callable[[int], int]] = field(default=None, compare=False)
    name: str = field(default="psi", compare=False)
    _memo: Dict[int, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if (self.table is None) == (self.fn is None):
            raise ValueError("exactly one of table/fn must be given")
        if self.table is not None:
            if len(self.table) != 1 << self.carrier.size:
                raise ValueError("generator table must cover all subsets")
            full = (1 << self.carrier.size) - 1
            if any(not 0 <= v <= full for v in self.table):
                raise ValueError("generator table value out of range")

    @property
    def table_backed(self) -> bool:
        return self.table is not None

    def apply_mask(self, mask: int) -> int:
        if self.table is not None:
            return self.table[mask]
        got = self._memo.get(mask)
        if got is None:
            got = self.fn(mask)
            self._memo[mask] = got
        return got

    def apply(self, a: Subset) -> Subset:
        if a.carrier != self.carrier:
            raise ValueError("subset lives on a different carrier")
        return Subset(self.carrier, self.apply_mask(a.mask))

    @staticmethod
    def from_callable(carrier: Carrier, fn: Callable[[int], int], name: str = "psi") -> "SubsetGenerator":
        if carrier.size <= GENERATOR_TABLE_LIMIT:
            table = tuple(fn(m) for m in range(1 << carrier.size))
            return SubsetGenerator(carrier, table=table, name=name)
        return SubsetGenerator(carrier, fn=fn, name=name)

    @staticmethod
    def identity(carrier: Carrier) -> "SubsetGenerator":
        return SubsetGenerator.from_callable(carrier, lambda m: m, "identity")

    @staticmethod
    def constant_full(carrier: Carrier) -> "SubsetGenerator":
        full = (1 << carrier.size) - 1
        return SubsetGenerator.from_callable(carrier, lambda m: full, "full")


def generator_from_op(op: CayleyOp) -> SubsetGenerator:
    """The generator sending a subset to its stable closure under op."""
    n = op.carrier.size
    if n > GENERATOR_TABLE_LIMIT:
        return SubsetGenerator(op.carrier, fn=lambda m: _close_mask(op, m),
                               name=f"closure({op.name})")
    # closure(A) = closure(closure(A - x) | {x}): reuse smaller masks.
    table: List[int] = [0] * (1 << n)
    t = op.table
    for mask in range(1, 1 << n):
        low = mask & -mask
        base = table[mask ^ low]
        cur = base | low
        members = [i for i in range(n) if cur >> i & 1]
        work = [low.bit_length() - 1]
        while work:
            u = work.pop()
            for v in list(members):
                for w in (t[u][v], t[v][u]):
                    if w is not None and not cur >> w & 1:
                        cur |= 1 << w
                        members.append(w)
                        work.append(w)
        table[mask] = cur
    return SubsetGenerator(op.carrier, table=tuple(table), name=f"closure({op.name})")


@dataclass(frozen=True)
class GeneratorReport:
    extensive: bool
    monotone: bool
    exhaustive: bool
    sample_count: int
    extensive_witness: Optional[Subset]
    monotone_witness: Optional[Tuple[Subset, Subset]]

    @property
    def ok(self) -> bool:
        return self.extensive and self.monotone


# Sample size for generators too large to check exhaustively.
VALIDATION_SAMPLES = 512


def validate_generator(psi: SubsetGenerator) -> GeneratorReport:
    """Check extensivity and monotonicity.

    Table-backed generators are checked exhaustively.  Monotonicity only needs
    the covering pairs (A, A | {x}): any inclusion is a chain of those, and
    containment composes.
    """
    carrier = psi.carrier
    n = carrier.size
    if psi.table_backed:
        masks: Sequence[int] = range(1 << n)
        exhaustive = True
        sample_count = 1 << n
    else:
        import random

        rng = random.Random(0xC0FFEE)
        full = (1 << n) - 1
        masks = sorted({rng.randint(0, full) for _ in range(VALIDATION_SAMPLES)})
        exhaustive = False
        sample_count = len(masks)

    ext_w = None
    mono_w = None
    for m in masks:
        if m & ~psi.apply_mask(m):
            ext_w = Subset(carrier, m)
            break
    for m in masks:
        pm = psi.apply_mask(m)
        for i in range(n):
            if m >> i & 1:
                continue
            if pm & ~psi.apply_mask(m | 1 << i):
                mono_w = (Subset(carrier, m), Subset(carrier, m | 1 << i))
                break
        if mono_w is not None:
            break
    return GeneratorReport(
        extensive=ext_w is None,
        monotone=mono_w is None,
        exhaustive=exhaustive,
        sample_count=sample_count,
        extensive_witness=ext_w,
        monotone_witness=mono_w,
    )


def is_compatible(op: CayleyOp, psi: SubsetGenerator) -> bool:
    """True iff the closure of every subset under op stays inside psi of that subset.

    Exhaustive over all subsets when psi is table-backed; sampled otherwise.
    """
    if op.carrier != psi.carrier:
        raise ValueError("operation and generator live on different carriers")
    n = op.carrier.size
    if psi.table_backed:
        masks: Sequence[int] = range(1 << n)
    else:
        import random

        rng = random.Random(0xC0FFEE)
        full = (1 << n) - 1
        masks = sorted({rng.randint(0, full) for _ in range(VALIDATION_SAMPLES)})
    for m in masks:
        if _close_mask(op, m) & ~psi.apply_mask(m):
            return False
    return True


def enumerate_ops(carrier: Carrier,
                  law_filter: Optional[Callable[[LawReport], bool]] = None) -> Iterator[CayleyOp]:
    """All total operation tables on the carrier, in lexicographic table order.

    Hard-capped at carrier size 3 (19,683 tables); size 4 would be 4**16.
    """
    n = carrier.size
    if n > ENUMERATION_LIMIT:
        raise CarrierTooLarge(n, ENUMERATION_LIMIT)
    for idx, flat in enumerate(itertools.product(range(n), repeat=n * n)):
        table = tuple(flat[r * n:(r + 1) * n] for r in range(n))
        op = CayleyOp(carrier, table, name=f"op{idx}")
        if law_filter is None or law_filter(check_op_laws(op)):
            yield op


def left_fold(op: CayleyOp, values: Sequence[int]) -> Optional[int]:
    """Fold a nonempty sequence through op from the left; None once any step is undefined."""
    if not values:
        raise ValueError("cannot fold an empty sequence")
    acc: Optional[int] = values[0]
    for v in values[1:]:
        if acc is None:
            return None
        acc = op(acc, v)
    return acc


def op_from_index(carrier: Carrier, idx: int) -> CayleyOp:
    """The idx-th table in the enumerate_ops order."""
    n = carrier.size
    flat = []
    rem = idx
    for _ in range(n * n):
        flat.append(rem % n)
        rem //= n
    if rem:
        raise ValueError(f"index {idx} out of range for size {n}")
    flat.reverse()
    table = tuple(tuple(flat[r * n:(r + 1) * n]) for r in range(n))
    return CayleyOp(carrier, table, name=f"op{idx}")
