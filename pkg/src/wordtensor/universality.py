"""Factorization properties: maps out of quotients, kernels, embeddings, pairings.

The centerpiece takes a two-argument map that respects both factor operations
and produces the unique operation-preserving map out of the quotient space.
The rest are the classical small diagrams: fold out of the free semigroup,
first-isomorphism factorization, regular representation, product pairing.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import CayleyOp, Carrier, Subset, check_op_laws, left_fold, stable_closure
from .errors import (CongruenceViolation, NotAHomomorphism, NotAssociative,
                     WellDefinednessViolation)
from .tensor import TensorSpace


@dataclass(frozen=True)
class HomReport:
    holds: bool
    checked: int
    witness: Optional[Tuple[int, int]] = None


def is_homomorphism(f: Sequence[int], src: CayleyOp, dst: CayleyOp) -> HomReport:
    """f(src(i,j)) == dst(f(i), f(j)) wherever src is defined.

    A defined source product whose image product is undefined counts as a
    failure: the map must transport every computation.
    """
    if len(f) != src.carrier.size:
        raise ValueError("map does not cover the source carrier")
    checked = 0
    for i in range(src.carrier.size):
        for j in range(src.carrier.size):
            v = src(i, j)
            if v is None:
                continue
            checked += 1
            if dst(f[i], f[j]) != f[v]:
                return HomReport(False, checked, (i, j))
    return HomReport(True, checked)


@dataclass(frozen=True)
class BiMap:
    """A total two-argument map (x, y) -> codomain, as an |X| x |Y| table."""

    x: Carrier
    y: Carrier
    codomain: Carrier
    table: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.table)
        object.__setattr__(self, "table", rows)
        if len(rows) != self.x.size or any(len(r) != self.y.size for r in rows):
            raise ValueError("table shape does not match the carriers")
        for r in rows:
            for v in r:
                if not 0 <= v < self.codomain.size:
                    raise ValueError(f"value {v} outside the codomain")

    def __call__(self, i: int, j: int) -> int:
        return self.table[i][j]

    def image(self) -> Tuple[int, ...]:
        return tuple(sorted({v for row in self.table for v in row}))


def _laws_on_subset(op: CayleyOp, elems: Sequence[int]):
    """Associativity/commutativity witnesses restricted to a sub-universe."""
    assoc_w = comm_w = None
    for i in elems:
        for j in elems:
            a, b = op(i, j), op(j, i)
            if comm_w is None and a is not None and b is not None and a != b:
                comm_w = (i, j)
            for k in elems:
                ij = op(i, j)
                jk = op(j, k)
                lhs = op(ij, k) if ij is not None else None
                rhs = op(i, jk) if jk is not None else None
                if lhs is not None and rhs is not None and lhs != rhs:
                    assoc_w = (i, j, k)
    return assoc_w, comm_w


@dataclass(frozen=True)
class BihomReport:
    distributes_x: bool
    distributes_y: bool
    associative_on_image: bool
    commutative_on_image: bool
    image_closure: Tuple[int, ...]
    witnesses: Dict[str, Optional[tuple]] = field(compare=False)

    @property
    def holds(self) -> bool:
        return self.distributes_x and self.distributes_y

    @property
    def collapse_safe(self) -> bool:
        """Everything needed for a single-valued fold out of the quotient."""
        return self.holds and self.associative_on_image and self.commutative_on_image


def is_commuting_bihomomorphism(g: BiMap, alpha: CayleyOp, beta: CayleyOp,
                                delta: CayleyOp) -> BihomReport:
    """Does g turn both factor operations into delta, with delta tame on the image?

    Distribution laws are checked wherever the factor op is defined; a missing
    delta value there is a failure.  Tameness (associative + commutative) is
    checked on the delta-closure of g's image, which is where folds live.
    """
    if alpha.carrier != g.x or beta.carrier != g.y or delta.carrier != g.codomain:
        raise ValueError("carriers of g and the operations disagree")
    wx = wy = None
    for x in range(g.x.size):
        for x2 in range(g.x.size):
            a = alpha(x, x2)
            if a is None:
                continue
            for yy in range(g.y.size):
                if delta(g(x, yy), g(x2, yy)) != g(a, yy):
                    wx = (x, x2, yy)
                    break
            if wx:
                break
        if wx:
            break
    for y in range(g.y.size):
        for y2 in range(g.y.size):
            b = beta(y, y2)
            if b is None:
                continue
            for xx in range(g.x.size):
                if delta(g(xx, y), g(xx, y2)) != g(xx, b):
                    wy = (xx, y, y2)
                    break
            if wy:
                break
        if wy:
            break
    closure = stable_closure(delta, Subset.of(g.codomain, g.image())).indices()
    assoc_w, comm_w = _laws_on_subset(delta, closure)
    return BihomReport(
        distributes_x=wx is None,
        distributes_y=wy is None,
        associative_on_image=assoc_w is None,
        commutative_on_image=comm_w is None,
        image_closure=closure,
        witnesses={"distributes_x": wx, "distributes_y": wy,
                   "associative_on_image": assoc_w, "commutative_on_image": comm_w},
    )


@dataclass(frozen=True)
class FactorizationReport:
    h: Tuple[int, ...]
    triangle: bool
    homomorphism: bool
    uniqueness_on_reachable: bool
    reachable: Tuple[int, ...]
    n_classes: int
    witnesses: Dict[str, Optional[tuple]] = field(compare=False)

    @property
    def all_clauses(self) -> bool:
        # Well-definedness is clause one; reaching a report at all certifies it.
        return self.triangle and self.homomorphism and self.uniqueness_on_reachable


def factor_through_tensor(space: TensorSpace, g: BiMap, delta: CayleyOp) -> FactorizationReport:
    """The induced map h: classes -> codomain with h(class of w) = delta-fold of g over w.

    Raises WellDefinednessViolation when two members of one class fold apart or a
    fold runs into an undefined delta entry; the exception carries the
    offending class and, when present, a witness that delta breaks
    associativity or commutativity on the image closure.
    """
    if space.alphabet.n_factors != 2:
        raise ValueError("factorization needs a two-factor space")
    fx, fy = space.alphabet.factors
    if fx != g.x or fy != g.y:
        raise ValueError("g does not match the space's factors")

    def fold(entries) -> Optional[int]:
        return left_fold(delta, [g(e[0], e[1]) for e in entries])

    closure = stable_closure(delta, Subset.of(g.codomain, g.image())).indices()
    h: List[int] = []
    for cid in range(space.n_classes):
        values = []
        for member in space.members(cid):
            values.append((fold(member), member))
        distinct = {v for v, _ in values}
        if None in distinct or len(distinct) > 1:
            assoc_w, comm_w = _laws_on_subset(delta, closure)
            first = values[0]
            bad = next((p for p in values if p[0] != first[0]), first)
            raise WellDefinednessViolation(
                f"class {cid}: members {first[1]} and {bad[1]} fold to "
                f"{first[0]} and {bad[0]}",
                offending=(cid, first[1], first[0], bad[1], bad[0]),
                assoc_witness=assoc_w if assoc_w is not None else comm_w,
            )
        h.append(distinct.pop())

    tri_w = None
    for letter in space.alphabet.letters():
        if h[space.iota(letter)] != g(letter[0], letter[1]):
            tri_w = letter
            break

    hom_w = None
    for c1 in range(space.n_classes):
        for c2 in range(space.n_classes):
            c3 = space.op(c1, c2)
            if c3 is None:
                continue
            if delta(h[c1], h[c2]) != h[c3]:
                hom_w = (c1, c2)
                break
        if hom_w:
            break

    # Any operation-preserving map agreeing with g on length-1 classes is
    # pinned down wherever products of those classes reach.
    forced: Dict[int, int] = {}
    for letter in space.alphabet.letters():
        forced[space.iota(letter)] = g(letter[0], letter[1])
    uniq_w = None
    frontier = sorted(forced)
    while frontier and uniq_w is None:
        new: List[int] = []
        known = sorted(forced)
        for c1 in known:
            for c2 in known:
                c3 = space.op(c1, c2)
                if c3 is None:
                    continue
                want = delta(forced[c1], forced[c2])
                if want is None:
                    uniq_w = (c1, c2, "delta undefined on forced values")
                    break
                if c3 in forced:
                    if forced[c3] != want:
                        uniq_w = (c1, c2, "conflicting forced values")
                        break
                else:
                    forced[c3] = want
                    new.append(c3)
            if uniq_w:
                break
        frontier = new
    if uniq_w is None:
        bad = next((c for c, v in sorted(forced.items()) if h[c] != v), None)
        if bad is not None:
            uniq_w = (bad, "forced value differs from fold value")

    return FactorizationReport(
        h=tuple(h),
        triangle=tri_w is None,
        homomorphism=hom_w is None,
        uniqueness_on_reachable=uniq_w is None,
        reachable=tuple(sorted(forced)),
        n_classes=space.n_classes,
        witnesses={"triangle": tri_w, "homomorphism": hom_w, "uniqueness": uniq_w},
    )


def refinement_commutes(h_src: Sequence[int], h_tgt: Sequence[int],
                        mapping: Sequence[int]) -> Optional[int]:
    """First source class where folding before and after collapsing disagree."""
    for cid, tgt_cid in enumerate(mapping):
        if h_src[cid] != h_tgt[tgt_cid]:
            return cid
    return None


def free_fold(op: CayleyOp, seq: Sequence[int]) -> int:
    """Evaluate a raw (ordered, unreduced) sequence in a total associative op.

    The domain is genuinely sequences: without associativity the bracketing
    would matter and without totality the value may not exist, so both are
    rejected up front.
    """
    laws = check_op_laws(op)
    if not laws.total:
        raise ValueError(f"op {op.name!r} is partial at {laws.witnesses['total']}")
    if not laws.associative:
        raise NotAssociative(laws.witnesses["associative"])
    if not seq:
        raise ValueError("empty sequence has no value")
    out = left_fold(op, seq)
    assert out is not None
    return out


@dataclass(frozen=True)
class FreeFoldReport:
    """Verification that folding is the unique extension of a letter map.

    The bounded free semigroup is all raw (ordered) sequences over the letter
    domain up to max_len; the fold map sends each to the evaluated image
    sequence.  On that bound the fold is a homomorphism, restricts to the
    letter map on singletons, is pinned down by those two facts, and with an
    identity letter map it is onto the codomain.
    """

    n_sequences: int
    homomorphism: bool
    triangle: bool
    unique: bool
    surjective: bool
    hom_checks: int
    perturbations_rejected: int
    witness: Optional[tuple] = None


def free_fold_universality(op: CayleyOp, j: Sequence[int],
                           max_len: int = 4) -> FreeFoldReport:
    """Check the fold extension of letter map j over sequences up to max_len.

    Uniqueness is exercised literally: every sequence of length >= 2 is split
    and every wrong value at it is shown to break some in-bound instance of
    the homomorphism law.
    """
    laws = check_op_laws(op)
    if not laws.total:
        raise ValueError(f"op {op.name!r} is partial at {laws.witnesses['total']}")
    if not laws.associative:
        raise NotAssociative(laws.witnesses["associative"])
    n_letters = len(j)
    size = op.carrier.size
    if any(not 0 <= v < size for v in j):
        raise ValueError("letter map leaves the codomain")
    f: Dict[Tuple[int, ...], int] = {}
    for h in range(1, max_len + 1):
        for seq in itertools.product(range(n_letters), repeat=h):
            f[seq] = free_fold(op, [j[e] for e in seq])
    hom_w = None
    hom_checks = 0
    for u in f:
        for v in f:
            if len(u) + len(v) > max_len:
                continue
            hom_checks += 1
            if f[u + v] != op(f[u], f[v]):
                hom_w = (u, v)
                break
        if hom_w:
            break
    tri_ok = all(f[(e,)] == j[e] for e in range(n_letters))
    perturbations = 0
    uniq_ok = True
    for seq, val in f.items():
        if len(seq) < 2:
            continue
        head, tail = seq[:1], seq[1:]
        forced = op(f[head], f[tail])
        for wrong in range(size):
            if wrong == val:
                continue
            if forced == wrong:  # the law would tolerate the perturbation
                uniq_ok = False
                break
            perturbations += 1
        if not uniq_ok:
            break
    surjective = len({f[(e,)] for e in range(n_letters)} | set(f.values())) == size
    return FreeFoldReport(
        n_sequences=len(f),
        homomorphism=hom_w is None,
        triangle=tri_ok,
        unique=uniq_ok,
        surjective=surjective,
        hom_checks=hom_checks,
        perturbations_rejected=perturbations,
        witness=hom_w,
    )


@dataclass(frozen=True)
class CongruenceWitness:
    """A partition of a carrier claimed to respect an operation."""

    op: CayleyOp
    class_of: Tuple[int, ...]

    def verify(self) -> Optional[Tuple[int, int, int, int]]:
        """First (i, i2, j, j2) with i~i2, j~j2 whose products separate, else None."""
        n = self.op.carrier.size
        for i in range(n):
            for i2 in range(n):
                if self.class_of[i] != self.class_of[i2]:
                    continue
                for j in range(n):
                    for j2 in range(n):
                        if self.class_of[j] != self.class_of[j2]:
                            continue
                        a, b = self.op(i, j), self.op(i2, j2)
                        if a is None and b is None:
                            continue
                        if a is None or b is None or self.class_of[a] != self.class_of[b]:
                            return (i, i2, j, j2)
        return None


@dataclass(frozen=True)
class KerFactorization:
    quotient_op: CayleyOp
    quotient_map: Tuple[int, ...]  # source index -> quotient index
    mono: Tuple[int, ...]          # quotient index -> target index
    witness: CongruenceWitness
    commutes: bool
    mono_injective: bool
    mono_is_hom: bool
    quotient_map_is_hom: bool


def ker_factorization(f: Sequence[int], src: CayleyOp, dst: CayleyOp) -> KerFactorization:
    """Split a homomorphism into a surjection onto fibers and an injection.

    The fibers of f partition the source; that partition respects the source
    operation precisely because f is a homomorphism, giving a quotient
    operation, and f factors as (fiber value) after (fiber of).
    """
    hom = is_homomorphism(f, src, dst)
    if not hom.holds:
        raise NotAHomomorphism(hom.witness)
    values = sorted(set(f))
    q_index = {v: q for q, v in enumerate(values)}
    quotient_map = tuple(q_index[f[i]] for i in range(src.carrier.size))
    witness = CongruenceWitness(src, quotient_map)
    broken = witness.verify()
    if broken is not None:
        # Possible only when src is partial with a lopsided definedness pattern.
        raise CongruenceViolation(f"fiber partition does not respect the source op: {broken}")
    rep_of = {}
    for i in range(src.carrier.size):
        rep_of.setdefault(quotient_map[i], i)
    q_carrier = Carrier(f"{src.carrier.name}/ker",
                        tuple(f"[{src.carrier.elements[rep_of[q]]}]" for q in range(len(values))))

    def q_op(a: int, b: int) -> Optional[int]:
        v = src(rep_of[a], rep_of[b])
        return None if v is None else quotient_map[v]

    quotient_op = CayleyOp.from_function(q_carrier, q_op, f"{src.name}/ker")
    mono = tuple(values)
    commutes = all(mono[quotient_map[i]] == f[i] for i in range(src.carrier.size))
    return KerFactorization(
        quotient_op=quotient_op,
        quotient_map=quotient_map,
        mono=mono,
        witness=witness,
        commutes=commutes,
        mono_injective=len(set(mono)) == len(mono),
        mono_is_hom=is_homomorphism(mono, quotient_op, dst).holds,
        quotient_map_is_hom=is_homomorphism(quotient_map, src, quotient_op).holds,
    )


@dataclass(frozen=True)
class CayleyEmbedding:
    adjoined_identity: bool
    monoid: CayleyOp
    translations: Tuple[Tuple[int, ...], ...]  # row s: t -> s*t on the monoid
    injective: bool
    composition_ok: bool


def cayley_embed(op: CayleyOp) -> CayleyEmbedding:
    """Represent a finite semigroup faithfully by left translations.

    An identity is adjoined unless one exists, so distinct elements give
    distinct translations (they already differ at the identity).  Composition
    of translations realizes the operation: (s then t applied on the left)
    is the translation of s*t.
    """
    laws = check_op_laws(op)
    if not laws.total:
        raise ValueError(f"op {op.name!r} is partial at {laws.witnesses['total']}")
    if not laws.associative:
        raise NotAssociative(laws.witnesses["associative"])
    n = op.carrier.size
    neutral = next((e for e in range(n)
                    if all(op(e, x) == x and op(x, e) == x for x in range(n))), None)
    if neutral is None:
        monoid_carrier = Carrier(op.carrier.name + "^1", op.carrier.elements + ("e",))

        def m_op(i: int, j: int) -> int:
            if i == n:
                return j
            if j == n:
                return i
            return op(i, j)

        monoid = CayleyOp.from_function(monoid_carrier, m_op, op.name + "^1")
        adjoined = True
    else:
        monoid = op
        adjoined = False
    m = monoid.carrier.size
    translations = tuple(tuple(monoid(s, t) for t in range(m)) for s in range(n))
    injective = len(set(translations)) == n
    composition_ok = True
    for s in range(n):
        for t in range(n):
            st = op(s, t)
            composed = tuple(translations[s][translations[t][i]] for i in range(m))
            if composed != translations[st]:
                composition_ok = False
    return CayleyEmbedding(adjoined, monoid, translations, injective, composition_ok)


@dataclass(frozen=True)
class PairingReport:
    pairing: Tuple[int, ...]
    projections_ok: bool
    unique: bool
    candidates_checked: int


def cartesian_pairing(f: Sequence[int], g: Sequence[int],
                      x_size: int, y_size: int) -> PairingReport:
    """The unique map into a product agreeing with both coordinate maps.

    Product elements are indexed row-major (x * y_size + y).  Uniqueness is
    certified by exhausting every candidate map into the product.
    """
    if len(f) != len(g):
        raise ValueError("coordinate maps have different domains")
    if any(not 0 <= v < x_size for v in f) or any(not 0 <= v < y_size for v in g):
        raise ValueError("coordinate map value out of range")
    z = len(f)
    pairing = tuple(f[i] * y_size + g[i] for i in range(z))
    projections_ok = all(pairing[i] // y_size == f[i] and pairing[i] % y_size == g[i]
                         for i in range(z))
    satisfying = 0
    for candidate in itertools.product(range(x_size * y_size), repeat=z):
        if all(candidate[i] // y_size == f[i] and candidate[i] % y_size == g[i]
               for i in range(z)):
            satisfying += 1
    return PairingReport(pairing, projections_ok,
                         unique=satisfying == 1,
                         candidates_checked=(x_size * y_size) ** z)
