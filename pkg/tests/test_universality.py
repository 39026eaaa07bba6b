"""Mapping-out properties: factorization, folds, embeddings, pairings."""
import itertools

import pytest

from wordtensor import (
    BiMap,
    Carrier,
    CayleyOp,
    CongruenceWitness,
    TupleAlphabet,
    build_tensor,
    cartesian_pairing,
    cayley_embed,
    check_op_laws,
    compile_from_binary_ops,
    enumerate_ops,
    factor_through_tensor,
    free_fold,
    free_fold_universality,
    is_commuting_bihomomorphism,
    is_homomorphism,
    ker_factorization,
    refinement_commutes,
)
from wordtensor.errors import (
    NotAHomomorphism,
    NotAssociative,
    WellDefinednessViolation,
)
from wordtensor.experiments import wdv_instance

MOD2 = ((0, 1), (1, 0))
MOD4 = tuple(tuple((i + j) % 4 for j in range(4)) for i in range(4))
Z2 = CayleyOp(Carrier.ints("Z2", 2), MOD2, "mod2")
Z4 = CayleyOp(Carrier.ints("Z4", 4), MOD4, "mod4")
# total but (1-1)-1 != 1-(1-1)
SUB4 = CayleyOp(Carrier.ints("S4", 4),
                tuple(tuple((i - j) % 4 for j in range(4)) for i in range(4)),
                "sub4")


def mod2_space(cap_len=2, slack=1):
    a = TupleAlphabet((Carrier.ints("X", 2), Carrier.ints("Y", 2)))
    ops = (CayleyOp(a.factors[0], MOD2, "mx"), CayleyOp(a.factors[1], MOD2, "my"))
    return build_tensor(compile_from_binary_ops(a, ops), cap_len, slack)


class TestHomomorphism:
    def test_mod_map_z4_to_z2(self):
        rep = is_homomorphism((0, 1, 0, 1), Z4, Z2)
        assert rep.holds and rep.checked == 16 and rep.witness is None

    def test_matches_pointwise_recheck(self):
        for f in itertools.product(range(2), repeat=4):
            rep = is_homomorphism(f, Z4, Z2)
            want = all(Z2(f[i], f[j]) == f[Z4(i, j)]
                       for i in range(4) for j in range(4))
            assert rep.holds == want
            if not rep.holds:
                i, j = rep.witness
                assert Z2(f[i], f[j]) != f[Z4(i, j)]

    def test_undefined_image_is_a_failure(self):
        partial = CayleyOp(Carrier.ints("P", 2), ((0, None), (None, 1)), "p")
        rep = is_homomorphism((0, 1), Z2, partial)
        assert not rep.holds

    def test_size_mismatch_rejected(self):
        with pytest.raises(ValueError):
            is_homomorphism((0, 1), Z4, Z2)


class TestBihom:
    def test_multiplication_distributes_over_parity(self):
        g = BiMap(Z2.carrier, Z2.carrier, Z2.carrier, ((0, 0), (0, 1)))
        rep = is_commuting_bihomomorphism(g, Z2, Z2, Z2)
        assert rep.holds and rep.collapse_safe
        assert rep.image_closure == (0, 1)

    def test_or_map_is_not_bilinear(self):
        g = BiMap(Z2.carrier, Z2.carrier, Z2.carrier, ((0, 1), (1, 1)))
        rep = is_commuting_bihomomorphism(g, Z2, Z2, Z2)
        assert not rep.holds
        x, x2, y = rep.witnesses["distributes_x"]
        assert Z2(g(x, y), g(x2, y)) != g(Z2(x, x2), y)

    def test_carrier_mismatch_rejected(self):
        g = BiMap(Z2.carrier, Z2.carrier, Z2.carrier, ((0, 0), (0, 1)))
        with pytest.raises(ValueError):
            is_commuting_bihomomorphism(g, Z4, Z2, Z2)


class TestFactorization:
    def test_all_clauses_on_multiplication(self):
        space = mod2_space()
        x, y = space.alphabet.factors
        g = BiMap(x, y, Z2.carrier, ((0, 0), (0, 1)))
        rep = factor_through_tensor(space, g, Z2)
        assert rep.all_clauses
        assert rep.triangle and rep.homomorphism and rep.uniqueness_on_reachable
        assert len(rep.h) == space.n_classes
        # the induced map agrees with g through the embedding
        for letter in space.alphabet.letters():
            assert rep.h[space.iota(letter)] == g(letter[0], letter[1])
        assert set(rep.reachable) == set(range(space.n_classes))

    def test_ill_defined_fold_raises_with_witness(self):
        space, g, delta = wdv_instance()
        with pytest.raises(WellDefinednessViolation) as exc:
            factor_through_tensor(space, g, delta)
        err = exc.value
        cid, member_a, val_a, member_b, val_b = err.offending
        assert cid == 0
        assert {val_a, val_b} == {0, 1}
        assert err.assoc_witness == (2, 1, 0)

    def test_wrong_shape_rejected(self):
        space = mod2_space()
        one = TupleAlphabet((Carrier.ints("E", 2),))
        from wordtensor import multiset_quotient
        flat = multiset_quotient(one, 2)
        g = BiMap(Z2.carrier, Z2.carrier, Z2.carrier, ((0, 0), (0, 1)))
        with pytest.raises(ValueError):
            factor_through_tensor(flat, g, Z2)
        bad_g = BiMap(Z4.carrier, Z2.carrier, Z2.carrier,
                      ((0, 0), (0, 1), (0, 0), (0, 1)))
        with pytest.raises(ValueError):
            factor_through_tensor(space, bad_g, Z2)


class TestRefinementCommutes:
    def test_alignment_and_first_divergence(self):
        assert refinement_commutes((0, 1, 0), (0, 1), (0, 1, 0)) is None
        assert refinement_commutes((0, 1, 1), (0, 1), (0, 1, 0)) == 2


class TestFreeFold:
    def test_fold_values(self):
        assert free_fold(Z4, [1, 1, 1]) == 3
        assert free_fold(Z2, [1]) == 1

    def test_rejects_partial_and_non_associative(self):
        partial = CayleyOp(Carrier.ints("P", 2), ((0, None), (None, 1)), "p")
        with pytest.raises(ValueError):
            free_fold(partial, [0, 1])
        with pytest.raises(NotAssociative):
            free_fold(SUB4, [1, 1])
        with pytest.raises(ValueError):
            free_fold(Z2, [])

    def test_universality_mod2_and_mod3(self):
        rep2 = free_fold_universality(Z2, (0, 1), max_len=4)
        assert rep2.homomorphism and rep2.triangle and rep2.unique
        assert rep2.surjective
        assert rep2.n_sequences == 2 + 4 + 8 + 16
        z3 = CayleyOp(Carrier.ints("Z3", 3),
                      tuple(tuple((i + j) % 3 for j in range(3)) for i in range(3)),
                      "mod3")
        rep3 = free_fold_universality(z3, (0, 1, 2), max_len=3)
        assert rep3.homomorphism and rep3.triangle and rep3.unique and rep3.surjective

    def test_non_surjective_letter_map(self):
        rep = free_fold_universality(Z4, (0, 2), max_len=3)
        assert rep.homomorphism and rep.triangle
        assert not rep.surjective  # odd values are never reached

    def test_non_associative_rejected(self):
        with pytest.raises(NotAssociative):
            free_fold_universality(SUB4, (0, 1))


class TestCongruenceWitness:
    def test_parity_partition_respects_mod4(self):
        assert CongruenceWitness(Z4, (0, 1, 0, 1)).verify() is None

    def test_lopsided_partition_caught(self):
        broken = CongruenceWitness(Z4, (0, 0, 1, 1)).verify()
        assert broken is not None
        i, i2, j, j2 = broken
        lhs, rhs = Z4(i, j), Z4(i2, j2)
        assert (0, 0, 1, 1)[lhs] != (0, 0, 1, 1)[rhs]


class TestKerFactorization:
    def test_mod_map_splits(self):
        fac = ker_factorization((0, 1, 0, 1), Z4, Z2)
        assert fac.commutes and fac.mono_injective
        assert fac.mono_is_hom and fac.quotient_map_is_hom
        assert fac.quotient_op.carrier.size == 2
        assert fac.witness.verify() is None
        for i in range(4):
            assert fac.mono[fac.quotient_map[i]] == (0, 1, 0, 1)[i]

    def test_constant_map_collapses_everything(self):
        fac = ker_factorization((0, 0, 0, 0), Z4, Z2)
        assert fac.quotient_op.carrier.size == 1
        assert fac.commutes

    def test_non_homomorphism_rejected(self):
        with pytest.raises(NotAHomomorphism):
            ker_factorization((0, 0, 1, 0), Z4, Z2)


class TestCayleyEmbed:
    def test_all_associative_order_two_tables(self):
        count = 0
        for op in enumerate_ops(Carrier.ints("S", 2)):
            laws = check_op_laws(op)
            if not (laws.total and laws.associative):
                continue
            emb = cayley_embed(op)
            assert emb.injective and emb.composition_ok
            count += 1
        assert count == 8

    def test_identity_detection(self):
        emb = cayley_embed(Z4)
        assert not emb.adjoined_identity
        left_zero = CayleyOp(Carrier.ints("L", 2), ((0, 0), (1, 1)), "lz")
        emb2 = cayley_embed(left_zero)
        assert emb2.adjoined_identity
        assert emb2.monoid.carrier.size == 3

    def test_non_associative_rejected(self):
        bad = CayleyOp(Carrier.ints("B", 2), ((1, 0), (0, 0)), "bad")
        with pytest.raises(NotAssociative):
            cayley_embed(bad)


class TestCartesianPairing:
    def test_identity_coordinates(self):
        rep = cartesian_pairing((0, 1), (0, 1), 2, 2)
        assert rep.pairing == (0, 3)
        assert rep.projections_ok and rep.unique
        assert rep.candidates_checked == 16

    def test_unique_against_exhaustion(self):
        for f in itertools.product(range(2), repeat=2):
            for g in itertools.product(range(3), repeat=2):
                rep = cartesian_pairing(f, g, 2, 3)
                assert rep.projections_ok and rep.unique
                assert all(rep.pairing[i] == f[i] * 3 + g[i] for i in range(2))

    def test_domain_mismatch_rejected(self):
        with pytest.raises(ValueError):
            cartesian_pairing((0, 1), (0,), 2, 2)
        with pytest.raises(ValueError):
            cartesian_pairing((0, 2), (0, 1), 2, 2)
