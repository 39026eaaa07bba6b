"""Whole-table sweeps and the capped-affine probe, against frozen outcomes."""
import pytest

from wordtensor import (
    AffineConfig,
    Carrier,
    CayleyOp,
    affine_experiment,
    build_superposition,
    semigroup_iso_check,
    sweep_all_ops,
    sweep_flag_details,
)
from wordtensor.errors import InvalidCap, NotAssociative
from wordtensor.superlab import _fold_coefficients
from oracles import naive_left_fold

MOD4 = tuple(tuple((i + j) % 4 for j in range(4)) for i in range(4))


@pytest.fixture(scope="module")
def size2_sweep():
    return sweep_all_ops(2)


@pytest.fixture(scope="module")
def affine_report():
    return affine_experiment()


class TestSweepSizeTwo:
    def test_headline_counts(self, size2_sweep):
        rep = size2_sweep
        assert rep.n_ops == 16
        assert rep.n_associative == 8
        assert rep.n_commutative == 8
        assert rep.n_both == 6
        assert rep.n_injective == 6
        assert rep.n_surjective == 16

    def test_projections_flagged(self, size2_sweep):
        rep = size2_sweep
        assert rep.flagged == (3, 5)
        assert rep.oracle_mismatches == ()
        assert rep.reruns == ()

    def test_rows_consistent(self, size2_sweep):
        rep = size2_sweep
        assert len(rep.rows) == 16
        for row in rep.rows:
            assert row.flagged == (row.injective != row.associative)
            assert row.oracle_mismatch == (row.injective != (row.associative and row.commutative))

    def test_flag_details_replay(self, size2_sweep):
        details = sweep_flag_details(size2_sweep)
        assert [d["op_index"] for d in details] == [3, 5]
        left = details[0]
        assert left["kind"] == "injectivity-claim-mismatch"
        assert left["table"] == [[0, 0], [1, 1]]
        assert left["associative"] and not left["commutative"]
        assert not left["injective_within_cap"]
        assert left["merged"][0]["chain"] == ["0", "0γ1", "1"]

    def test_workers_agree(self):
        seq = sweep_all_ops(2, workers=1)
        par = sweep_all_ops(2, workers=2)
        assert seq.summary() == par.summary()


class TestIsoCheck:
    def test_cyclic_group_embeds(self):
        rep = semigroup_iso_check(CayleyOp(Carrier.ints("Z4", 4), MOD4, "m4"))
        assert rep.bijective and rep.op_preserved
        assert not rep.flagged_noncommutative

    def test_left_zero_collapses_and_is_flagged(self):
        lz = CayleyOp(Carrier.ints("L", 2), ((0, 0), (1, 1)), "lz")
        rep = semigroup_iso_check(lz)
        assert not rep.bijective
        assert rep.flagged_noncommutative

    def test_non_associative_raises(self):
        bad = CayleyOp(Carrier.ints("B", 2), ((1, 0), (0, 0)), "bad")
        with pytest.raises(NotAssociative):
            semigroup_iso_check(bad)


class TestBuildSuperposition:
    def test_mod2_two_classes(self):
        op = CayleyOp(Carrier.ints("Z2", 2), ((0, 1), (1, 0)), "m2")
        space = build_superposition(op, 3, 1)
        assert space.n_classes == 2
        assert space.iota((0,)) != space.iota((1,))


class TestAffineConfig:
    def test_degenerate_coefficients_rejected(self):
        with pytest.raises(InvalidCap):
            AffineConfig(a=1, b=1)
        with pytest.raises(InvalidCap):
            AffineConfig(a=0, b=2)
        with pytest.raises(InvalidCap):
            AffineConfig(cap_value=0)
        with pytest.raises(InvalidCap):
            AffineConfig(cap_len=0)


class TestAffineExperiment:
    def test_headline(self, affine_report):
        rep = affine_report
        assert rep.distinct_small_ok
        assert rep.n_identity_words == 65
        assert rep.n_instances == 234
        assert rep.n_proven == 234
        assert rep.discrepancies == ()

    def test_value_merges(self, affine_report):
        rep = affine_report
        assert len(rep.merges) == 7
        assert all(m.validated for m in rep.merges)
        first = rep.merges[0]
        assert (first.low, first.high) == (2, 4)
        assert first.chain == ("2", "0γ1", "0γ0γ1", "0γ2", "4")
        assert [m.high for m in rep.merges] == [4, 6, 8, 10, 12, 14, 16]

    def test_census(self, affine_report):
        rep = affine_report
        assert rep.census.n_words == 1139
        assert rep.census.n_classes == 149

    def test_coefficient_checks(self, affine_report):
        rep = affine_report
        by_h = {c.h: c for c in rep.coefficient_checks}
        assert set(by_h) == {2, 3}
        assert by_h[2].actual == (2, 2) and by_h[2].claimed == (2, 4)
        assert by_h[2].witness_actual == 4 and by_h[2].witness_claimed == 6
        assert by_h[3].actual == (4, 4, 2) and by_h[3].claimed == (2, 4, 8)
        assert by_h[3].witness_actual == 10 and by_h[3].witness_claimed == 14
        for c in by_h.values():
            assert not c.match
            # the quotient itself identifies both predictions here
            assert c.separated_in_window is False

    def test_flags_only_coefficient_kind(self, affine_report):
        kinds = {f["kind"] for f in affine_report.flags()}
        assert kinds == {"fold-coefficient-mismatch"}

    def test_summary_is_json_safe(self, affine_report):
        import json
        json.dumps(affine_report.summary())


class TestFoldCoefficients:
    def test_values(self):
        assert _fold_coefficients(2, 2, 2) == (2, 2)
        assert _fold_coefficients(2, 2, 3) == (4, 4, 2)
        assert _fold_coefficients(2, 2, 4) == (8, 8, 4, 2)
        assert _fold_coefficients(3, 3, 3) == (9, 9, 3)

    def test_matches_symbolic_left_fold(self):
        # fold(x1..xh) = a*fold(x1..x[h-1]) + b*xh, uncapped
        for a, b, h in ((2, 2, 2), (2, 3, 3), (3, 2, 4)):
            coeffs = _fold_coefficients(a, b, h)
            # evaluate on unit vectors against a wide-cap table fold
            n = a ** h * h + 1
            table = tuple(tuple(min(a * x + b * y, n - 1) for y in range(n))
                          for x in range(n))
            for pos in range(h):
                vec = [1 if i == pos else 0 for i in range(h)]
                assert naive_left_fold(table, vec) == coeffs[pos]
