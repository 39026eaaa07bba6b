"""Acceptance gate: eleven binding checks, one test per criterion.

Each test re-derives its inputs from fixed seeds, pins the expected outcome,
and enforces the stated wall-clock ceiling.  Criterion 10 asserts a claimed
behaviour of the crossed two-letter word that the engine refutes; it is
expected to fail and must stay that way unless the engine itself changes.
"""
import json
import random
import time

import pytest

from wordtensor import (
    Carrier,
    TupleAlphabet,
    affine_experiment,
    appendix_suite,
    build_tensor,
    congruence_failures,
    entangled_classes,
    entanglement_demo,
    implication_experiment,
    injective_regime,
    one_step_entries,
    saturate,
    sweep_all_ops,
    universality_experiment,
)
from wordtensor.cli import main
from wordtensor.experiments import (
    SMALL_SIZE_PAIRS,
    _random_system,
    _universe_count,
)
from conftest import record_note
from oracles import naive_partition, partition_signature

SEED = 20260815
CAP_LEN = 3
SLACK = 1


def seeded_instances(n=20, seed=SEED, cap_len=CAP_LEN, slack=SLACK,
                     max_universe=500):
    """The exact instance stream of the randomized closure suite."""
    rng = random.Random(seed)
    pairs = [p for p in SMALL_SIZE_PAIRS
             if _universe_count(p[0] * p[1], cap_len + slack) <= max_universe]
    gen_pairs = [p for p in pairs if max(p) <= 2]
    out = []
    for i in range(n):
        pool = gen_pairs if i % 4 == 3 else pairs
        sx, sy = pool[rng.randrange(len(pool))]
        alphabet = TupleAlphabet((Carrier.ints("X", sx), Carrier.ints("Y", sy)))
        system = _random_system(rng, alphabet, i % 4)
        out.append(build_tensor(system, cap_len, slack, verify_triples=None))
    return out


@pytest.fixture(scope="module")
def random_spaces():
    return seeded_instances()


def test_criterion_01_partition_matches_naive_oracle(random_spaces):
    started = time.perf_counter()
    for space in random_spaces:
        universe = space.universe
        got = partition_signature(
            [space.equiv.rep_index(i) for i in range(len(universe))])
        want = partition_signature(
            naive_partition(universe.words, space.system.rules,
                            universe.max_len))
        assert got == want
    elapsed = time.perf_counter() - started
    record_note(1, f"20 instances, oracle-identical, {elapsed:.2f}s")
    assert elapsed < 10.0


def test_criterion_02_congruence_holds_in_cap(random_spaces):
    for space in random_spaces:
        assert congruence_failures(space, concat_cap=space.cap_len) == []
    record_note(2, "0 violations across 20 instances")


def test_criterion_03_size_two_sweep():
    started = time.perf_counter()
    rep = sweep_all_ops(2)
    elapsed = time.perf_counter() - started
    assert rep.n_ops == 16
    assert rep.n_surjective == 16
    assert rep.n_associative == 8
    assert rep.oracle_mismatches == ()
    left_projection = next(r for r in rep.rows
                           if r.index == 3)  # table ((0,0),(1,1))
    assert left_projection.flagged
    assert rep.flagged == (3, 5)
    record_note(3, f"flagged {list(rep.flagged)}, {elapsed:.2f}s")
    assert elapsed < 5.0


def test_criterion_04_size_three_sweep_exhaustive():
    started = time.perf_counter()
    rep = sweep_all_ops(3, cap_len=3, slack=1, workers=1)
    elapsed = time.perf_counter() - started
    assert rep.n_ops == 3 ** 9 == 19683
    assert len(rep.rows) == 19683
    assert rep.n_associative == 113
    assert rep.n_both == 63
    assert rep.n_injective == 63
    assert rep.n_surjective == 19683
    assert rep.oracle_mismatches == ()
    record_note(4, f"19683 ops, {elapsed:.1f}s")
    assert elapsed < 600.0


def test_criterion_05_affine_probe():
    started = time.perf_counter()
    rep = affine_experiment()
    elapsed = time.perf_counter() - started
    assert rep.distinct_small_ok  # 0 and 1 stay separated
    assert rep.n_identity_words >= 50
    assert rep.n_proven == rep.n_instances
    assert rep.merges and all(m.validated for m in rep.merges)
    record_note(5, f"{rep.n_identity_words} identity words, "
                   f"{len(rep.merges)} merges, {elapsed:.2f}s")
    assert elapsed < 30.0


def test_criterion_06_implications_reproved():
    rep = implication_experiment()
    total = rep.n_instances * rep.pairs_per_instance
    assert total == 200
    assert rep.proven_direct == 200
    assert rep.proven_by_search + rep.proven_by_replay == 200
    assert rep.compatible_ok and rep.nested_ok and rep.flags == ()
    record_note(6, "200/200 direct and under generators")


def test_criterion_07_factorization_clauses():
    rep = universality_experiment()
    assert len(rep.instances) == 50
    assert all(i.all_clauses for i in rep.instances)
    assert rep.flags == ()
    assert rep.wdv_raised
    assert rep.wdv_folds == (0, 1)
    record_note(7, "50/50 clauses, collapse demo raised")


def test_criterion_08_appendix_suite():
    started = time.perf_counter()
    rep = appendix_suite()
    elapsed = time.perf_counter() - started
    assert rep.flags == ()
    assert rep.free_fold_ok and rep.free_fold_surjective
    assert rep.n_semigroups == 10
    assert rep.ker_ok and rep.n_homomorphisms == 10
    assert rep.cayley_ok and rep.n_order2_tables == 8
    assert rep.multiset_ok and rep.pairing_ok
    record_note(8, f"all sections exact, {elapsed:.2f}s")
    assert elapsed < 30.0


def test_criterion_09_wide_relations_injective():
    rep = injective_regime()
    assert rep.n_instances == 10
    assert rep.n_injective == 10
    assert rep.flags == ()
    record_note(9, "10/10 embeddings injective")


def test_criterion_10_crossed_word_stays_entangled():
    """Claim under test: the class of (1,0)γ(0,1) contains no length-1 word
    and the entangled set is nonempty.  The rewrite rules include each
    letter's trade with its own double, which connects the crossed word to a
    letter; the engine therefore refutes both conjuncts and this test fails.
    Do not weaken it: the red result is the finding.
    """
    started = time.perf_counter()
    rep = entanglement_demo()
    elapsed = time.perf_counter() - started
    record_note(10, f"bell_has_singleton={rep.bell_has_singleton}, "
                    f"entangled={list(rep.entangled)}, {elapsed:.2f}s")
    assert elapsed < 5.0
    assert not rep.bell_has_singleton
    assert rep.entangled != ()


def test_criterion_11_reports_are_bit_stable(tmp_path):
    import os
    configs = os.path.join(os.path.dirname(__file__), os.pardir, "configs")
    identical = 0
    for name in sorted(os.listdir(configs)):
        if not name.endswith(".toml"):
            continue
        from wordtensor import load_config
        command = load_config(os.path.join(configs, name)).experiment
        outs = []
        for run in (0, 1):
            target = tmp_path / f"{name}.{run}.json"
            rc = main([command, "--config", os.path.join(configs, name),
                       "--format", "json", "--out", str(target)])
            assert rc in (0, 2), f"{name} exited {rc}"
            outs.append(target.read_bytes())
        assert outs[0] == outs[1], f"{name} is not byte-stable"
        json.loads(outs[0])  # stays parseable
        identical += 1
    assert identical >= 12
    record_note(11, f"{identical} configs byte-identical on double run")
