"""Quotients of free word semigroups by rewrite-generated congruences.

Finite carriers and operation tables come in; a canonical word universe is
enumerated, saturated into equivalence classes, and interrogated: embedding
behaviour, induced operations, factorization of bihomomorphisms, and the
desk-scale experiment suites built on those pieces.
"""
from .algebra import (CayleyOp, Carrier, LawReport, Subset, SubsetGenerator,
                      affine_capped_op, check_op_laws, enumerate_ops,
                      generator_from_op, is_compatible, left_fold, mod_add_op,
                      op_from_index, product_carrier, projection_op,
                      stable_closure, validate_generator)
from .closure import (DEFAULT_UNIVERSE_BUDGET, CensusReport, EquivClasses,
                      SearchVerdict, SpanningForest, Verdict, WordUniverse,
                      class_census, chain_within_universe, enumerate_universe,
                      equiv_search, saturate, universe_size)
from .config import ExperimentConfig, config_from_dict, load_config
from .errors import (BudgetExceeded, CarrierTooLarge, ConfigError,
                     CongruenceViolation, InvalidCap, NotAHomomorphism,
                     NotAssociative, ParseError, RuleSetNotNested,
                     UnresolvedReference, WellDefinednessViolation)
from .experiments import (AppendixReport, EntanglementReport,
                          EquivalenceReport, ImplicationReport,
                          InjectiveRegimeReport, UniversalityReport,
                          appendix_suite, entanglement_demo,
                          equivalence_experiment, implication_experiment,
                          injective_regime, universality_experiment,
                          wdv_instance)
from .superlab import (AffineConfig, AffineReport, CoefficientCheck, IsoReport,
                       OpRow, SweepReport, ValueMerge, affine_experiment,
                       build_superposition, relations_from_op,
                       semigroup_iso_check, single_alphabet, sweep_all_ops,
                       sweep_flag_details)
from .tensor import (IotaReport, MergedPair, RefinementReport, TensorSpace,
                     analyze_iota, build_tensor, congruence_failures,
                     entangled_classes, multiset_quotient, refinement_map)
from .universality import (BiMap, BihomReport, CayleyEmbedding,
                           CongruenceWitness, FactorizationReport,
                           FreeFoldReport, HomReport, KerFactorization,
                           PairingReport, cartesian_pairing, cayley_embed,
                           factor_through_tensor, free_fold,
                           free_fold_universality, is_commuting_bihomomorphism,
                           is_homomorphism, ker_factorization,
                           refinement_commutes)
from .words import (Provenance, Rule, RuleSystem, TupleAlphabet, Word,
                    canonical_entries, compile_explicit,
                    compile_from_binary_ops, compile_from_generators,
                    compile_from_op_sets, empty_system, one_step,
                    one_step_entries, ordinal)

__all__ = [name for name in dir() if not name.startswith("_")]
