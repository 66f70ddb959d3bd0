"""Exact quasisymmetric-function engine for labeled posets and digraphs,
with canonical tree-family enumeration and exhaustive distinguishing scans."""

from .errors import (BasisMismatchError, CheckpointError, DomainError,
                     GuardExceeded, ParseError, UnrealizableError)
from .qsym import (Composition, F, F_, M, M_, QPolynomial, QSymExpr, TQSymPoly,
                   bar, composition_to_subset, descent_composition, f_support,
                   f_to_m, m_to_f, multiply, multiply_m_quasishuffle,
                   principal_specialization, subset_to_composition,
                   uparrow_product, upuparrow_product)
from .posets import (LabeledPoset, STRICT, WEAK, all_strict, all_weak,
                     antichain, antichain_counts, anti_table, canonical_key,
                     chain, disjoint_union, dual, enumerator_f, enumerator_m,
                     greene_shape, is_fair_tree, is_in_class_c, is_isomorphic,
                     jump_pairs, jump_vector, leading_term_check,
                     linear_extension_count, linear_extensions,
                     ordinal_sum_strict, ordinal_sum_weak, parse_poset_inline,
                     parse_poset_text, partition_count_oracle,
                     pointed_partition_exists, realize_labeling,
                     strict_jump_vector, up_jump_levels)
from .digraphs import (Digraph, chromatic_poly, chromatic_qsym_t, chromatic_sym,
                       dag_to_poset, oriented_tree_key, parse_digraph_inline,
                       parse_digraph_text, reversal_invariance_check,
                       top_t_coefficient)
from .families import (FamilySpec, FreeTree, gen_directed_trees, gen_free_trees,
                       gen_labeled_variants, gen_rooted_tree_posets,
                       gen_tree_posets, iter_family)
from .verify import (CollisionReport, collision_scan, conjecture2_scan,
                     conjecture3_scan, fair_tree_scan, invariant_fn,
                     multiset_question_scan, scan_family, spec_scan, xgt_scan)

__version__ = "1.0.0"
