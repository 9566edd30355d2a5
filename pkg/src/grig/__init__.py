"""Exact computational toolkit for the four-generator group of tree
automorphisms generated by a, b, c, d: element algebra with a decidable word
problem, finite level quotients with stabilizer chains, 2-group rank
analysis, and rank-gradient / rigidity tables.
"""

from grig._kernel import BACKEND as KERNEL_BACKEND
from grig.elements import (Element, Pair, Portrait, Product, Word, act,
                           conjugate, commutator, equal_elements,
                           first_level_decomposition, group_ops, invert,
                           is_identity, mul, parse_element, portrait,
                           reduce_word, section_at)
from grig.permgroup import (PermGroup, Permutation, build_chain_and_order,
                            image_at_level, level_quotient,
                            level_stabilizer_image,
                            membership_and_containment, normal_closure,
                            orbit, subgroup)
from grig.pgroup import (check_rank_bound, frattini_rank,
                         lower_central_series, random_subgroup,
                         semidirect_rank_identity)
from grig.catalog import (family_element, member_of_K, subgroup_generators,
                          verify_branching, verify_conjugation_tables)
from grig.rigidity import (conjecture_probe, index_of, normal_sandwich_check,
                           rank_gradient_table, rank_witness, rigidity_report)

__version__ = "0.1.0"
