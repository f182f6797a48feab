"""Exact-arithmetic toolkit for cube structures on filtered groups.

The package covers free nilspace signatures and their cube sets, polynomial
morphisms with Taylor decomposition, translation groups, quotients by
fiber-transitive translation actions, double-coset spaces built from
group/subgroup data, and a Gowers-norm / nilcharacter correlation harness.
All core computations are carried out over exact integers and rationals;
floating point appears only in the Gowers-norm layer.
"""

from .core import (INT, RAT, RES, BudgetExceeded, DEFAULT_BUDGET, GroupSpec,
                   NilspaceError, Signature, Slot, binom, free_signature,
                   residue_signature)
from .cubes import (complete_corner, complete_point_corner, cube_count,
                    enumerate_cubes, free_vertex_masks, is_cube_degree_k,
                    is_point_cube, point_cube_from_free, sigma, weight)
from .filtered import (FilteredGroupSpec, abelian_filtered, closure,
                       enumerate_hk_cubes, group_from_table,
                       hk_cube_count, hk_cube_from_coefficients,
                       hk_cube_membership, unitriangular)
from .morphisms import (MultiIndex, PolyMorphism, TableMorphism,
                        TorusMorphism, constant_morphism, is_morphism,
                        lift_morphism, taylor_decompose)
from .translations import (Translation, act, act_inverse, arrow, compose,
                           enumerate_translation_group, eta,
                           identity_translation, invert,
                           is_translation_bruteforce, lift_translation)
from .congruences import (Cubespace, FiberTransitiveCandidate,
                          QuotientNilspace, canonical_rep,
                          check_fiber_transitive, continuous_closure_embed,
                          cubespace_from_quotient, cubespace_from_signature,
                          fiber_transitive_closure, filtrations_equivalent,
                          is_free_fiber_transitive, quotient,
                          quotient_isomorphic_to_residues,
                          verify_nilspace_axioms)
from .double_cosets import (DoubleCosetSpace, Nilpair, all_subgroups,
                            double_coset_build, heisenberg_isomorphism_check,
                            nilpair_condition, stabilizer_representation,
                            translation_group_spec)
from .gowers import (FiniteAbelianGroup, Nilcharacter, SignalTable,
                     character_signal, correlation, e, gowers_norm,
                     gowers_norm_direct, natural_surjection,
                     nilcharacter_eval, polynomial_phase_signal,
                     u2_fourier_identity_gap)

__version__ = "0.1.0"
