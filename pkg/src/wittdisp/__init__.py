"""Exact arithmetic for truncated Witt vectors, truncated displays and
Dieudonne modules over finite F_p-algebras, with a finite-groupoid
classifier for displays over finite fields."""

from .rings import (RingSpec, FiniteRing, GaloisField, TruncatedPolyRing,
                    ProductRing, RingHom, ring_make, parse_ring_spec, GF,
                    field_embedding, identity_hom, RingError)
from .witt import WittRing, witt_ring, WittError
from .wittpoly import witt_tables, WittGuardError
from .galois_ring import GaloisRing, galois_ring_oracle, OracleError
from .displays import (TruncatedDisplay, DisplayHom, display_from_matrix,
                       etale_unit, mult_unit, direct_sum, random_display,
                       truncate, truncate_to, base_change, is_nilpotent,
                       fsharp, vsharp, hom_displays, hom_space, isom_displays,
                       compose_homs, verify_hom, is_isomorphism,
                       DisplayError, GuardError)
from .pairs import (RawPair, canonical_raw_pair, scramble_pair,
                    normal_decompose, check_pair_axioms, four_term_check,
                    NormalDecomposition, PairError)
from .dieudonne import (DieudonneModule, NewtonPolygon, FiniteDieudonneModule,
                        dieudonne_module, from_display, to_display,
                        reduce_display, reduce_mod_p, dual, module_type,
                        module_direct_sum, newton_polygon, isogeny_cokernel,
                        DieudonneError, NewtonPrecisionError)
from .moduli import (ModuliInstance, ClassTable, ClassRow, GroupElement,
                     mass_check, count_nilpotent_locus, cross_check_isom,
                     dual_class_rep, x_count_formula, g_count_formula,
                     gl_count, glw_count, ModuliError)

__version__ = "0.1.0"
