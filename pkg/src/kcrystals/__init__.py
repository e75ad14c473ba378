"""Kashiwara crystals: Cartan data, tensor products, monomial and lattice realizations."""
from .cartan import CartanError, CartanSpec, freudenthal_multiplicities, parse_cartan, weyl_dim
from .core import NEG_INF, Crystal, ElementaryB, TLambda, TensorProduct, dual, restrict, tensor
from .graph import CrystalGraph, canonical_form, explore, hw_elements, is_semi_normal
from .lattice import (LatticeCrystal, LatticeFunctionals, TruncatedBInfinity, TruncationError, binfty_truncated,
                      bl_factorization_check, check_ell_condition, verify_lattice_embedding)
from .monomial import CMatrix, Monomial, MonomialCrystal, MonomialRule, ORIGINAL, parse_monomial, psi_map
from .verify import (EXPECTED_FAIL, FAIL, INCONCLUSIVE, PASS, CheckReport, check_component_is_Blam,
                     check_crystal_axioms, check_normal, check_semi_normal, phi_rank2_morphism_check,
                     stembridge_check)

__version__ = "0.1.0"
