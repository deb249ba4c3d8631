"""p-adic Frobenius structures on de Rham realizations of Kummer motives over Q and quadratic fields."""
from .bogcat import BOgObject, bog_hom_space, psi, pth_power_op, t_BOg, t_BOg_direct
from .errors import OgusError
from .isocrystal import decompose, is_pure
from .logexp import log_Ga, log_torus_unit, pexp, plog
from .motive import (KummerMotive, check_fullness, delta_section, motive_hom_exact, realize_hom,
                     section_uniqueness, t_dR, t_Og)
from .numfield import Place, QuadField, QuadraticFieldElement, classify_place, embed, galois_conjugate
from .ogcat import (OgObject, check_object, gr, hom_space, is_e_effective, is_l_effective,
                    is_level_le_1, kronecker_rational, twist_object, w_leq)
from .padic import PadicContext, PadicElement, frobenius, invert, valuation
from .semilinear import SemilinearOperator, commutes, compose, linearize, twist_op

__version__ = "0.1.0"
