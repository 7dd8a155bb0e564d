"""Eigenvalue bounds for the Dirichlet poly-Laplacian and reference spectra to test them."""
from .bounds import (BoundParams, ProblemSpec, cheng_qi_wei_lower, cheng_wei_clamped_upper,
                     coeff_A1, coeff_A2, corollary_upper, levine_protter_lower, li_yau_lower,
                     optimize_sigma0, polya_tiling_lower, ppw_next_upper, theorem_upper,
                     theorem_upper_assembled, weyl_average, weyl_kth, yang_next_upper)
from .eigensolve import (Spectrum, clamped_beam_spectrum, exact_box_spectrum_l1,
                         rayleigh_ritz_interval, rayleigh_ritz_square)
from .geometry import CollarSpec, Domain

__version__ = "0.1.0"
