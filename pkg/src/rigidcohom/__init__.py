"""Exact-arithmetic rigid cohomology at desk scale.

Library layers, bottom up: ``scalars`` (dual-backend arithmetic over a
discrete valuation field), ``polyalg`` (sparse polynomials, Groebner
with cofactors), ``completions`` (truncated weak-completion models,
spectral radius estimates), ``tubes`` (tube-algebra presentations and
their pro-system), ``homalg`` (valuation-aware exact linear algebra,
complexes, homotopy limits), ``derham`` (de Rham complexes and rigid
Betti numbers), ``cyclic`` (Hochschild/cyclic operators, HKR, periodic
reports), ``cli`` (batch front end).
"""

from .scalars import INF, Scalar, ScalarContext
from .polyalg import (BudgetError, ParseError, PolyRing, PresentedAlgebra,
                      SparsePoly, algebra_over, groebner,
                      ideal_power_generators, lift_in_ideal)
from .completions import (DaggerElement, SubmoduleSpan, TruncationParams,
                          canonical_norm, completion_noninjectivity_witness,
                          linear_growth_membership, spectral_radius_estimate)
from .tubes import (AlgebraHom, TubeSystem, tube_generators,
                    tube_identity_check, tube_level_presentation)
from .homalg import (BettiReport, ChainMap, FiniteComplex, ProComplex,
                     SMatrix, holim, holim_bookkeeping, lim_lim1,
                     rank_kernel_image)
from .derham import (DeRhamComplex, ResiduePresentation, RigidComplexBuilder,
                     de_rham_complex, infinitesimal_betti,
                     infinitesimal_complex, not_exact_at_every_cap,
                     rigid_de_rham, tube_de_rham_level)
from .cyclic import (ChainElement, HPReport, connes_B, cyclic_ops,
                     hh_graded_dims, hkr_map, hochschild_b, hp_report)

__version__ = "0.1.0"
