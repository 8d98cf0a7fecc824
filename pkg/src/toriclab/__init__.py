"""Exact-arithmetic toolkit for lattice polytopes and toric geometry.

Everything is computed over the rationals with `fractions.Fraction`; no
floating point enters any result.  The main entry points:

- `Polytope`, `Fan` and friends (`toriclab.polyhedral`)
- lattice-point counting, Ehrhart h* data, degree and codegree
  (`toriclab.latticepoints`)
- T-invariant divisors and class-group coordinates (`toriclab.divisors`)
- curve classes, Mori / nef / effective / moving cones
  (`toriclab.intersection`)
- adjoint polytopes and the associated thresholds (`toriclab.adjunction`)
- the toric minimal model program (`toriclab.mmp`)
- Cayley structures, projective-bundle fans, and the classifier for smooth
  polytopes of large codegree (`toriclab.cayley`)
- cycle rings with exact intersection pairing (`toriclab.cycles`)
- ready-made example families (`toriclab.catalog`)
- a JSON-speaking command line, ``toriclab`` (`toriclab.cli`)
"""

from .adjunction import (AdjunctionReport, adjoint_polytope, adjunction_report,
                         codegree_via_adjoint, is_q_normal, lambda_value,
                         nef_value, q_codegree, sigma_value, spectral_value)
from .catalog import (dilate_polytope, gen_bundle_over_projective_space,
                      gen_contra, gen_losev_manin, gen_projective_space,
                      product_polytope)
from .cayley import (BundleSpec, CayleySpec, ClassificationResult,
                     HypothesisViolation, ample_on_bundle, build_cayley,
                     bundle_fan, cayley_smooth_check, classify,
                     closed_form_invariants, simplex)
from .cycles import (ChowRing, CycleClass, chow_ring, cycle_class,
                     divisor_cycle_class, intersect_classes, ne_k_cone, pair,
                     pairing_kernel)
from .divisors import (DivisorClass, TDivisor, canonical_divisor, cartier_data,
                       class_coords, class_of, divisor_of_character,
                       divisor_of_polytope, is_cartier, picard_rank,
                       polytope_of_divisor, ray_divisor)
from .intersection import (ConeInClassSpace, RelationClass, cone_contains,
                           curve_class, dual_in_class_space, dual_in_n1,
                           eff_cone, intersect, is_ample, is_nef, mori_cone,
                           mov_cone, nef_cone)
from .latticepoints import (HStarPolynomial, codegree, degree, ehrhart_count,
                            h_star, interior_lattice_points, lattice_points,
                            normalized_volume, triangulation_volume)
from .mmp import (MinimalRelation, MMPStep, MMPTrace, all_mmp_runs, contract,
                  eff_extremal_flags, fiber_fan_on_support, flip,
                  minimal_relations, mov_extremal_rays, run_mmp)
from .polyhedral import (Cone, Fan, Polytope, RationalPolytope, fan_isomorphic,
                         is_complete, is_simplicial, is_smooth, normal_fan,
                         polytope_is_smooth, product_fan, star_subdivision,
                         vertices_from_facets, walls)

__version__ = "0.1.0"
