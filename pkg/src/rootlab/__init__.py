"""rootlab: a numerical laboratory for root distributions of polynomial
families, their derivatives, and the limit measures they approach."""

from .errors import RootlabError
from .polycore import (CoeffPoly, StructuralPoly, Jet, eval_jet, derivative,
                       expand, log_abs_normalized)
from .regions import Annulus, Box, CappedComplement, Disk, Region, Union
from .roots import (RootSet, aberth_solve, backward_orbit,
                    direction_from_roots, isolate_and_polish,
                    iterate_derivative_roots, winding_count)
from .measures import (ArcsineSegment, CantorHausdorff, DiscreteMeasure,
                       JuliaEquilibrium, TargetMeasure, UniformCircle,
                       WeightedCircles, cauchy_discrete,
                       critical_points_in_region, potential_discrete)
from .families import (CantorIFS, ChebyshevSegment, ExplicitList,
                       FamilyMember, FamilySpec, Iterates, PowersUnity,
                       RandomIID, derivative_member, roots_of)
from .analysis import (EvaluationGrid, antiderivative_demo, centering_check,
                       circle_grid, count_in_region, gauss_lucas_check,
                       heredity_check, potential_discrepancy,
                       root_distribution, theorem_bound_check,
                       weakstar_convergence_check)

__version__ = "0.1.0"
