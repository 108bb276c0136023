"""Split-quaternion linear algebra, neutral-signature curvature
decompositions, the projective-space model, and two moment-map
reductions, with exact rational arithmetic as the ground truth and a
verification CLI (`pqgeom` or `python -m pqgeom`)."""

from .algebra import (NullQuaternionError, ScalarField, SplitQuaternion,
                      conj_norm, scalar_product, unit_flow)
from .linalg import (DegenerateStructureError, HermitianStructure, PQMatrix,
                     PQVector, RankMismatchError, adopted_basis,
                     grassman_split, module_scalar_product, real_rep,
                     sp_membership, structure_endos)
from .forms import (BilinearForm, FourForm, NotInGroupError, NotSkewError,
                    fundamental_four_form, hermitian_projector,
                    rotate_structure, two_form)
from .curvature import (CurvatureTensor, NotSymmetricPairError,
                        NullDirectionError, SingularSystemError,
                        SymmetricDecomposition, bianchi_residual,
                        curvature_from_bilinear, einstein_check,
                        jacobi_spectrum_report, normalizes_structure,
                        projective_curvature, ricci_split,
                        symmetric_space_curvature)
from .projspace import (CompletionFailureError, DegenerateOrbitError,
                        SpherePoint, TangentSplit, induced_geometry,
                        tangent_split, transitive_element)
from .reduction import (DegenerateLevelSetError, ImValue, NonRegularError,
                        NullKillingError, NullOrbitError, ReductionScene,
                        StepTooSmallError, flat_circle_moment,
                        flat_reduced_structure, moment_gradient_check,
                        reduced_jacobi, weighted_killing,
                        weighted_level_value)
from .cli import CheckReport, emit_report, run_suite

__version__ = "0.1.0"
