"""Point-to-plane distance matrices: generation, ambiguity classes, classification, reconstruction."""

from .errors import (AmbiguousOrDegenerate, DegenerateClassParameters,
                     DegenerateTrajectoryOrRoom, InfeasibleParameters, InvalidInput,
                     OverconstrainedClass, PPDMError)
from .geometry import (Configuration, Plane, RigidMotion, affine_rank, angles_to_normal,
                       apply_rigid_motion, compute_ppdm, congruence_residual,
                       distance_from_tof, lemma1_residual, normal_to_angles,
                       point_plane_distance, room_congruence_residual)
from .reconstruct import (ReconstructionResult, center_ppdm, metric_upgrade,
                          reconstruct_configuration)
from .uniqueness import (ClassificationReport, classify, normal_structure,
                         rank3_feasibility_solve)
from .verification import VerificationReport, verify_pair

__version__ = "0.1.0"
