"""Private and correctable subsystems of quantum channels.

Channels in Kraus/Choi/Stinespring form, complementary channels, a small
semidefinite solver layer, diamond norms, epsilon-certification of
private/correctable subsystems, and threshold secret-sharing audits.
"""
from .channels import (ChoiMatrix, DimensionError, KrausChannel, SubsystemDecomposition, apply, choi_of,
                       identity_channel, kraus_to_choi, choi_to_kraus, restrict, trace_channel, validate_cptp)
from .complement import StinespringIsometry, complement, dilate, minimal_dilation
from .diamond import (HermitianPreservingMap, align_dilations, check_continuity, diamond_distance, diamond_norm,
                      entangled_lower_bound)
from .certify import (certify_correctable, certify_private, duality_check, exact_correctable_test,
                      exact_private_test)
from .sdp import SdpProblem, SdpSolveError, solve
from .secretshare import (ThresholdScheme, cgl23_scheme, complement_duality_audit, infeasibility_probe,
                          verify_threshold)

__version__ = "0.1.0"
