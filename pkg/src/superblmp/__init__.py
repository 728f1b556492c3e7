"""Jets, Grassmann algebra and Hirota/Bell machinery for the classical and SUSY BLMP equations."""
from ._backend import BACKEND
from .errors import *  # noqa: F401,F403
from .jet import Jet, JetOrder, DEFAULT_ORDER, point_jets
from .grassmann import GeneratorSet, GrassmannElement, Superfield, cov_derivative, gexp, glog
from .hirota import hirota_apply, super_hirota_apply
from .bell import (BellPolynomial, DerivSymbol, bell_binary, bell_evaluate, bell_generate,
                   bell_p_polynomial)
from .library import NamedFunction, ReductionSpec
from .solutions import (SolutionField, BasisFunction, closed_form, kink, n_soliton,
                        rational_similarity, traveling_wave, wronskian_basis,
                        wronskian_solution, yablonskii)
from .residual import (ResidualReport, residual_bilinear, residual_blmp,
                       residual_kdv_reduction, residual_susy_components, sample_points)
from .susy import (SuperpartnerParams, SuperSolitonParams, schroedinger_check, super_soliton,
                   superpartner, susy_kdv_reduction_check)
from .backlund import (BacklundParams, BilinearPair, backlund_search, check_bilinear_system,
                       check_proposition)

__version__ = "0.1.0"
