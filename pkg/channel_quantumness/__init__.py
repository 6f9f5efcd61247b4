"""Channel quantumness from the incompatibility of output states."""

__all__ = [
    "__version__",
    "KrausChannel",
    "OptimizerConfig",
    "build_channel",
    "closed_form_mu",
    "incompatibility",
    "maximize_mu",
]
__version__ = "0.1.0"

from .channels import KrausChannel, build_channel
from .models import OptimizerConfig
from .optimizer import maximize_mu
from .quantumness import closed_form_mu, incompatibility
