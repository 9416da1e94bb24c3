"""Split source/channel image codec over a multi-level bit-reliability
interface, trained with multi-sample score-function gradients."""

__version__ = "0.1.0"

from .interface import ReliabilityProfile, geometric_profile  # noqa: F401
from .nn import BACKEND  # noqa: F401
