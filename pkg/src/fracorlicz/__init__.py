"""Numerical calculus for fractional Orlicz-Sobolev embeddings into spaces of
uniformly continuous functions."""
from .young import *  # noqa: F401,F403
from .errors import *  # noqa: F401,F403
from .conditions import *  # noqa: F401,F403
from .modulus import *  # noqa: F401,F403
from .norms import *  # noqa: F401,F403
from .seminorm import *  # noqa: F401,F403

__version__ = "0.1.0"
