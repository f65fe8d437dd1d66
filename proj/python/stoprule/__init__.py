"""Best-choice stopping rules: exact solvers, Poisson limits and simulation."""

from ._core import *  # noqa: F401,F403
from ._core import Error, Model  # noqa: F401
