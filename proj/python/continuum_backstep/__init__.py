"""Backstepping control of large transport-PDE ensembles via continuum kernels."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
