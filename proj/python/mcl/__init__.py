"""Metric-tree exact similarity search and concentration-of-measure lab."""

from mcl._core import *  # noqa: F401,F403
from mcl._core import __version__  # noqa: F401
