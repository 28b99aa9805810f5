"""Spectral expander certificates, transport metrics and coarse-embedding obstructions."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
