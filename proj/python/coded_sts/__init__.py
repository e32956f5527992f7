"""Coded single-tone signaling simulator (Python bindings)."""

from ._core import *  # noqa: F401,F403
from ._core import StsError, __version__  # noqa: F401
