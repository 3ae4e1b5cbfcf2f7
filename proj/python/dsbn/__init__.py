"""Dempster-Shafer belief network structure learning."""

from ._core import *  # noqa: F401,F403
from ._core import DsbnError  # noqa: F401
