"""Waiting-time variance under FCFS, LCFS and random-order service."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
