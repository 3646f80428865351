"""Magnetostatic quadrupole trap design toolkit."""

from quadtrap._core import *  # noqa: F401,F403
from quadtrap._core import constants  # noqa: F401

__version__ = "0.1.0"
