"""Lie algebroids, Poisson-Nijenhuis structures and bi-Hamiltonian hierarchies."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
