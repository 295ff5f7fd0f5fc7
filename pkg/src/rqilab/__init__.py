"""Numerical toolkit for entanglement of quantum fields and particles as seen by moving observers."""

__version__ = "0.1.0"

from . import cavity, cosmology, detector, fock, gaussian, rindler, wigner  # noqa: F401
