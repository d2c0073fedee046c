"""Quantum-enhanced simulation-based optimisation on a statevector simulator.

Amplitude estimation (canonical, maximum-likelihood, iterative), a qGAN
distribution loader, readout-error mitigation and the newsvendor
supply-optimisation loop built on them.
"""

from .errors import (NumericalError, QSBOError, ResourceError, StructuralError, TrainingDivergence,
                     ValidationError)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "QSBOError",
    "ValidationError",
    "StructuralError",
    "ResourceError",
    "NumericalError",
    "TrainingDivergence",
]
