"""Classical QUBO-based eigensolver and Feynman-clock evolution toolkit."""

from . import clock, encoding, linalg, models, observables, sampler, solver

__all__ = [
    "clock",
    "encoding",
    "linalg",
    "models",
    "observables",
    "sampler",
    "solver",
]

__version__ = "0.1.0"
