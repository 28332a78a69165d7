"""Pulse-level CV/CX gate modelling: CR Hamiltonian, schedules, Weyl chamber,
synthesis, circuit verification and state tomography."""
from . import circuit, crmodel, device, gates, kernels, linalg, pulse, synth, tomo, weyl
from ._accel import USE_NUMBA

__version__ = "0.1.0"

__all__ = ["circuit", "crmodel", "device", "gates", "kernels", "linalg", "pulse",
           "synth", "tomo", "weyl", "USE_NUMBA", "__version__"]
