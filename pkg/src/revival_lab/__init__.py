"""Wave-packet revivals for two-degree-of-freedom integrable systems near a torus."""
from . import diophantine, dynamics, hamiltonian, revival, wavepacket
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["diophantine", "dynamics", "hamiltonian", "revival", "wavepacket", "BACKEND", "__version__"]
