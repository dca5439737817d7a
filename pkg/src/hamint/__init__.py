"""Exact variational-equation obstructions to integrability for the
two-degree-of-freedom Hamiltonian

    H = (p_r^2 + p_z^2)/2 + A r^2 + B z^2 + C z^3 + D r^2 z + E z^4 + F r^2 z^2 + G r^4.
"""

__version__ = "0.1.0"
