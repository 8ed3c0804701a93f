"""Semi-discrete finite element solver for 1D compressible Navier-Stokes in
Lagrangian coordinates with temperature-dependent transport coefficients."""

__version__ = "0.1.0"
