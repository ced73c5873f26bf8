"""Internal unit conventions.

The whole package works in natural units: hbar = 1 and the Rabi
amplitude Omega_0 sets the frequency scale, so times are in 1/Omega_0
and energies in hbar*Omega_0.  HBAR is kept as a named constant so the
operator formulas read like the physics they implement.
"""

HBAR = 1.0
