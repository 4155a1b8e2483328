"""Physical constants and the working sign convention."""

# reduced Planck constant in SI units (J*s), as quoted to four digits
HBAR_SI = 1.054e-34

# default working value (natural units); the sign selects [q, p] = +i hbar
HBAR_NATURAL = 1.0
