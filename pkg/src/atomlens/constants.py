"""Physical constants shared across the package.

All quantities are SI. The vacuum impedance is kept at the rounded value
377 ohm so that every intensity/field conversion in the package uses one
consistent figure; the difference to the CODATA value (376.73 ohm) is far
below any tolerance used here.
"""

import math

PLANCK = 6.62607015e-34           # J s, exact (2019 SI definition)
HBAR = PLANCK / (2.0 * math.pi)   # J s
VACUUM_IMPEDANCE = 377.0          # ohm
