"""Special flows over two-torus translations with slow mixing.

Constructs translation vectors with prescribed continued-fraction growth,
assembles the trigonometric-polynomial ceiling function of the associated
special flow, and numerically verifies the stretch (mixing), almost-periodic
return, and spectral-probe inequalities that the construction rests on.
"""

__version__ = "0.1.0"

import sys as _sys

# Convergent denominators legitimately reach ~1e6 bits (the documented budget);
# reports carry them as exact decimal strings, so lift the CPython conversion cap.
if hasattr(_sys, "set_int_max_str_digits"):
    _sys.set_int_max_str_digits(400_000)
