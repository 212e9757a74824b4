"""Physical constants (SI) shared by every module."""

import math

from scipy import constants as _sc

C0 = _sc.c                      # m/s, exact
EPS0 = _sc.epsilon_0            # F/m
MU0 = _sc.mu_0                  # H/m
ETA0 = math.sqrt(MU0 / EPS0)    # ohm, free-space wave impedance

NEPER_TO_DB = 20.0 * math.log10(math.e)   # field attenuation, Np -> dB
