"""
Tissue dielectrics across the spectrum
======================================

Evaluate the bundled Cole-Cole fits and look at how permittivity
and penetration depth move with frequency.
"""

# %%
import numpy as np

import vivochan as vc

db = vc.load_default_database()
print("tissues:", ", ".join(db))

# %% [markdown]
# The implant bands sit between a few hundred MHz and a few GHz. Muscle is the
# usual worst case; fat is the usual best case.

# %%
freqs = np.array([16e6, 403e6, 915e6, 2.45e9, 4e9, 8e9])
for name in ("muscle", "fat", "skin_dry"):
    print(f"\n{name}")
    print(f"{'f (MHz)':>10} {'eps_r':>8} {'sigma':>8} {'delta (mm)':>11} {'lambda (mm)':>12}")
    for s in vc.sweep(db[name], freqs):
        print(f"{s.frequency / 1e6:10.0f} {s.eps_real:8.2f} {s.conductivity_effective:8.3f} "
              f"{s.penetration_depth * 1e3:11.1f} {s.wavelength_in_tissue * 1e3:12.1f}")

# %% [markdown]
# Shortening of the wavelength inside a high-permittivity tissue is what makes
# implant antennas small. At eps_r = 35 the factor is sqrt(35).

# %%
ratio = (vc.constants.C0 / 2.4e9) / vc.wavelength_in_tissue(35.0, 2.4e9)
print(f"\nwavelength shortening at eps_r = 35: {ratio:.3f}")

# %% [markdown]
# Absorption grows with frequency: dB lost over 5 cm of muscle.

# %%
for f in freqs:
    print(f"{f / 1e6:8.0f} MHz: {vc.absorption_loss_db(db['muscle'], f, 0.05):7.1f} dB")
