"""
Implant link budget in the MICS band
====================================
"""

# %%
import warnings

import numpy as np

import vivochan as vc

band = vc.classify_frequency(403e6)[0]
print(f"403 MHz is in {band.band_id} ({band.label}, channel {band.channel_bw / 1e3:.0f} kHz)")

model = vc.builtin_parameters("region", "heart").model()
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    for depth in (20, 50, 80, 100):
        r = vc.link_budget(-16.0, model, -95.0, depth_mm=depth, band=band, sar=0.2)
        print(f"depth {depth:3d} mm: PL {r.path_loss_db:5.2f} dB, rx {r.rx_power_dbm:6.2f} dBm, "
              f"margin {r.link_margin_db:5.2f} dB")
print(f"({len(caught)} warnings about the band's as-printed EIRP limit)")

# %% [markdown]
# Margin against the 1-sigma and 2-sigma shadowing fade at 80 mm.

# %%
r = vc.link_budget(-16.0, model, -95.0, depth_mm=80)
for k in (1, 2):
    print(f"{k}-sigma fade: margin {r.link_margin_db - k * model.sigma_db:.2f} dB")

# %% [markdown]
# A UWB capsule link: the -41.3 dBm/MHz density mask limits total EIRP.

# %%
uwb = vc.get_band("uwb-low")
cap = -41.3 + 10 * np.log10(499)
print(f"max EIRP over 499 MHz: {cap:.2f} dBm")
print(vc.check_eirp(cap + 1, uwb, 499e6).status, vc.check_eirp(cap - 1, uwb, 499e6).status)
