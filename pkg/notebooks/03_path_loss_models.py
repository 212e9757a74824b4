"""
Path loss: fitted depth models against cadaver measurements
===========================================================
"""

# %%
import numpy as np

import vivochan as vc
from vivochan.pathloss import CATALOGS

depths = np.linspace(10, 100, 10)
print(f"{'depth (mm)':>10}" + "".join(f"{label[:14]:>16}" for label in CATALOGS["region"]))
models = [vc.builtin_parameters("region", label).model() for label in CATALOGS["region"]]
for d in depths:
    print(f"{d:10.0f}" + "".join(f"{vc.mean_path_loss_db(m, d):16.2f}" for m in models))

# %% [markdown]
# The simulation-derived overall-torso fit against the cadaver points. Deep
# points near the heart disagree by more than 10 dB.

# %%
overall = vc.builtin_parameters("region", "overall").model()
report = vc.validate_against_measurements(overall)
for r in report.rows:
    print(f"{r.label:>16}: measured {r.measured_db:6.2f}, model {r.predicted_db:6.2f}, "
          f"residual {r.residual_db:+6.2f} dB")
print("flagged (> 10 dB):", [r.label for r in report.flagged(10)])

# %% [markdown]
# Shadowing: draws around the mean at 50 mm.

# %%
draws = vc.sample_path_loss_db(overall, 50.0, rng=1, size=20_000)
print(f"\nmean {draws.mean():.2f} dB (model {vc.mean_path_loss_db(overall, 50):.2f}), "
      f"std {draws.std():.2f} dB (sigma {overall.sigma_db})")
print("5/50/95 %:", np.round(np.percentile(draws, [5, 50, 95]), 2))

# %% [markdown]
# The free-space family for comparison at 915 MHz.

# %%
lam = vc.pathloss.free_space_wavelength(915e6)
port = vc.AntennaPort()
for d in (0.05, 0.1, 1.0):
    fspl = vc.path_loss_db(vc.Fspl(port, port, lam), d)
    lossy = vc.path_loss_db(vc.FsplRlAbsorption(vc.AntennaPort(1, 0.3), vc.AntennaPort(1, 0.3), lam, 20.0), d)
    print(f"{d:5.2f} m: Friis {fspl:6.2f} dB, with return loss and absorption {lossy:6.2f} dB")
