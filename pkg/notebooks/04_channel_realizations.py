"""
Tapped-delay channel realizations
=================================
"""

# %%
import numpy as np

import vivochan as vc

overall = vc.builtin_parameters("region", "overall").model()
mean_pl = vc.mean_path_loss_db(overall, 60.0)
r = vc.realize_channel(mean_pl, overall.sigma_db, rng=2024)
print(f"mean PL {mean_pl:.2f} dB, shadowing {r.shadowing_db:+.2f} dB, seed {r.seed}")
for tap in r.taps:
    bar = "#" * max(0, int((tap.gain_db + 120) / 2))
    print(f"{tap.delay_ns:5.1f} ns {tap.gain_db:8.2f} dB {bar}")

# %% [markdown]
# Without jitter the tap powers add back to the shadowed budget exactly.

# %%
flat = vc.realize_channel(mean_pl, overall.sigma_db, rng=2024, tap_jitter_db=0.0)
print(f"\nsum of taps {10 * np.log10(flat.total_tap_power):.6f} dB vs -{flat.total_path_loss_db:.6f} dB")

# %% [markdown]
# Frequency dependence of the angular-average path loss is close to linear.

# %%
from vivochan.datasets import ANGULAR_STATISTICS as A

trend = vc.fit_frequency_trend(zip(A["frequency_ghz"], A["average_db"]))
print(f"slope {trend.slope_db_per_ghz:.2f} dB/GHz, intercept {trend.intercept_db:.2f} dB, "
      f"r^2 {trend.r_squared:.4f}")
print(r.to_json(indent=None)[:120] + " ...")
