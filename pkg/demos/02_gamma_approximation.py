"""
How good is the Gamma approximation of the cascade sum?
=======================================================

T = sum_m |h_br,m| |h_ur,m| has no convenient closed-form law. Matching a
Gamma distribution's mean and variance gives shape k = M pi^2/(16 - pi^2)
and scale w = (16 - pi^2)/(4 pi). Here we put the matched density next to
a histogram of simulated cascade sums.
"""

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from riswpc import cascade_sum, moment_match, sample_channels
from riswpc.specfun import gamma_pdf_v

rng = np.random.default_rng(1)
fig, axes = plt.subplots(1, 3, figsize=(12, 3.5))
for ax, m in zip(axes, (1, 4, 50)):
    g = moment_match(m)
    t = cascade_sum(sample_channels(m, 200_000, rng))
    print(f"M={m:3d}  k={g.k:8.4f}  w={g.w:.5f}   mean {t.mean():8.4f} vs {g.mean:8.4f}   "
          f"var {t.var():7.4f} vs {g.variance:7.4f}")
    grid = np.linspace(0, t.max(), 400)
    ax.hist(t, bins=120, density=True, alpha=0.5, label="simulated")
    ax.plot(grid, gamma_pdf_v(g, grid), "k", lw=1.5, label="matched Gamma")
    ax.set_title(f"M = {m}")
    ax.set_xlabel("T")
axes[0].legend()
fig.tight_layout()
fig.savefig("gamma_fit.png", dpi=120)
print("wrote gamma_fit.png")

# %% [markdown]
# The fourth moment that drives the ergodic-rate expression comes from the
# Gaussian expansion mu^4 + 6 mu^2 s^2 + 3 s^4. It is poor at M = 1
# (2.24 against the exact 4) and becomes accurate as M grows.

# %%
from riswpc import McConfig, fourth_moment_T, sample_T_moments

for m in (1, 4, 16, 64):
    mo = sample_T_moments(m, McConfig(trials=200_000, seed=m))
    f = fourth_moment_T(m)
    print(f"M={m:3d}  formula {f:12.2f}   simulated {mo.fourth.mean:12.2f} +- {mo.fourth.std_err:.2f}   "
          f"rel err {abs(f - mo.fourth.mean) / mo.fourth.mean:.2%}")
