"""Zeros of the replicas of a zeros run, overlaid with the phase boundaries.

Usage: python -m analysis.plot_zeros <run_dir>
"""

import sys

import numpy as np
import pandas as pd
import matplotlib.pyplot as plt
import seaborn as sns

from analysis.utils import load_manifest, load_zero_sets, savefig

run_dir = sys.argv[1] if len(sys.argv) > 1 else "logs"
manifest = load_manifest(run_dir)
config_experiment = manifest["config"]["experiment"]
mode = config_experiment["mode"]

zero_sets = load_zero_sets(run_dir)
df = pd.concat(
    [zs.assign(replica=r) for r, zs in enumerate(zero_sets)], ignore_index=True
) if zero_sets else pd.DataFrame(columns=["re", "im", "multiplicity", "residual", "replica"])

fig, axes = plt.subplots(1, 2, figsize=(20, 9))
ax = axes[0]
ax.scatter(df["re"], df["im"], s=6, alpha=0.5, c=df["replica"], cmap="viridis")
if mode in ("window", "zeta_compare"):
    # phase boundaries in the beta-plane
    theta = np.linspace(np.pi / 4, 3 * np.pi / 4, 200)
    ax.plot(np.cos(theta), np.sin(theta), color="black", linewidth=1)
    s = np.linspace(2**-0.5, 2**0.5, 50)
    ax.plot(s, 2**0.5 - s, color="black", linewidth=1)
    ax.axvline(2**-0.5, color="black", linewidth=1, linestyle="--")
ax.set_xlabel("Re")
ax.set_ylabel("Im")
ax.set_title(f"Zeros ({mode})")

counts = df.groupby("replica")["multiplicity"].sum().reindex(range(len(zero_sets)), fill_value=0)
sns.histplot(counts, discrete=True, ax=axes[1])
axes[1].set_xlabel("Zeros per replica")
axes[1].set_title(f"{len(zero_sets)} replicas")
savefig(fig, run_dir, "zeros")
