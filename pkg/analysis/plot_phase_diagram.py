"""Phase diagram and contour lines of p from the phase_diagram table of a phase run.

Usage: python -m analysis.plot_phase_diagram <run_dir>
"""

import sys

import numpy as np
import matplotlib.pyplot as plt

from analysis.utils import label_palette, load_table, savefig

run_dir = sys.argv[1] if len(sys.argv) > 1 else "logs"
df = load_table(run_dir, "phase_diagram")

sigma_axis = np.sort(df["sigma"].unique())
tau_axis = np.sort(df["tau"].unique())
p = df.pivot(index="tau", columns="sigma", values="p").loc[tau_axis, sigma_axis].to_numpy()

fig, ax = plt.subplots(figsize=(10, 10))
for label, df_label in df.groupby("label"):
    size = 1 if label in ("B1", "B2", "B3") else 4
    ax.scatter(df_label["sigma"], df_label["tau"], s=size, color=label_palette[label], label=label, rasterized=True)
contours = ax.contour(sigma_axis, tau_axis, p, levels=12, colors="white", linewidths=1)
ax.clabel(contours, fontsize=10)
ax.set_xlabel("sigma")
ax.set_ylabel("tau")
ax.set_title("Phases of the complex REM")
ax.set_aspect("equal")
ax.legend(markerscale=8, loc="upper right")
savefig(fig, run_dir, "phase_diagram")
