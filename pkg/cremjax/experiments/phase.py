from typing import Any, Dict

import numpy as np
import pandas as pd

from cremjax.core.phases import classify, limit_p, limit_p_grid
from cremjax.experiments.base_experiment import BaseExperiment
from cremjax.partition.evaluation import eval_grid, grid_to_frame
from cremjax.sampling.gaussian import gaussian_pairs
from cremjax.time_measure import RuntimeMeter
from cremjax.types import ComplexParam, GridSpec, PhaseLabel


def phase_diagram_frame(grid: GridSpec) -> pd.DataFrame:
    """CSV schema of the phase diagram: sigma, tau, label, p (sigma-major)."""
    sigma_axis, tau_axis = grid.sigma_axis, grid.tau_axis
    labels = [
        classify(ComplexParam(sigma=float(s), tau=float(t)))
        for s in sigma_axis
        for t in tau_axis
    ]
    p = limit_p_grid(sigma_axis, tau_axis).ravel()
    # boundary nodes go through limit_p, which asserts the adjacent formulas agree
    for i, label in enumerate(labels):
        if label not in (PhaseLabel.B1, PhaseLabel.B2, PhaseLabel.B3):
            s, t = sigma_axis[i // len(tau_axis)], tau_axis[i % len(tau_axis)]
            p[i] = limit_p(ComplexParam(sigma=float(s), tau=float(t)))
    sigma, tau = np.meshgrid(sigma_axis, tau_axis, indexing="ij")
    return pd.DataFrame(
        {
            "sigma": sigma.ravel(),
            "tau": tau.ravel(),
            "label": [label.value for label in labels],
            "p": p,
        }
    )


class PhaseExperiment(BaseExperiment):
    """Phase labels and the limit p on a grid; optionally p_N of sampled replicas on the same grid."""

    def run(self) -> Dict[str, Any]:
        grid = GridSpec.parse(self.config_experiment["grid"])
        print(f"[Phase] Grid of shape {grid.shape}")
        with RuntimeMeter("phase_diagram"):
            df = phase_diagram_frame(grid)
        self.write_table(df, "phase_diagram")

        cell_area = grid.step**2
        label_counts = df["label"].value_counts().to_dict()
        summary = {
            "grid": grid,
            "n_rows": len(df),
            "label_counts": label_counts,
            "label_areas": {label: count * cell_area for label, count in label_counts.items()},
        }

        n_empirical = int(self.config_experiment.get("empirical_replicas", 0) or 0)
        if n_empirical > 0:
            cfg = self.get_rem_config()
            p_limit = df["p"].to_numpy()
            deviations = []
            for r in range(n_empirical):
                with RuntimeMeter("eval_grid"):
                    grid_eval = eval_grid(gaussian_pairs(cfg, r), cfg.n, grid, self.memory_budget_bytes)
                df_grid = grid_to_frame(grid_eval)
                self.write_table(df_grid, f"partition_grid_replica_{r:04d}")
                p_n = df_grid["log_modulus"].to_numpy() / cfg.n
                finite = np.isfinite(p_n)
                deviations.append({"abs_error_median": float(np.median(np.abs(p_n[finite] - p_limit[finite])))})
            summary["n"] = cfg.n
            summary["empirical"] = self.aggregate_over_replicas(deviations, "phase")
        return summary
