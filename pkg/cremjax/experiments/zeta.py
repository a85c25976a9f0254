import math
from typing import Any, Dict, Tuple

import numpy as np
import pandas as pd

from cremjax.analytic.zeta import (
    sample_zetap,
    zetap_capped_horizon,
    zetap_eval,
    zetap_tail_sd,
    zetap_tail_variance,
    zetap_tilde_eval,
    zetap_zero_intensity,
)
from cremjax.experiments.base_experiment import BaseExperiment
from cremjax.time_measure import RuntimeMeter
from cremjax.types import ComplexParam, Rectangle, SeedPath


class ZetaExperiment(BaseExperiment):
    """Sample-and-evaluate utility for the Poisson zeta function.

    mode "eval": every replica draws arrivals up to the horizon and evaluates zeta_P (or zeta~_P when
    tilde is set) at each beta of the list. mode "zeros": zero intensity in a strip.
    The horizon is experiment.horizon, or the smallest one whose tail standard deviation at the
    smallest Re(beta) is below experiment.tol.
    """

    def run(self) -> Dict[str, Any]:
        mode = self.config_experiment.get("mode", "eval")
        if mode == "zeros":
            return self.run_zeros()
        assert mode == "eval", f"Unknown zeta mode {mode}"
        betas = [ComplexParam.parse(b).beta for b in self.config_experiment["betas"]]
        tilde = bool(self.config_experiment.get("tilde", False))
        sigma_min = min(b.real for b in betas)
        horizon, tol_met = self._horizon(sigma_min)
        print(f"[Zeta] {len(betas)} points, horizon T = {horizon:.4g}, {self.replicas} replicas")

        rows = []
        for r in range(self.replicas):
            with RuntimeMeter("zetap"):
                sample = sample_zetap(horizon, SeedPath(seed=self.seed, replica=r))
                values = (zetap_tilde_eval if tilde else zetap_eval)(sample, np.array(betas))
            for beta, value in zip(betas, values):
                rows.append(
                    {
                        "replica": r,
                        "beta_re": beta.real,
                        "beta_im": beta.imag,
                        "re": value.real,
                        "im": value.imag,
                        "tail_sd": zetap_tail_sd(sample, beta),
                    }
                )
        df = pd.DataFrame(rows)
        self.write_table(df, "zetap_values")
        means = df.groupby(["beta_re", "beta_im"])[["re", "im"]].mean().reset_index()
        return {
            "mode": mode,
            "horizon": horizon,
            "tol_met": tol_met,
            "tail_sd": math.sqrt(zetap_tail_variance(sigma_min, horizon)),
            "tilde": tilde,
            "means": means.to_dict(orient="records"),
        }

    def run_zeros(self) -> Dict[str, Any]:
        strip = Rectangle.parse(self.config_experiment["strip"])
        tol = float(self.config_experiment.get("tol", 1e-2))
        with RuntimeMeter("zetap_zeros"):
            summary = zetap_zero_intensity(
                self.replicas,
                strip,
                self.seed,
                tol=tol,
                horizon=self.config_experiment.get("horizon", None),
                n_jobs=self.n_jobs,
            )
        self.write_table(
            pd.DataFrame({"replica": np.arange(self.replicas), "count": summary["counts"]}),
            "zero_counts",
        )
        summary["mode"] = "zeros"
        summary["strip"] = strip
        return summary

    def _horizon(self, sigma_min: float) -> Tuple[float, bool]:
        """The horizon, and whether its tail standard deviation at sigma_min is within experiment.tol."""
        horizon = self.config_experiment.get("horizon", None)
        tol = float(self.config_experiment.get("tol", 1e-3))
        if horizon is not None:
            horizon = float(horizon)
            return horizon, math.sqrt(zetap_tail_variance(sigma_min, horizon)) <= tol
        return zetap_capped_horizon(complex(sigma_min, 0.0), tol)
