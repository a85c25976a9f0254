from typing import Any, Dict

import numpy as np
import pandas as pd

from cremjax.analytic.gaf import gaf_zero_stats
from cremjax.experiments.base_experiment import BaseExperiment
from cremjax.time_measure import RuntimeMeter
from cremjax.types import ComplexParam


class GafExperiment(BaseExperiment):
    """Zero counts of the plane GAF in a disk, against the mean radius^2 of an intensity 1/pi process."""

    def run(self) -> Dict[str, Any]:
        radius = float(self.config_experiment["radius"])
        center = ComplexParam.parse(self.config_experiment.get("center", 0.0)).beta
        print(f"[GAF] Disk |t - {center}| <= {radius}, {self.replicas} replicas")
        with RuntimeMeter("gaf_zeros"):
            mean, counts = gaf_zero_stats(radius, self.replicas, self.seed, center=center, n_jobs=self.n_jobs)
        self.write_table(pd.DataFrame({"replica": np.arange(len(counts)), "count": counts}), "zero_counts")
        return {
            "radius": radius,
            "center": center,
            "mean_count": mean,
            "reference": radius**2,
            "metrics": self.aggregate_over_replicas([{"count": float(c)} for c in counts], "gaf"),
        }
