from typing import Dict, List

import numpy as np

from cremjax.loggers import BaseLogger


class LoggerCLI(BaseLogger):
    """Prints the metrics of every `period`-th replica; arrays are summarized by size and mean."""

    def __init__(self, prefix: str = "[Metrics]", period: int = 1):
        self.prefix = prefix
        self.period = max(1, int(period))

    def log_scalars(self, dict_scalars: Dict[str, float], timestep: int):
        if timestep % self.period != 0:
            return
        formatted = ", ".join(f"{k}={float(v):.6g}" for k, v in dict_scalars.items())
        print(f"{self.prefix} replica {timestep} : {formatted}")

    def log_histograms(self, dict_histograms: Dict[str, List[float]], timestep: int):
        if timestep % self.period != 0:
            return
        for name, values in dict_histograms.items():
            values = np.asarray(values, dtype=float).ravel()
            finite = values[np.isfinite(values)]
            mean = f"{finite.mean():.6g}" if len(finite) > 0 else "nan"
            print(f"{self.prefix} replica {timestep} : {name} ({len(values)} values, mean {mean})")

    def close(self):
        pass
