import csv
import os
from typing import Dict, List

import numpy as np

from cremjax.loggers import BaseLogger


class LoggerCSV(BaseLogger):
    """Long-format metrics table with columns timestep, metric_name, index, value.

    Scalars have an empty index, histogram entries their position in the array; NaN entries are
    dropped. Rows are flushed after every call so a run that fails its gate keeps its metrics.
    """

    columns = ["timestep", "metric_name", "index", "value"]

    def __init__(self, dir_metrics: str, filename: str = "metrics.csv"):
        os.makedirs(dir_metrics, exist_ok=True)
        self.path_metrics = os.path.join(dir_metrics, filename)
        self.file_metrics = open(self.path_metrics, "w", newline="", encoding="utf-8")
        self.writer = csv.writer(self.file_metrics)
        self.writer.writerow(self.columns)

    def log_scalars(self, dict_scalars: Dict[str, float], timestep: int):
        self.writer.writerows([timestep, name, "", float(value)] for name, value in dict_scalars.items())
        self.file_metrics.flush()

    def log_histograms(self, dict_histograms: Dict[str, List[float]], timestep: int):
        for name, values in dict_histograms.items():
            values = np.asarray(values, dtype=float).ravel()
            self.writer.writerows(
                [timestep, name, idx, value] for idx, value in enumerate(values) if not np.isnan(value)
            )
        self.file_metrics.flush()

    def close(self):
        if not self.file_metrics.closed:
            self.file_metrics.close()
