from collections import defaultdict
from typing import Dict, List

import numpy as np
from tensorboardX import SummaryWriter

from cremjax.loggers import BaseLogger


class LoggerTensorboard(BaseLogger):
    """Scalars and histograms per replica. The "<name>/re" and "<name>/im" parts of a complex metric
    are drawn on one chart named <name>."""

    def __init__(self, log_dir: str):
        self.writer = SummaryWriter(log_dir=log_dir)

    def log_scalars(self, dict_scalars: Dict[str, float], timestep: int):
        complex_parts: Dict[str, Dict[str, float]] = defaultdict(dict)
        for name, value in dict_scalars.items():
            base, _, part = name.rpartition("/")
            if part in ("re", "im") and base:
                complex_parts[base][part] = float(value)
            else:
                self.writer.add_scalar(name, float(value), timestep)
        for base, parts in complex_parts.items():
            self.writer.add_scalars(base, parts, timestep)

    def log_histograms(self, dict_histograms: Dict[str, List[float]], timestep: int):
        for name, values in dict_histograms.items():
            values = np.asarray(values, dtype=float).ravel()
            values = values[np.isfinite(values)]
            if len(values) > 0:
                self.writer.add_histogram(name, values, timestep)

    def close(self):
        self.writer.close()
