from abc import ABC, abstractmethod
from typing import Any, Dict, List

from cremjax.metrics.utils import get_dict_metrics_by_type


class BaseLogger(ABC):
    """A sink for the per-replica metrics of a run. The timestep is the replica index, or 0 for
    run-level metrics such as runtimes."""

    @abstractmethod
    def log_scalars(self, dict_scalars: Dict[str, float], timestep: int):
        raise NotImplementedError

    @abstractmethod
    def log_histograms(self, dict_histograms: Dict[str, List[float]], timestep: int):
        """Log arrays of values, e.g. the zero gaps of one replica."""
        raise NotImplementedError

    @abstractmethod
    def close(self):
        raise NotImplementedError

    def log_metrics(self, dict_metrics: Dict[str, Any], timestep: int):
        """Split mixed metrics (real, complex, arrays) and dispatch them to log_scalars and log_histograms."""
        dict_scalars, dict_histograms = get_dict_metrics_by_type(dict_metrics)
        if len(dict_scalars) > 0:
            self.log_scalars(dict_scalars, timestep)
        if len(dict_histograms) > 0:
            self.log_histograms(dict_histograms, timestep)
