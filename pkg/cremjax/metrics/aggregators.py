from abc import ABC, abstractmethod
from typing import Any, Dict, List

import numpy as np
from flax.struct import PyTreeNode


class Metric(PyTreeNode):
    """A class to represent the running state of an aggregator. It should be a PyTreeNode."""


class RunningMoments(Metric):
    count: np.ndarray
    mean: np.ndarray
    m2: np.ndarray


class RunningExtremes(Metric):
    minimum: np.ndarray
    maximum: np.ndarray


class Aggregator(ABC):
    """Aggregates per-replica measures into running statistics over replicas.

    Config keys:
        keys_measures: the names of the measures to aggregate
        prefix_metric: the prefix of the produced metric names
    """

    def __init__(self, config: Dict[str, Any]):
        self.config: Dict[str, Any] = config
        self.keys_measures: List[str] = list(config["keys_measures"])
        self.prefix_metric: str = config["prefix_metric"]

    @abstractmethod
    def get_initial_metrics(self) -> Metric:
        """Return the initial metric object of the aggregator."""
        raise NotImplementedError

    @abstractmethod
    def update_metrics(
        self,
        metrics: Metric,
        dict_measures: Dict[str, float],
    ) -> Metric:
        """Return the metrics updated with the measures of one more replica."""
        raise NotImplementedError

    @abstractmethod
    def get_dict_metrics(self, metrics: Metric) -> Dict[str, float]:
        """Return the metrics of the aggregator as a dictionnary."""
        return {}

    def _vector(self, dict_measures: Dict[str, float]) -> np.ndarray:
        return np.array(
            [float(dict_measures.get(k, np.nan)) for k in self.keys_measures]
        )


class AggregatorReplicaMean(Aggregator):
    """Running mean over replicas, NaN measures are skipped."""

    def get_initial_metrics(self) -> RunningMoments:
        zeros = np.zeros(len(self.keys_measures))
        return RunningMoments(count=zeros.copy(), mean=zeros.copy(), m2=zeros.copy())

    def update_metrics(
        self,
        metrics: RunningMoments,
        dict_measures: Dict[str, float],
    ) -> RunningMoments:
        x = self._vector(dict_measures)
        valid = ~np.isnan(x)
        count = metrics.count + valid
        delta = np.where(valid, x - metrics.mean, 0.0)
        mean = metrics.mean + np.where(valid, delta / np.maximum(count, 1), 0.0)
        # Welford update of the sum of squared deviations
        m2 = metrics.m2 + np.where(valid, delta * (np.where(valid, x, 0.0) - mean), 0.0)
        return metrics.replace(count=count, mean=mean, m2=m2)

    def get_dict_metrics(self, metrics: RunningMoments) -> Dict[str, float]:
        return {
            f"{self.prefix_metric}/{name}_mean": (
                float(metrics.mean[i]) if metrics.count[i] > 0 else np.nan
            )
            for i, name in enumerate(self.keys_measures)
        }


class AggregatorReplicaStd(AggregatorReplicaMean):
    """Running standard deviation and standard error of the mean over replicas."""

    def get_dict_metrics(self, metrics: RunningMoments) -> Dict[str, float]:
        dict_metrics = {}
        for i, name in enumerate(self.keys_measures):
            count = metrics.count[i]
            std = np.sqrt(metrics.m2[i] / (count - 1)) if count > 1 else np.nan
            dict_metrics[f"{self.prefix_metric}/{name}_std"] = float(std)
            dict_metrics[f"{self.prefix_metric}/{name}_sem"] = (
                float(std / np.sqrt(count)) if count > 1 else np.nan
            )
        return dict_metrics


class AggregatorReplicaExtremes(Aggregator):
    """Running minimum and maximum over replicas."""

    def get_initial_metrics(self) -> RunningExtremes:
        n_measures = len(self.keys_measures)
        return RunningExtremes(
            minimum=np.full(n_measures, np.inf), maximum=np.full(n_measures, -np.inf)
        )

    def update_metrics(
        self,
        metrics: RunningExtremes,
        dict_measures: Dict[str, float],
    ) -> RunningExtremes:
        x = self._vector(dict_measures)
        return metrics.replace(
            minimum=np.fmin(metrics.minimum, x), maximum=np.fmax(metrics.maximum, x)
        )

    def get_dict_metrics(self, metrics: RunningExtremes) -> Dict[str, float]:
        dict_metrics = {}
        for i, name in enumerate(self.keys_measures):
            dict_metrics[f"{self.prefix_metric}/{name}_min"] = float(metrics.minimum[i])
            dict_metrics[f"{self.prefix_metric}/{name}_max"] = float(metrics.maximum[i])
        return dict_metrics
