import os
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

import pandas as pd

from cremjax.loggers import BaseLogger
from cremjax.metrics import aggregator_name_to_AggregatorClass
from cremjax.partition.evaluation import DEFAULT_MEMORY_BUDGET, make_rem_config
from cremjax.types import RemConfig
from cremjax.utils import dump_json, try_get


class BaseExperiment(ABC):
    """The base class of every experiment a run can execute.

    An experiment reads its own parameters from config["experiment"] and the run-wide keys (seed, n,
    N, rho, replicas, n_jobs, format) from the top level of the config. Every file it emits goes
    through `write_table` or `write_json`, so that the run manifest can digest it.
    """

    def __init__(
        self,
        config: Dict[str, Any],
        out_dir: str,
        list_loggers: Optional[List[BaseLogger]] = None,
    ):
        self.config = config
        self.config_experiment: Dict[str, Any] = config["experiment"]
        self.out_dir = out_dir
        self.list_loggers = list_loggers if list_loggers is not None else []
        self.seed: int = int(config["seed"])
        self.replicas: int = int(try_get(config, "replicas", 1))
        self.n_jobs: int = int(try_get(config, "n_jobs", 1))
        self.format: str = try_get(config, "format", "csv")
        assert self.format in ("csv", "json"), f"Unknown output format {self.format}"
        self.memory_budget_bytes: int = int(try_get(config, "memory_budget_bytes", DEFAULT_MEMORY_BUDGET))
        self.output_files: List[str] = []
        os.makedirs(out_dir, exist_ok=True)

    @abstractmethod
    def run(self) -> Dict[str, Any]:
        """Run the experiment, write its files and return its summary.

        Raises:
            GatedTestFailure: if a gated statistical test of the experiment fails
        """
        raise NotImplementedError

    # ================ Helpers ================

    def get_rem_config(self, rho: Optional[float] = None) -> RemConfig:
        return make_rem_config(
            n=self.config.get("n", None),
            N=self.config.get("N", None),
            rho=float(self.config["rho"]) if rho is None else float(rho),
            seed=self.seed,
            allow_large_n=bool(try_get(self.config, "allow_large_n", False)),
        )

    def write_table(self, df: pd.DataFrame, name: str) -> str:
        """Write a table as <name>.csv or <name>.json (records) depending on the run format."""
        path = os.path.join(self.out_dir, f"{name}.{self.format}")
        if self.format == "csv":
            df.to_csv(path, index=False)
        else:
            df.to_json(path, orient="records", indent=2)
        self.output_files.append(path)
        return path

    def write_json(self, obj: Any, name: str) -> str:
        path = os.path.join(self.out_dir, f"{name}.json")
        dump_json(obj, path)
        self.output_files.append(path)
        return path

    def log_metrics(self, metrics: Dict[str, Any], timestep: int):
        for logger in self.list_loggers:
            logger.log_metrics(metrics, timestep)

    def aggregate_over_replicas(
        self, measures_per_replica: List[Dict[str, float]], prefix_metric: str
    ) -> Dict[str, float]:
        """Log each replica's measures, then return their mean, std and extremes over replicas."""
        if len(measures_per_replica) == 0:
            return {}
        keys_measures = list(measures_per_replica[0])
        aggregators = [
            AggregatorClass({"keys_measures": keys_measures, "prefix_metric": prefix_metric})
            for AggregatorClass in aggregator_name_to_AggregatorClass.values()
        ]
        list_metrics = [aggregator.get_initial_metrics() for aggregator in aggregators]
        for r, measures in enumerate(measures_per_replica):
            self.log_metrics({f"{prefix_metric}/{k}": v for k, v in measures.items()}, timestep=r)
            list_metrics = [
                aggregator.update_metrics(metrics, measures)
                for aggregator, metrics in zip(aggregators, list_metrics)
            ]
        dict_metrics = {}
        for aggregator, metrics in zip(aggregators, list_metrics):
            dict_metrics.update(aggregator.get_dict_metrics(metrics))
        return dict_metrics
