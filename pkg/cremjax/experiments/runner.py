import datetime
import os
import sys
from typing import Any, Dict, List

from omegaconf import OmegaConf

import cremjax
from cremjax.experiments import experiment_name_to_ExperimentClass
from cremjax.experiments.manifest import RunManifest
from cremjax.loggers import BaseLogger
from cremjax.loggers.cli import LoggerCLI
from cremjax.loggers.csv import LoggerCSV
from cremjax.loggers.snakeviz import LoggerSnakeviz
from cremjax.loggers.tensorboard import LoggerTensorboard
from cremjax.loggers.tqdm import LoggerTQDM
from cremjax.time_measure import RuntimeMeter, get_runtime_metrics
from cremjax.types import Purpose
from cremjax.utils import try_get, try_get_seed


class Runner:
    """Runs the experiment selected by config["experiment"]["name"] and writes its manifest."""

    def __init__(self, config: Dict[str, Any]):
        self.config = config

    def run(self) -> RunManifest:
        experiment_name = self.config["experiment"]["name"]
        assert (
            experiment_name in experiment_name_to_ExperimentClass
        ), f"Unknown experiment {experiment_name}, expected one of {list(experiment_name_to_ExperimentClass)}"

        # ================ Initialization ================
        # Seed
        seed = try_get_seed(self.config)
        self.config["seed"] = seed
        print(f"[Runner] Using seed: {seed}")

        # Run name
        run_name = f"[{experiment_name}]_{datetime.datetime.now().strftime('%dth%mmo_%Hh%Mmin%Ss')}_seed{seed}"
        run_name = try_get(self.config, "run_name", run_name)
        self.config["run_name"] = run_name

        out_dir = try_get(self.config, "out_dir", "./logs")
        if not self.config.get("do_global_log", False):
            out_dir = os.path.join(out_dir, run_name)
        os.makedirs(out_dir, exist_ok=True)
        print(f"[Runner] Output dir: {out_dir}")
        OmegaConf.save(OmegaConf.create(self.config), os.path.join(out_dir, "config.yaml"))

        manifest = RunManifest(
            command=" ".join(sys.argv),
            config=self.config,
            tool_version=cremjax.__version__,
            started=datetime.datetime.now().isoformat(),
            seed_path={
                "seed": seed,
                "replicas": int(try_get(self.config, "replicas", 1)),
                "purposes": [purpose.name for purpose in Purpose],
            },
        )

        # Loggers
        list_loggers: List[BaseLogger] = []
        if self.config.get("do_cli", False):
            list_loggers.append(LoggerCLI())
        if self.config.get("do_csv", False):
            list_loggers.append(LoggerCSV(dir_metrics=out_dir))
        if self.config.get("do_tqdm", False):
            list_loggers.append(LoggerTQDM(n_replicas=int(try_get(self.config, "replicas", 1))))
        if self.config.get("do_tb", False):
            list_loggers.append(LoggerTensorboard(log_dir=os.path.join(out_dir, "tensorboard")))
        if self.config.get("do_snakeviz", False):
            list_loggers.append(LoggerSnakeviz(dir_profile=out_dir))

        # ================ Experiment ================
        RuntimeMeter.reset()
        ExperimentClass = experiment_name_to_ExperimentClass[experiment_name]
        experiment = ExperimentClass(config=self.config, out_dir=out_dir, list_loggers=list_loggers)
        try:
            with RuntimeMeter("total_experiment"):
                summary = experiment.run()
            experiment.write_json(summary, "summary")
            manifest.status = "success"
        except Exception as e:
            manifest.status = f"failed: {type(e).__name__}"
            raise
        finally:
            runtime_metrics = get_runtime_metrics()
            for logger in list_loggers:
                logger.log_scalars(runtime_metrics, timestep=0)
                logger.close()
            manifest.runtime = runtime_metrics
            manifest.finished = datetime.datetime.now().isoformat()
            manifest.record_outputs(out_dir, experiment.output_files)
            manifest.save(os.path.join(out_dir, "manifest.json"))
            print(f"[Runner] Manifest written, status {manifest.status}")
        return manifest

