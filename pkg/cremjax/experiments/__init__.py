from typing import Dict, Type

from cremjax.experiments.base_experiment import BaseExperiment
from cremjax.experiments.fluct import FluctExperiment
from cremjax.experiments.gaf import GafExperiment
from cremjax.experiments.phase import PhaseExperiment
from cremjax.experiments.zeros import ZerosExperiment
from cremjax.experiments.zeta import ZetaExperiment

experiment_name_to_ExperimentClass: Dict[str, Type[BaseExperiment]] = {
    "phase": PhaseExperiment,
    "zeros": ZerosExperiment,
    "fluct": FluctExperiment,
    "zeta": ZetaExperiment,
    "gaf": GafExperiment,
}
