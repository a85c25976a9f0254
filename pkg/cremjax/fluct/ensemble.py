from typing import Optional

import numpy as np
import pandas as pd
from flax import struct
from joblib import Parallel, delayed

from cremjax.fluct.plans import NormalizationPlan, conjugate_plan, log_ratio
from cremjax.loggers import BaseLogger
from cremjax.partition.evaluation import eval_point
from cremjax.sampling.gaussian import gaussian_pairs
from cremjax.types import RemConfig


@struct.dataclass
class ReplicaEnsemble:
    """Normalized samples (Z_N(beta) - m_N) / v_N, one per replica, replica r drawn from stream r."""

    samples: np.ndarray = struct.field(pytree_node=False)
    config: RemConfig = struct.field(pytree_node=False)
    plan: NormalizationPlan = struct.field(pytree_node=False)

    def __len__(self) -> int:
        return len(self.samples)

    def conjugate(self) -> "ReplicaEnsemble":
        return self.replace(samples=np.conj(self.samples), plan=conjugate_plan(self.plan))

    def to_frame(self) -> pd.DataFrame:
        """CSV schema of an ensemble: replica, re, im."""
        return pd.DataFrame(
            {"replica": np.arange(len(self.samples)), "re": self.samples.real, "im": self.samples.imag}
        )


def normalized_sample(cfg: RemConfig, plan: NormalizationPlan, replica: int) -> complex:
    """(Z_N - m_N) / v_N for one replica, by differences of complex logarithms."""
    batch = gaussian_pairs(cfg, replica)
    value = eval_point(batch, cfg.n, plan.beta)
    log_z = complex(float(value.log_modulus), float(value.phase))
    return log_ratio(log_z, plan.log_v) - log_ratio(plan.log_m, plan.log_v)


def run_ensemble(
    plan: NormalizationPlan,
    cfg: RemConfig,
    replicas: int,
    n_jobs: int = 1,
    logger: Optional[BaseLogger] = None,
) -> ReplicaEnsemble:
    """Normalized samples of replicas 0..replicas-1; the output does not depend on n_jobs."""
    assert replicas >= 1, f"At least one replica is needed, got {replicas}"
    assert cfg.rho == plan.rho, f"Config rho {cfg.rho} differs from the plan rho {plan.rho}"
    assert abs(cfg.n - plan.n) <= 1e-12 * cfg.n, f"Config n {cfg.n} differs from the plan n {plan.n}"
    samples = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(normalized_sample)(cfg, plan, r) for r in range(replicas)
    )
    samples = np.asarray(samples, dtype=complex)
    if logger is not None:
        for r, sample in enumerate(samples):
            logger.log_scalars({"fluct/sample_re": sample.real, "fluct/sample_im": sample.imag}, timestep=r)
    return ReplicaEnsemble(samples=samples, config=cfg, plan=plan)
