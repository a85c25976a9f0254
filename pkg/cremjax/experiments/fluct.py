from typing import Any, Dict, Optional

from cremjax.core.phases import limit_p
from cremjax.experiments.base_experiment import BaseExperiment
from cremjax.fluct import gates
from cremjax.fluct.ensemble import run_ensemble
from cremjax.fluct.plans import LimitKind, make_plan, plan_log_scale
from cremjax.time_measure import RuntimeMeter
from cremjax.types import ComplexParam


class FluctExperiment(BaseExperiment):
    """make_plan -> run_ensemble -> the gate of the plan's limit law.

    The samples and the report are written before the gate is enforced, so a failing run still
    leaves its evidence behind.
    """

    def run(self) -> Dict[str, Any]:
        beta = ComplexParam.parse(self.config_experiment["beta"])
        cfg = self.get_rem_config()
        centering: Optional[str] = self.config_experiment.get("centering", None)
        plan = make_plan(beta, cfg.rho, cfg.n, centering=centering)
        print(f"[Fluct] beta = {beta.beta}, rho = {cfg.rho}, case {plan.case_tag.value}, limit {plan.limit.kind.value}")

        with RuntimeMeter("ensemble"):
            ens = run_ensemble(plan, cfg, self.replicas, n_jobs=self.n_jobs)
        for r, sample in enumerate(ens.samples):
            self.log_metrics({"fluct/sample": sample}, timestep=r)
        self.write_table(ens.to_frame(), "samples")

        with RuntimeMeter("gate"):
            report = self._test(ens)
        summary = {
            "plan": plan.to_dict(),
            "case_tag": plan.case_tag.value,
            "log_scale": plan_log_scale(plan),
            "limit_p": limit_p(plan.beta),
            "report": report.to_dict() if report is not None else None,
        }
        self.write_json(summary, "report")
        if report is not None and self.config_experiment.get("enforce", True):
            gates.enforce(report)
        return summary

    def _test(self, ens) -> Optional[gates.LimitReport]:
        kind = ens.plan.limit.kind
        # thresholds per gate, e.g. gate.gaussian.p_threshold
        config_gate: Dict[str, Any] = self.config_experiment.get("gate", None) or {}
        kwargs_gate = lambda name: dict(config_gate.get(name, None) or {})
        if kind == LimitKind.ComplexGaussian:
            return gates.test_gaussian_limit(ens, **kwargs_gate("gaussian"))
        if kind == LimitKind.IsotropicStable:
            return gates.test_stable_limit(ens, **kwargs_gate("stable"))
        if kind == LimitKind.ZetaP:
            zeta_replicas = int(self.config_experiment.get("zeta_replicas", None) or self.replicas)
            return gates.test_zetap_limit(ens, zeta_replicas, n_jobs=self.n_jobs, **kwargs_gate("zetap"))
        print(f"[Fluct] No distributional gate for the limit {kind.value}")
        return None

