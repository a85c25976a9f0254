import math
from typing import Any, Callable, Dict, List

import numpy as np
import pandas as pd

from cremjax.core.xi_measure import bump_field, expected_zero_count, indicator_field, xi_integrate
from cremjax.errors import InsufficientZerosError
from cremjax.experiments.base_experiment import BaseExperiment
from cremjax.partition.frames import DEFAULT_BOUNDARY12_ANGLE, Frame, frame_map, partition_handle
from cremjax.sampling.gaussian import gaussian_pairs
from cremjax.time_measure import RuntimeMeter
from cremjax.types import ComplexParam, Rectangle
from cremjax.zeros.locate import ZeroSet, locate_zeros, zero_set_to_frame
from cremjax.zeros.statistics import (
    boundary_lattice_zeros,
    empirical_zero_measure,
    lattice_direction,
    lattice_spacing,
    local_zero_process,
    spacing_stats,
    zero_density_histogram,
    zetap_zero_compare,
)


class ZerosExperiment(BaseExperiment):
    """Zeros of Z_N (rho = 1) over independent replicas, in one of five modes:

    window        zero sets in a rectangle of the beta-plane and their density histogram
    local         zeros in the sqrt(n)-rescaled disk around a B3 point (GAF frame)
    boundary13    zero spacings along the B1|B3 arc
    boundary12    zero spacings along the B1|B2 line
    zeta_compare  zero counts in a B2 region against those of the Poisson zeta function
    """

    def run(self) -> Dict[str, Any]:
        mode = self.config_experiment["mode"]
        mode_to_method: Dict[str, Callable[[], Dict[str, Any]]] = {
            "window": self.run_window,
            "local": self.run_local,
            "boundary13": lambda: self.run_boundary(Frame.boundary13),
            "boundary12": lambda: self.run_boundary(Frame.boundary12),
            "zeta_compare": self.run_zeta_compare,
        }
        assert mode in mode_to_method, f"Unknown zeros mode {mode}, expected one of {list(mode_to_method)}"
        self.cfg = self.get_rem_config(rho=1.0)
        print(f"[Zeros] Mode {mode}, n = {self.cfg.n:.4f}, N = {self.cfg.N}, {self.replicas} replicas")
        summary = mode_to_method[mode]()
        summary["mode"] = mode
        summary["n"] = self.cfg.n
        summary["N"] = self.cfg.N
        return summary

    def _write_zero_sets(self, zero_sets: List[ZeroSet]):
        for r, zs in enumerate(zero_sets):
            self.write_table(zero_set_to_frame(zs), f"zeros_replica_{r:04d}")

    # ================ Modes ================

    def run_window(self) -> Dict[str, Any]:
        window = Rectangle.parse(self.config_experiment["window"])
        target = int(self.config_experiment.get("target_cell_zeros", 1))
        n = self.cfg.n
        zero_sets = []
        for r in range(self.replicas):
            batch = gaussian_pairs(self.cfg, r)
            h = partition_handle(batch, n, domain=window, reference_sigma=window.center.real)
            with RuntimeMeter("locate_zeros"):
                zero_sets.append(locate_zeros(h, window, target_cell_zeros=target, n_jobs=self.n_jobs))
        self._write_zero_sets(zero_sets)

        histogram = zero_density_histogram(zero_sets, window, int(self.config_experiment.get("bins", 4)), n)
        sigma_edges, tau_edges = histogram["sigma_edges"], histogram["tau_edges"]
        i, j = np.meshgrid(np.arange(len(sigma_edges) - 1), np.arange(len(tau_edges) - 1), indexing="ij")
        self.write_table(
            pd.DataFrame(
                {
                    "sigma_lo": sigma_edges[i.ravel()],
                    "sigma_hi": sigma_edges[i.ravel() + 1],
                    "tau_lo": tau_edges[j.ravel()],
                    "tau_hi": tau_edges[j.ravel() + 1],
                    "density": histogram["density"].ravel(),
                }
            ),
            "zero_density",
        )

        counts = np.array([zs.total_multiplicity for zs in zero_sets])
        measures = [{"count": float(c)} for c in counts]
        summary = {
            "window": window,
            "counts": counts,
            "mean_count": float(counts.mean()),
            "fraction_empty": float(np.mean(counts == 0)),
            "expected_count": expected_zero_count(indicator_field(window), n),
            "b3_reference_density": histogram["b3_reference"],
        }
        # the weighted count of a smooth bump fitting in the window, against its limit Xi(f) / (2 pi)
        radius = 0.5 * min(window.width, window.height)
        bump = bump_field(window.center, radius * (1 - 1e-9))
        measures_bump = [empirical_zero_measure(zs, bump, n) for zs in zero_sets]
        summary["bump_measure_mean"] = float(np.mean(measures_bump))
        summary["bump_measure_limit"] = xi_integrate(bump).value / (2 * math.pi)
        summary["metrics"] = self.aggregate_over_replicas(measures, "zeros")
        return summary

    def run_local(self) -> Dict[str, Any]:
        beta0 = ComplexParam.parse(self.config_experiment["beta0"])
        radius = float(self.config_experiment["radius"])
        zero_sets = []
        for r in range(self.replicas):
            batch = gaussian_pairs(self.cfg, r)
            with RuntimeMeter("locate_zeros"):
                zero_sets.append(local_zero_process(batch, self.cfg.n, beta0, radius))
        self._write_zero_sets(zero_sets)
        counts = np.array([zs.total_multiplicity for zs in zero_sets])
        return {
            "beta0": beta0.beta,
            "radius": radius,
            "counts": counts,
            "mean_count": float(counts.mean()),
            "gaf_reference": radius**2,
            "metrics": self.aggregate_over_replicas([{"count": float(c)} for c in counts], "zeros"),
        }

    def run_boundary(self, frame: Frame) -> Dict[str, Any]:
        beta0 = ComplexParam.parse(self.config_experiment["beta0"])
        periods = int(self.config_experiment.get("periods", 6))
        half_width = float(self.config_experiment.get("half_width", 6.0))
        band = self.config_experiment.get("band", None)
        angle = float(self.config_experiment.get("angle", DEFAULT_BOUNDARY12_ANGLE))
        n = self.cfg.n
        direction = lattice_direction(beta0, n, frame, angle)
        _, scale = frame_map(beta0, n, frame, angle)
        zero_sets, medians = [], []
        rows = []
        for r in range(self.replicas):
            batch = gaussian_pairs(self.cfg, r)
            with RuntimeMeter("locate_zeros"):
                zs = boundary_lattice_zeros(batch, n, beta0, frame, periods, half_width, angle)
            zero_sets.append(zs)
            try:
                gaps = spacing_stats(zs, direction, band=band) * abs(scale)
            except InsufficientZerosError:
                print(f"[Zeros] Replica {r}: fewer than 3 zeros in the lattice window, skipped")
                continue
            medians.append(float(np.median(gaps)))
            rows.extend({"replica": r, "gap": float(g)} for g in gaps)
        self._write_zero_sets(zero_sets)
        self.write_table(pd.DataFrame(rows, columns=["replica", "gap"]), "spacings")

        predicted = lattice_spacing(beta0, n, frame, angle, coordinate="beta")
        median = float(np.median(medians)) if medians else float("nan")
        return {
            "frame": frame.value,
            "beta0": beta0.beta,
            "angle": angle,
            "replicas_used": len(medians),
            "median_spacing": median,
            "predicted_spacing": predicted,
            "relative_error": abs(median - predicted) / predicted,
            "metrics": self.aggregate_over_replicas([{"median_gap": m} for m in medians], "zeros"),
        }

    def run_zeta_compare(self) -> Dict[str, Any]:
        region = Rectangle.parse(self.config_experiment["region"])
        tol = float(self.config_experiment.get("tol", 1e-3))
        with RuntimeMeter("zeta_compare"):
            summary = zetap_zero_compare(self.cfg, region, self.replicas, tol=tol, n_jobs=self.n_jobs)
        self.write_table(
            pd.DataFrame(
                {
                    "replica": np.arange(self.replicas),
                    "count_rem": summary["counts_rem"],
                    "count_zeta": summary["counts_zeta"],
                    "count_mirror": summary["counts_mirror"],
                }
            ),
            "zero_counts",
        )
        return summary
