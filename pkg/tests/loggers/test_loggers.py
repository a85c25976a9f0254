import numpy as np
import pandas as pd
import pytest

from cremjax.loggers.cli import LoggerCLI
from cremjax.loggers.csv import LoggerCSV
from cremjax.metrics import aggregator_name_to_AggregatorClass
from cremjax.metrics.aggregators import (
    AggregatorReplicaExtremes,
    AggregatorReplicaMean,
    AggregatorReplicaStd,
)
from cremjax.metrics.utils import get_dict_metrics_by_type
from cremjax.time_measure import RuntimeMeter, get_runtime_metrics


class TestAggregators:

    @classmethod
    def setup_class(cls):
        cls.config = {"keys_measures": ["count", "gap"], "prefix_metric": "zeros"}
        cls.measures = [
            {"count": 2.0, "gap": 1.0},
            {"count": 4.0, "gap": np.nan},
            {"count": 3.0, "gap": 3.0},
        ]

    def run(self, AggregatorClass):
        aggregator = AggregatorClass(self.config)
        metrics = aggregator.get_initial_metrics()
        for measures in self.measures:
            metrics = aggregator.update_metrics(metrics, measures)
        return aggregator.get_dict_metrics(metrics)

    def test_registry(self):
        assert set(aggregator_name_to_AggregatorClass) == {"mean", "std", "extremes"}

    def test_mean_skips_nan(self):
        metrics = self.run(AggregatorReplicaMean)
        assert metrics["zeros/count_mean"] == pytest.approx(3.0)
        assert metrics["zeros/gap_mean"] == pytest.approx(2.0), "NaN measures are skipped"

    def test_std(self):
        metrics = self.run(AggregatorReplicaStd)
        assert metrics["zeros/count_std"] == pytest.approx(np.std([2.0, 4.0, 3.0], ddof=1))
        assert metrics["zeros/count_sem"] == pytest.approx(np.std([2.0, 4.0, 3.0], ddof=1) / np.sqrt(3))
        assert metrics["zeros/gap_std"] == pytest.approx(np.std([1.0, 3.0], ddof=1))

    def test_extremes(self):
        metrics = self.run(AggregatorReplicaExtremes)
        assert metrics["zeros/count_min"] == 2.0 and metrics["zeros/count_max"] == 4.0
        assert metrics["zeros/gap_min"] == 1.0 and metrics["zeros/gap_max"] == 3.0

    def test_empty_mean_is_nan(self):
        aggregator = AggregatorReplicaMean(self.config)
        assert np.isnan(aggregator.get_dict_metrics(aggregator.get_initial_metrics())["zeros/count_mean"])


class TestMetricTypes:

    def test_split(self):
        scalars, histograms = get_dict_metrics_by_type(
            {"a": 1, "z": 1.0 + 2.0j, "h": [1.0, 2.0], "hz": np.array([1j, 2.0])}
        )
        assert scalars == {"a": 1.0, "z/re": 1.0, "z/im": 2.0}
        assert set(histograms) == {"h", "hz/re", "hz/im"}
        assert np.array_equal(histograms["hz/im"], [1.0, 0.0])


class TestLoggers:

    def test_csv(self, tmp_path):
        logger = LoggerCSV(dir_metrics=str(tmp_path), filename="m.csv")
        logger.log_scalars({"a": 1.5, "b": 2}, timestep=0)
        logger.log_histograms({"h": [1.0, np.nan, 3.0]}, timestep=1)
        logger.close()
        frame = pd.read_csv(tmp_path / "m.csv")
        assert list(frame.columns) == ["timestep", "metric_name", "index", "value"]
        assert len(frame) == 4, "NaN histogram entries are dropped"
        assert list(frame[frame["metric_name"] == "h"]["index"]) == [0, 2]

    def test_cli(self, capsys):
        logger = LoggerCLI(prefix="[Test]", period=2)
        logger.log_scalars({"x": 1.0}, timestep=1)
        logger.log_scalars({"x": 2.0}, timestep=2)
        logger.close()
        out = capsys.readouterr().out
        assert "replica 1" not in out and "[Test] replica 2 : x=2" in out

    def test_log_metrics_dispatch(self, tmp_path):
        logger = LoggerCSV(dir_metrics=str(tmp_path))
        logger.log_metrics({"fluct/sample": 1.0 - 2.0j, "zeros/gaps": np.array([0.5, 0.7])}, timestep=3)
        frame = pd.read_csv(tmp_path / "metrics.csv")
        logger.close()
        names = set(frame["metric_name"])
        assert names == {"fluct/sample/re", "fluct/sample/im", "zeros/gaps"}, f"names {names}"
        assert frame[frame["metric_name"] == "fluct/sample/im"]["value"].item() == -2.0
        assert (frame["timestep"] == 3).all(), "Every row carries the replica index"

    def test_cli_histogram_summary(self, capsys):
        logger = LoggerCLI(prefix="[Test]")
        logger.log_histograms({"zeros/gaps": [1.0, 3.0, np.nan]}, timestep=0)
        out = capsys.readouterr().out
        assert "zeros/gaps (3 values, mean 2)" in out, f"output {out!r}"


class TestRuntimeMeter:

    @classmethod
    def setup_class(cls):
        RuntimeMeter.reset()
        for _ in range(3):
            with RuntimeMeter("locate_zeros"):
                pass
        with RuntimeMeter("eval_grid", n_calls=4):
            pass

    def test_metrics(self):
        metrics = get_runtime_metrics()
        for stage in ("locate_zeros", "eval_grid"):
            for suffix in ("", "_avg", "_last"):
                assert f"runtime/{stage}{suffix}" in metrics, f"runtime/{stage}{suffix} missing"
        assert metrics["runtime/eval_grid_avg"] == pytest.approx(metrics["runtime/eval_grid"] / 4)
        assert RuntimeMeter.stage_name_to_num_calls["locate_zeros"] == 3

    def test_unknown_stage(self):
        assert RuntimeMeter.get_stage_runtime("unknown") == 0.0
        assert RuntimeMeter.get_averaged_stage_runtime("unknown") == 0.0
        assert RuntimeMeter.get_last_stage_runtime("unknown") is None
