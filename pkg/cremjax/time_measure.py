import threading
import time
from collections import defaultdict
from typing import Dict, Optional


class RuntimeMeter:
    """Context manager accumulating wall-clock time per named stage.

    with RuntimeMeter("sampling"):
        batch = gaussian_pairs(cfg, stream)
    with RuntimeMeter("evaluation"):
        value = eval_point(batch, n, beta)

    Timings are class-level so every meter with the same stage name adds to
    the same counters, including meters opened in joblib worker threads;
    `reset()` clears them between runs.
    """

    stage_name_to_cum_runtime: Dict[str, float] = defaultdict(float)
    stage_name_to_last_runtime: Dict[str, Optional[float]] = {}
    stage_name_to_num_calls: Dict[str, int] = defaultdict(int)
    lock = threading.Lock()

    def __init__(self, stage_name: str, n_calls: int = 1):
        self.stage_name = stage_name
        self.n_calls = n_calls

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        elapsed = time.perf_counter() - self.start_time
        with RuntimeMeter.lock:
            RuntimeMeter.stage_name_to_cum_runtime[self.stage_name] += elapsed
            RuntimeMeter.stage_name_to_last_runtime[self.stage_name] = elapsed
            RuntimeMeter.stage_name_to_num_calls[self.stage_name] += self.n_calls

    @staticmethod
    def get_stage_runtime(stage_name: str) -> float:
        """Cumulative runtime of a stage; "total" sums all stages, unknown stages give 0."""
        if stage_name == "total":
            return sum(RuntimeMeter.stage_name_to_cum_runtime.values())
        return RuntimeMeter.stage_name_to_cum_runtime.get(stage_name, 0.0)

    @staticmethod
    def get_averaged_stage_runtime(stage_name: str) -> float:
        n_calls = RuntimeMeter.stage_name_to_num_calls.get(stage_name, 0)
        if n_calls == 0:
            return 0.0
        return RuntimeMeter.stage_name_to_cum_runtime[stage_name] / n_calls

    @staticmethod
    def get_last_stage_runtime(stage_name: str) -> Optional[float]:
        return RuntimeMeter.stage_name_to_last_runtime.get(stage_name, None)

    @staticmethod
    def reset():
        RuntimeMeter.stage_name_to_cum_runtime.clear()
        RuntimeMeter.stage_name_to_last_runtime.clear()
        RuntimeMeter.stage_name_to_num_calls.clear()


def get_runtime_metrics() -> Dict[str, float]:
    """Flat dict runtime/<stage>, runtime/<stage>_avg and runtime/<stage>_last for every stage."""
    dict_runtime_metrics = {}
    for stage_name in list(RuntimeMeter.stage_name_to_cum_runtime):
        dict_runtime_metrics[f"runtime/{stage_name}"] = RuntimeMeter.get_stage_runtime(stage_name)
        dict_runtime_metrics[f"runtime/{stage_name}_avg"] = RuntimeMeter.get_averaged_stage_runtime(stage_name)
        time_last_call = RuntimeMeter.get_last_stage_runtime(stage_name)
        if time_last_call is not None:
            dict_runtime_metrics[f"runtime/{stage_name}_last"] = time_last_call
    return dict_runtime_metrics
