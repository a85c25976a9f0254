from typing import Dict

from tqdm import tqdm

from cremjax.loggers import BaseLogger


class LoggerTQDM(BaseLogger):
    """Progress over replicas; the postfix shows the latest scalars of the replica being logged."""

    def __init__(self, n_replicas: int, desc: str = "replicas", n_postfix: int = 3):
        self.progress_bar = tqdm(total=n_replicas, desc=desc)
        self.n_done = 0
        self.n_postfix = n_postfix

    def log_scalars(self, dict_scalars: Dict[str, float], timestep: int):
        n_done = timestep + 1
        if n_done > self.n_done:
            self.progress_bar.update(n_done - self.n_done)
            self.n_done = n_done
            postfix = {name: f"{float(value):.4g}" for name, value in list(dict_scalars.items())[: self.n_postfix]}
            self.progress_bar.set_postfix(postfix, refresh=False)

    def log_histograms(self, *args, **kwargs):
        pass

    def close(self):
        self.progress_bar.close()
