import cProfile
import os
import pstats

from cremjax.loggers import BaseLogger


class LoggerSnakeviz(BaseLogger):
    """Profiles the run from its creation to close(), then prints the costliest calls.

    Open the dump with `snakeviz <out_dir>/profile_stats.prof`.
    """

    def __init__(self, dir_profile: str = "logs", n_top: int = 10):
        os.makedirs(dir_profile, exist_ok=True)
        self.path_profile = os.path.join(dir_profile, "profile_stats.prof")
        self.n_top = n_top
        self.profiler = cProfile.Profile()
        self.profiler.enable()

    def log_scalars(self, *args, **kwargs):
        pass

    def log_histograms(self, *args, **kwargs):
        pass

    def close(self):
        self.profiler.disable()
        self.profiler.dump_stats(self.path_profile)
        print(f"[Profile] Profile stats dumped to {self.path_profile}, top {self.n_top} by cumulative time:")
        pstats.Stats(self.path_profile).sort_stats(pstats.SortKey.CUMULATIVE).print_stats(self.n_top)
