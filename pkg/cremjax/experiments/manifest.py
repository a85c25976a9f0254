import copy
import json
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from cremjax.utils import dump_json, sha256_file


@dataclass
class RunManifest:
    """Everything needed to audit and re-execute a run.

    digests maps each emitted file, relative to the run directory, to its sha256; config.yaml, the
    logger files and the manifest itself are not digested, as they hold run names and timings.
    """

    command: str
    config: Dict[str, Any]
    tool_version: str
    started: str
    finished: Optional[str] = None
    status: str = "running"
    seed_path: Dict[str, Any] = field(default_factory=dict)
    runtime: Dict[str, float] = field(default_factory=dict)
    digests: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def record_outputs(self, out_dir: str, paths: List[str]):
        for path in paths:
            self.digests[os.path.relpath(path, out_dir)] = sha256_file(path)

    def save(self, path: str):
        dump_json(self.to_dict(), path)

    @classmethod
    def load(cls, path: str) -> "RunManifest":
        with open(path, "r", encoding="utf-8") as f:
            return cls(**json.load(f))

    def verify(self, out_dir: str) -> List[str]:
        """Names of the digested files that are missing from out_dir or differ from their digest."""
        mismatched = []
        for name, digest in self.digests.items():
            path = os.path.join(out_dir, name)
            if not os.path.exists(path) or sha256_file(path) != digest:
                mismatched.append(name)
        return mismatched


def rerun_from_manifest(path: str, out_dir: Optional[str] = None) -> Tuple[RunManifest, Dict[str, bool]]:
    """Re-execute the run described by a manifest and compare the new outputs with the recorded digests.

    Args:
        path (str): the manifest.json of the original run
        out_dir (str, optional): where to write the new run. Defaults to <original dir>_rerun.

    Returns:
        Tuple[RunManifest, Dict[str, bool]]: the new manifest, and for each recorded file whether the
            rerun reproduced it byte for byte
    """
    from cremjax.experiments.runner import Runner

    manifest = RunManifest.load(path)
    config = copy.deepcopy(manifest.config)
    if out_dir is None:
        out_dir = os.path.dirname(os.path.abspath(path)).rstrip(os.sep) + "_rerun"
    config["out_dir"] = out_dir
    config["do_global_log"] = True
    print(f"[Manifest] Re-running {manifest.command!r} into {out_dir}")
    new_manifest = Runner(config).run()
    same = {
        name: new_manifest.digests.get(name, None) == digest
        for name, digest in manifest.digests.items()
    }
    return new_manifest, same
