import glob
import json
import os
from typing import Dict, List

import pandas as pd
import matplotlib.pyplot as plt
import seaborn as sns

# set seaborn theme and matplotlib font sizes
sns.set_theme(context="paper", style="darkgrid")
plt.rcParams.update(
    {
        "axes.labelsize": 20,
        "xtick.labelsize": 18,
        "ytick.labelsize": 18,
        "axes.titlesize": 30,
    }
)

label_palette = {
    "B1": "#4C72B0",
    "B2": "#DD8452",
    "B3": "#55A868",
    "Boundary12": "black",
    "Boundary13": "black",
    "Boundary23": "black",
    "TriplePoint": "red",
}


def load_manifest(run_dir: str) -> Dict:
    with open(os.path.join(run_dir, "manifest.json"), "r", encoding="utf-8") as f:
        return json.load(f)


def load_table(run_dir: str, name: str) -> pd.DataFrame:
    """Read <name>.csv, or <name>.json when the run used the json format."""
    path_csv = os.path.join(run_dir, f"{name}.csv")
    if os.path.exists(path_csv):
        return pd.read_csv(path_csv)
    return pd.read_json(os.path.join(run_dir, f"{name}.json"), orient="records")


def load_zero_sets(run_dir: str) -> List[pd.DataFrame]:
    paths = sorted(glob.glob(os.path.join(run_dir, "zeros_replica_*.csv")))
    if not paths:
        paths = sorted(glob.glob(os.path.join(run_dir, "zeros_replica_*.json")))
        return [pd.read_json(path, orient="records") for path in paths]
    return [pd.read_csv(path) for path in paths]


def savefig(fig, run_dir: str, name: str):
    path = os.path.join(run_dir, f"{name}.png")
    fig.savefig(path, bbox_inches="tight", dpi=150)
    print(f"[Analysis] Figure saved to {path}")
