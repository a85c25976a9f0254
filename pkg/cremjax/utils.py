import hashlib
import json
import math
from dataclasses import asdict, is_dataclass
from enum import Enum
from typing import Any, Dict, Union

import jax
import numpy as np


def is_scalar(data) -> bool:
    """True for python numbers, numpy scalars and 0-d arrays."""
    if isinstance(data, (int, float, bool, complex)):
        return True
    if np.isscalar(data):
        return True
    return isinstance(data, np.ndarray) and data.shape == ()


def is_array(data) -> bool:
    return isinstance(data, np.ndarray) and data.shape != ()


def try_get_seed(config: Dict) -> int:
    """Will try to extract the seed from the config, or draw a random one if it is missing

    Args:
        config (Dict): the run config

    Returns:
        int: the seed, a non-negative integer below 2**64
    """
    seed = config.get("seed", None)
    if not isinstance(seed, int) or isinstance(seed, bool):
        seed = int(np.random.randint(0, 2**31 - 1))
    assert 0 <= seed < 2**64, f"The seed must be a 64-bit unsigned integer, got {seed}"
    return seed


def try_get(
    dictionnary: Dict, key: str, default: Union[int, float, str, None] = None
) -> Any:
    """Will try to extract the key from the dictionary, or return the default value if not found
    or if the value is None

    Args:
        dictionnary (Dict): the dictionary
        key (str): the key to extract
        default (Union[int, float, str, None]): the default value

    Returns:
        Any: the value of the key if found, or the default value if not found
    """
    value = dictionnary.get(key, None)
    return default if value is None else value


def get_dict_flattened(d: Dict, parent_key: str = "", sep: str = ".") -> Dict:
    """Flatten a nested dictionary, keys becoming the path to the value."""
    items = []
    for k, v in d.items():
        new_key = f"{parent_key}{sep}{k}" if parent_key else k
        if isinstance(v, dict):
            items.extend(get_dict_flattened(v, new_key, sep=sep).items())
        else:
            items.append((new_key, v))
    return dict(items)


def to_jsonable(obj: Any) -> Any:
    """Recursively convert numbers, arrays, enums and dataclasses to JSON-compatible values.

    Complex numbers become {"re": ..., "im": ...}; non-finite floats become strings.
    """
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": to_jsonable(obj.real), "im": to_jsonable(obj.imag)}
    if isinstance(obj, (np.ndarray, jax.Array)):
        return [to_jsonable(v) for v in np.asarray(obj).tolist()]
    if is_dataclass(obj):
        return {k: to_jsonable(v) for k, v in asdict(obj).items()}
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return str(obj)


def dump_json(obj: Any, path: str):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(to_jsonable(obj), f, indent=2, sort_keys=True)


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def check_jax_device():
    try:
        print("Checking device used by JAX:")
        print(f"\tAvailable devices: {jax.devices()}")
        print(f"\tPlatform: {jax.default_backend()}")
        print(f"\tx64 enabled: {jax.config.jax_enable_x64}")
    except Exception as e:
        print(f"Error while checking JAX device: {e}")
