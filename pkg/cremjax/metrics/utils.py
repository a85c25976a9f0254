from typing import Any, Dict, Tuple

import numpy as np

from cremjax.utils import is_array, is_scalar


def get_dict_metrics_by_type(metrics: Dict[str, Any]) -> Tuple[Dict, Dict]:
    """Split a metric dict into real scalars and histograms (arrays).

    Complex values are split into `<key>/re` and `<key>/im`.
    """
    metrics_scalar = {}
    metrics_histogram = {}
    for key, value in metrics.items():
        try:
            value = np.array(value)
        except Exception as e:
            raise ValueError(
                f"Error converting metric {key} of value's type {type(value)} to numpy array: {e}"
            )
        parts = (
            {f"{key}/re": value.real, f"{key}/im": value.imag}
            if np.iscomplexobj(value)
            else {key: value}
        )
        for name, part in parts.items():
            if is_scalar(part):
                metrics_scalar[name] = float(part)
            elif is_array(part):
                metrics_histogram[name] = part
            else:
                raise ValueError(f"Invalid metric type: {type(part)}")
    return metrics_scalar, metrics_histogram
