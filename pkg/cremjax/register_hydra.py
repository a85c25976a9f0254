import math

from omegaconf import OmegaConf


def merge_container(*containers):
    """Merge config containers of one kind (all lists or all dicts) into one."""
    containers = [OmegaConf.to_container(container) for container in containers]
    if all(isinstance(container, list) for container in containers):
        return [item for container in containers for item in container]
    if all(isinstance(container, dict) for container in containers):
        return {key: value for container in containers for key, value in container.items()}
    raise ValueError(
        f"All containers should be of the same type, but got {[type(container) for container in containers]}"
    )


def register_hydra_resolvers():
    """Register the custom resolvers used by the experiment configs.

    Example usage :
    ```yaml
    # configs/experiment/zeros.yaml
    beta0: [0.9, "${eval:'2**0.5 - 0.9'}"]
    n: ${log:1000}
    ```
    Registration is idempotent so tests may call it repeatedly.
    """
    resolvers = {
        "merge": merge_container,
        "eval": eval,
        "log": lambda x: math.log(float(x)),
        "sqrt": lambda x: math.sqrt(float(x)),
    }
    for name, resolver in resolvers.items():
        if not OmegaConf.has_resolver(name):
            OmegaConf.register_new_resolver(name, resolver)
