# Config system
import sys
import hydra
from omegaconf import OmegaConf, DictConfig
from cremjax.register_hydra import register_hydra_resolvers

register_hydra_resolvers()

# Project imports
import os
from cremjax.errors import GatedTestFailure
from cremjax.experiments.runner import Runner
from cremjax.utils import check_jax_device

EXIT_SUCCESS = 0
EXIT_ERROR = 1
EXIT_GATED_FAILURE = 2


@hydra.main(config_path="configs", config_name="default.yaml")
def main(config: DictConfig):

    # Print informations
    print(f"Current working directory: {os.getcwd()}")
    check_jax_device()
    print("Configuration used :")
    print(OmegaConf.to_yaml(config))
    config = OmegaConf.to_container(config, resolve=True)

    runner = Runner(config)
    try:
        runner.run()
    except GatedTestFailure as e:
        print(f"[Runner] Gated test failed: {e}")
        sys.exit(EXIT_GATED_FAILURE)
    except Exception as e:
        print(f"[Runner] Error: {type(e).__name__}: {e}")
        sys.exit(EXIT_ERROR)
    sys.exit(EXIT_SUCCESS)


if __name__ == "__main__":
    main()
