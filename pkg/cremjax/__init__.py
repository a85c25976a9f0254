import jax

__version__ = "0.1"

# Every numeric contract of the package is a float64 contract.
jax.config.update("jax_enable_x64", True)
