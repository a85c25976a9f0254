"""Counter-based random streams.

Every random draw of the lab is addressed by a SeedPath (seed, replica, purpose). The key of a
path is obtained by folding the replica index, then the purpose code, into the root key of the
64-bit seed. Threefry keys are pure values: no generator state is ever shared between threads,
so results do not depend on how replicas are scheduled.
"""

from typing import Union

import jax

from cremjax.types import Purpose, SeedPath

_MASK_32 = 0xFFFFFFFF


def root_key(seed: int) -> jax.Array:
    """PRNG key of a 64-bit seed (low word seeds the key, high word is folded in)."""
    seed = int(seed)
    assert 0 <= seed < 2**64, f"The seed must be a 64-bit unsigned integer, got {seed}"
    key = jax.random.PRNGKey(seed & _MASK_32)
    return jax.random.fold_in(key, (seed >> 32) & _MASK_32)


def make_key(seed_path: SeedPath) -> jax.Array:
    key = root_key(seed_path.seed)
    key = jax.random.fold_in(key, int(seed_path.replica) & _MASK_32)
    return jax.random.fold_in(key, int(seed_path.purpose) & _MASK_32)


def stream(seed: int, replica: int = 0, purpose: Union[int, Purpose] = Purpose.PAIRS) -> SeedPath:
    return SeedPath(seed=int(seed), replica=int(replica), purpose=int(purpose))
