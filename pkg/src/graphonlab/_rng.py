"""Counter-based random number streams.

Every random quantity in this package is a pure function of
``(seed, stage, a, b)``: the user seed, a stage tag separating the
vertex-generating stage, the edge-generating stage, arrival streams and so
on, and two 32-bit stream coordinates (vertex index, pair (i, j), step
counter, replicate index, ...).  There is no sequential generator state, so

* identical inputs reproduce identical outputs byte for byte,
* the verdict for a pair (i, j) depends only on (seed, stage, i, j),
* replicates and pairs can be evaluated in any order or in parallel.

The word function is two rounds of 64-bit xorshift-multiply finalizers
(the splitmix64 finalizer followed by the murmur3 one) applied to
``base(seed, stage) XOR (a << 32 | b)``.  Uniform doubles take the top
53 bits, so values lie in [0, 1).

The compiled kernels in ``_speed.pyx`` implement exactly the same function;
``tests/test_backends.py`` pins the two against shared test vectors.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
INV53 = 1.0 / 9007199254740992.0  # 2**-53

# stage tags
STAGE_LATENT = 1
STAGE_EDGE = 2
STAGE_STEP = 3  # incremental process, one draw per step
STAGE_ARRIVAL = 4  # Poisson point process inter-arrival uniforms
STAGE_MARK = 5  # Poisson marks attached to arrivals
STAGE_REPLICATE = 6  # derivation of per-replicate seeds


def mix64(z: int) -> int:
    """splitmix64 finalizer (Stafford mix 13)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix64_murmur(z: int) -> int:
    """murmur3 fmix64, used as the second scrambling round."""
    z &= MASK64
    z = ((z ^ (z >> 33)) * 0xFF51AFD7ED558CCD) & MASK64
    z = ((z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53) & MASK64
    return z ^ (z >> 33)


def stream_base(seed: int, stage: int) -> int:
    """64-bit stream id for (seed, stage); hoisted out of hot loops."""
    return mix64((seed * GOLDEN + stage) & MASK64)


def draw_u64(seed: int, stage: int, a: int, b: int) -> int:
    """The raw 64-bit word for stream coordinates (a, b), both < 2**32."""
    key = ((a & 0xFFFFFFFF) << 32) | (b & 0xFFFFFFFF)
    return mix64_murmur(mix64(stream_base(seed, stage) ^ key))


def draw_uniform(seed: int, stage: int, a: int, b: int) -> float:
    return (draw_u64(seed, stage, a, b) >> 11) * INV53


def replicate_seed(base_seed: int, r: int) -> int:
    """Seed for replicate r of a campaign run with base_seed."""
    return draw_u64(base_seed, STAGE_REPLICATE, r, 0)


# ---------------------------------------------------------------------------
# vectorized variants (used by the latent stage and the Python kernels)

_U = np.uint64
_C30, _C27, _C31 = _U(30), _U(27), _U(31)
_C33 = _U(33)
_M1, _M2 = _U(0xBF58476D1CE4E5B9), _U(0x94D049BB133111EB)
_M3, _M4 = _U(0xFF51AFD7ED558CCD), _U(0xC4CEB9FE1A85EC53)


def mix64_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _C30)) * _M1
    z = (z ^ (z >> _C27)) * _M2
    return z ^ (z >> _C31)


def mix64_murmur_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _C33)) * _M3
    z = (z ^ (z >> _C33)) * _M4
    return z ^ (z >> _C33)


def draw_u64_vec(seed: int, stage: int, a, b) -> np.ndarray:
    """Vectorized draw_u64; a and b broadcast against each other."""
    base = _U(stream_base(seed, stage))
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    key = (a << _U(32)) | (b & _U(0xFFFFFFFF))
    return mix64_murmur_vec(mix64_vec(base ^ key))


def draw_uniform_vec(seed: int, stage: int, a, b) -> np.ndarray:
    return (draw_u64_vec(seed, stage, a, b) >> _U(11)) * INV53


def latent_uniforms(seed: int, n: int) -> np.ndarray:
    """The n vertex-stage uniforms; shared by every model variant."""
    return draw_uniform_vec(seed, STAGE_LATENT, np.arange(n, dtype=np.uint64), 0)
