"""Counter-based random streams for the Monte Carlo kernels.

Both kernel backends (compiled and pure numpy) must produce the same samples
for the same seed, independent of worker count and block layout. Stateful
generators cannot give that, so draws are indexed, not streamed: the c-th
draw of searcher n in trial i is a pure function of (seed, i, n, c) built
from the splitmix64 finalizer.

    trial key     K_i   = mix64(seed) xor (GOLD * (i+1))
    searcher key  k_in  = mix64(K_i + LEAF * n)
    increment     g_in  = mix64(k_in xor SALT) | 1
    draw          x_c   = mix64(k_in + g_in * (c+1))

The per-stream odd increment keeps distinct searcher streams from sharing
lattice structure. Uniforms map the top 53 bits to (0, 1] via
u = ((x >> 11) + 0.5) * 2^-53: u is never zero, so log u is always finite;
the single top value rounds to exactly 1.0 (a 2^-53 tail event), which no
consumer feeds to log1p(-u).
Searcher stream layout: counter 0 is the arrival-gap uniform (drawn and
discarded for searcher 0, which starts at time zero), search-time draws
start at counter 1.

This module holds the integer-exact python reference and the vectorized
numpy forms; the compiled backend reimplements the same maps in uint64.
"""

from __future__ import annotations

import numpy as np

M64 = (1 << 64) - 1
GOLD = 0x9E3779B97F4A7C15
LEAF = 0xD1B54A32D192ED03
SALT = 0x5851F42D4C957F2D

_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB

U53_SCALE = 2.0**-53


def mix64(z: int) -> int:
    """splitmix64 finalizer on python ints."""
    z &= M64
    z = ((z ^ (z >> 30)) * _MUL1) & M64
    z = ((z ^ (z >> 27)) * _MUL2) & M64
    return z ^ (z >> 31)


def trial_key(seed: int, trial: int) -> int:
    return (mix64(seed) ^ ((GOLD * (trial + 1)) & M64)) & M64


def searcher_stream(tkey: int, n: int) -> tuple[int, int]:
    k = mix64((tkey + LEAF * n) & M64)
    g = mix64(k ^ SALT) | 1
    return k, g


def draw64(key: int, gamma: int, c: int) -> int:
    return mix64((key + gamma * (c + 1)) & M64)


def u01(x: int) -> float:
    return ((x >> 11) + 0.5) * U53_SCALE


# --- vectorized forms (uint64 arrays; integer wrap is the intended math) ---

_N30 = np.uint64(30)
_N27 = np.uint64(27)
_N31 = np.uint64(31)
_N11 = np.uint64(11)
_NMUL1 = np.uint64(_MUL1)
_NMUL2 = np.uint64(_MUL2)
_NGOLD = np.uint64(GOLD)
_NLEAF = np.uint64(LEAF)
_NSALT = np.uint64(SALT)
_NONE = np.uint64(1)


def mix64_np(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> _N30
    z *= _NMUL1
    z ^= z >> _N27
    z *= _NMUL2
    z ^= z >> _N31
    return z


def searcher_stream_np(tkey: int, n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k = mix64_np(np.uint64(tkey) + _NLEAF * n.astype(np.uint64))
    g = mix64_np(k ^ _NSALT) | _NONE
    return k, g


def draw64_np(key: np.ndarray, gamma: np.ndarray, c) -> np.ndarray:
    cc = np.asarray(c, dtype=np.uint64)
    return mix64_np(key + gamma * (cc + _NONE))


def u01_np(x: np.ndarray) -> np.ndarray:
    return ((x >> _N11).astype(np.float64) + 0.5) * U53_SCALE
