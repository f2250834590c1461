"""Seeded random streams.

Every stochastic stage derives its own stream from (master seed, stage
label, instance id), so results never depend on evaluation order or on
how work is sharded across workers. Streams are counter-based (Philox)
and Gaussian draws go through an explicit Box-Muller transform, keeping
byte-level output stable across platforms and numpy builds.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF


def derive_seed(master_seed: int, *parts: int | str) -> int:
    """Fold (master_seed, parts...) into a stable 64-bit stream seed."""
    h = hashlib.sha256()
    h.update(int(master_seed & _MASK64).to_bytes(8, "little"))
    for p in parts:
        if isinstance(p, int):
            h.update(b"i" + int(p & _MASK64).to_bytes(8, "little"))
        else:
            h.update(b"s" + str(p).encode("utf-8"))
    return int.from_bytes(h.digest()[:8], "little")


def stream(master_seed: int, *parts: int | str) -> np.random.Generator:
    """Counter-based generator for the sub-stream named by `parts`."""
    return np.random.Generator(np.random.Philox(derive_seed(master_seed, *parts)))


def normal(rng: np.random.Generator, size) -> np.ndarray:
    """Standard normals via Box-Muller over Philox uniforms.

    numpy's ziggurat sampler is fast but its bit stream is an
    implementation detail; the Box-Muller path only consumes uniforms,
    which are part of the Generator contract.
    """
    n = int(np.prod(size)) if not np.isscalar(size) else int(size)
    m = (n + 1) // 2
    # open-interval uniforms: u1 must stay away from 0 for the log
    u1 = 1.0 - rng.random(m)
    u2 = rng.random(m)
    r = np.sqrt(-2.0 * np.log(u1))
    theta = 2.0 * np.pi * u2
    z = np.concatenate([r * np.cos(theta), r * np.sin(theta)])[:n]
    return z.reshape(size) if not np.isscalar(size) else z
