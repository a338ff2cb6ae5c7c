"""Deterministic RNG derivation: every stream hangs off one master seed."""

import numpy as np

# fixed stream tags -> small ints, so derived seeds never collide by accident
_STREAMS = (
    "collect",
    "reset",
    "warmup",
    "candidates",
    "train",
    "ae-train",
    "validation",
    "explore",
    "calibrate",
    "repeat",
)


def stream_id(name: str) -> int:
    try:
        return _STREAMS.index(name)
    except ValueError:
        raise KeyError(f"unknown rng stream {name!r}; add it to seeding._STREAMS") from None


def derive_rng(master_seed: int, stream: str, *indices: int) -> np.random.Generator:
    """Independent generator for (master seed, stream, indices...)."""
    return np.random.default_rng([int(master_seed), stream_id(stream), *[int(i) for i in indices]])


def derive_seed(master_seed: int, stream: str, *indices: int) -> int:
    """A plain integer seed derived the same way (for env.reset)."""
    return int(derive_rng(master_seed, stream, *indices).integers(0, 2**31 - 1))
