# randfem - Random Streams
# Reproducible, independent counter-based streams

"""
Seeded random streams.

A stream is identified by the user seed and a 64-bit stream id. Stream ids are
BLAKE2b hashes of (replication, purpose, triangle, local vertex), and every
stream drives its own Philox (counter-based) generator keyed through a
``SeedSequence``. Identical (seed, stream id) pairs therefore give identical
variates no matter how many threads run or in which order streams are used.
"""

import hashlib
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from randfem.engine.utils.errors import ParameterError

UINT64_LIMIT = 2**64


class StreamPurpose(IntEnum):
    """What a stream's variates are used for."""

    STIFFNESS = 1
    LOAD = 2
    HAT = 3
    RESAMPLE = 4
    REFERENCE = 5


def _hash_fields(*fields: int) -> int:
    payload = b"".join(int(f).to_bytes(16, "little", signed=True) for f in fields)
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def derive_stream_id(
    replication: int,
    purpose: StreamPurpose,
    triangle: int = -1,
    local_vertex: int = -1,
) -> int:
    """64-bit stream id for (replication, purpose, triangle, local vertex)."""
    return _hash_fields(replication, int(purpose), triangle, local_vertex)


def resample_stream_id(
    parent_stream_id: int, triangle: int, local_vertex: int = -1
) -> int:
    """Stream id of the single fresh resample of one point of a parent draw."""
    purpose = int(StreamPurpose.RESAMPLE)
    return _hash_fields(parent_stream_id, purpose, triangle, local_vertex)


@dataclass(frozen=True)
class RngStream:
    """A (seed, stream id) pair; single owner, turned into a generator on use."""

    seed: int
    stream_id: int

    def __post_init__(self) -> None:
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not 0 <= value < UINT64_LIMIT:
                raise ParameterError(
                    f"{name} must be a 64-bit unsigned integer, got {value}"
                )

    @classmethod
    def derive(
        cls,
        seed: int,
        replication: int,
        purpose: StreamPurpose,
        triangle: int = -1,
        local_vertex: int = -1,
    ) -> "RngStream":
        return cls(seed, derive_stream_id(replication, purpose, triangle, local_vertex))

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(sequence))
