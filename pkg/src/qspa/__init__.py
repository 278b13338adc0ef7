"""Decoding laboratory for quantum stabilizer codes.

Syndrome sum-product decoding with randomly-reweighted, prior-reweighted,
and pseudocodeword-path post-processing variants; exact minimum-weight and
coset-probability reference decoders with exhaustive verification tools;
and a seeded Monte Carlo engine with a CLI front end.
"""

from .channel import ChannelModel, llr_vector, sample_error
from .imr import ImrConfig, imr_spa_decode
from .kernels import BACKEND
from .pcwd import Path, decompose, greedy_select, lp_select, spa_pcwd_decode
from .spa import (
    DecodeResult,
    DecodeStatus,
    TannerGraph,
    build_tanner,
    rr_spa_decode,
    spa_decode,
)
from .stabilizer import (
    Classification,
    StabilizerCode,
    build_bicycle,
    build_toric,
    classify,
    coset_representative,
    load_code,
    min_distance,
    pauli_weight,
    syndrome,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ChannelModel",
    "Classification",
    "DecodeResult",
    "DecodeStatus",
    "ImrConfig",
    "Path",
    "StabilizerCode",
    "TannerGraph",
    "build_bicycle",
    "build_tanner",
    "build_toric",
    "classify",
    "coset_representative",
    "decompose",
    "greedy_select",
    "imr_spa_decode",
    "llr_vector",
    "load_code",
    "lp_select",
    "min_distance",
    "pauli_weight",
    "rr_spa_decode",
    "sample_error",
    "spa_decode",
    "spa_pcwd_decode",
    "syndrome",
]
