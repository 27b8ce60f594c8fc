# suzukicartier/core/cache.py

"""
SZCM matrix cache.

Layout (little-endian): magic b"SZCM", version u8, m u32, g u32, then g rows
of ceil(g / 64) u64 words with column j at bit j % 64 of word j // 64.
"""

import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np
from loguru import logger

from suzukicartier.core.f2la import BitMatrix, words_for
from suzukicartier.core.params import make_params
from suzukicartier.utils.errors import (
    CacheError,
    CorruptHeaderError,
    DimensionMismatchError,
    ParameterError,
    ShortReadError,
)

MAGIC = b"SZCM"
VERSION = 1
HEADER = struct.Struct("<4sBII")
U32_MAX = 0xFFFFFFFF


def cache_path(cache_dir: Union[str, Path], m: int) -> Path:
    """File name used for the Cartier matrix of S_m inside a cache directory."""
    return Path(cache_dir) / f"cartier_m{m}.szcm"


def encode_matrix(m: int, matrix: BitMatrix) -> bytes:
    if not matrix.is_square():
        raise CacheError("Only square matrices can be cached", context={"shape": list(matrix.shape)})
    if matrix.cols > U32_MAX or m > U32_MAX:
        raise CacheError("Header fields exceed 32 bits", context={"m": m, "g": matrix.cols})
    return HEADER.pack(MAGIC, VERSION, m, matrix.cols) + matrix.data.astype("<u8").tobytes()


def decode_matrix(blob: bytes, source: str = "<bytes>") -> BitMatrix:
    """Parse an SZCM blob.

    Raises:
        ShortReadError: if the blob ends before the header or payload does
        CorruptHeaderError: on a wrong magic or version, or trailing bytes
        DimensionMismatchError: if g is not q0 (q - 1) for the header's m
    """
    if len(blob) < HEADER.size:
        raise ShortReadError(
            "Cache file ends inside the header",
            context={"path": source, "size": len(blob), "header_size": HEADER.size}
        )
    magic, version, m, g = HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise CorruptHeaderError("Cache file has a bad magic", context={"path": source, "magic": magic.hex()})
    if version != VERSION:
        raise CorruptHeaderError("Unsupported cache version", context={"path": source, "version": version})

    try:
        expected_g = make_params(m).g
    except ParameterError as e:
        raise CorruptHeaderError("Cache header holds an invalid m", context={"path": source, "m": m}, original_error=e)
    if g != expected_g:
        raise DimensionMismatchError(
            "Cached genus does not match the header's m",
            context={"path": source, "m": m, "g": g, "expected_g": expected_g}
        )

    payload = g * words_for(g) * 8
    body = blob[HEADER.size:]
    if len(body) < payload:
        raise ShortReadError(
            "Cache file ends inside the matrix rows",
            context={"path": source, "expected": payload, "actual": len(body)}
        )
    if len(body) > payload:
        raise CorruptHeaderError(
            "Cache file has trailing bytes",
            context={"path": source, "extra": len(body) - payload}
        )

    data = np.frombuffer(body, dtype="<u8").astype(np.uint64).reshape(g, words_for(g))
    try:
        return BitMatrix(g, g, data)
    except CacheError:
        raise
    except Exception as e:
        raise CorruptHeaderError("Cached rows are not a valid matrix", context={"path": source}, original_error=e)


def cache_matrix(path: Union[str, Path], m: int, matrix: BitMatrix) -> Path:
    """Write the matrix of S_m to path, creating parent directories."""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(encode_matrix(m, matrix))
    except OSError as e:
        raise CacheError("Failed to write matrix cache", context={"path": str(target)}, original_error=e)
    logger.info("Matrix cached", path=str(target), m=m, g=matrix.cols)
    return target


def load_matrix(path: Union[str, Path], m: Optional[int] = None) -> BitMatrix:
    """Read an SZCM file; when m is given it must match the header."""
    source = Path(path)
    try:
        blob = source.read_bytes()
    except OSError as e:
        raise CacheError("Failed to read matrix cache", context={"path": str(source)}, original_error=e)
    matrix = decode_matrix(blob, str(source))
    if m is not None and matrix.cols != make_params(m).g:
        raise DimensionMismatchError(
            "Cached matrix belongs to a different curve",
            context={"path": str(source), "m": m, "g": matrix.cols}
        )
    logger.debug("Matrix loaded from cache", path=str(source), g=matrix.cols)
    return matrix
