"""Deterministic binary container for fitted models.

Layout: 8-byte magic, u32 format version, u64 header length, JSON header,
raw little-endian array payload. The header records array names, dtypes,
shapes, offsets, and a SHA-256 of the payload, so truncation and corruption
are detectable and equal inputs produce byte-identical files (no timestamps,
unlike zip-based formats).
"""
from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .errors import ModelFormatError, ModelVersionError

MAGIC = b"LAUDMDL\x00"
FORMAT_VERSION = 1


def write_container(
    path: str | Path, meta: Mapping[str, Any], arrays: Mapping[str, np.ndarray]
) -> None:
    payload_parts: list[bytes] = []
    entries = []
    offset = 0
    for name in arrays:
        arr = np.ascontiguousarray(arrays[name])
        if arr.dtype.byteorder == ">":
            arr = arr.astype(arr.dtype.newbyteorder("<"))
        raw = arr.tobytes()
        entries.append(
            {
                "name": name,
                "dtype": arr.dtype.str,
                "shape": list(arr.shape),
                "offset": offset,
                "nbytes": len(raw),
            }
        )
        payload_parts.append(raw)
        offset += len(raw)
    payload = b"".join(payload_parts)
    header = {
        "format_version": FORMAT_VERSION,
        "meta": dict(meta),
        "arrays": entries,
        "payload_sha256": hashlib.sha256(payload).hexdigest(),
    }
    header_bytes = json.dumps(header, sort_keys=True, ensure_ascii=False).encode("utf-8")
    with Path(path).open("wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQ", FORMAT_VERSION, len(header_bytes)))
        fh.write(header_bytes)
        fh.write(payload)


def read_container(path: str | Path) -> tuple[dict[str, Any], dict[str, np.ndarray]]:
    data = Path(path).read_bytes()
    prefix_len = len(MAGIC) + struct.calcsize("<IQ")
    if len(data) < prefix_len or data[: len(MAGIC)] != MAGIC:
        raise ModelFormatError(f"{path}: not a model file")
    version, header_len = struct.unpack(
        "<IQ", data[len(MAGIC) : prefix_len]
    )
    if version > FORMAT_VERSION:
        raise ModelVersionError(
            f"{path}: format version {version} is newer than supported "
            f"({FORMAT_VERSION})"
        )
    header_end = prefix_len + header_len
    if len(data) < header_end:
        raise ModelFormatError(f"{path}: truncated header")
    try:
        header = json.loads(data[prefix_len:header_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"{path}: corrupt header: {exc}") from exc
    payload = data[header_end:]
    if hashlib.sha256(payload).hexdigest() != header.get("payload_sha256"):
        raise ModelFormatError(f"{path}: payload checksum mismatch (corrupt file)")
    arrays: dict[str, np.ndarray] = {}
    for entry in header["arrays"]:
        start, nbytes = entry["offset"], entry["nbytes"]
        raw = payload[start : start + nbytes]
        if len(raw) != nbytes:
            raise ModelFormatError(f"{path}: truncated array {entry['name']!r}")
        arrays[entry["name"]] = np.frombuffer(raw, dtype=np.dtype(entry["dtype"])).reshape(
            entry["shape"]
        ).copy()
    return header["meta"], arrays
