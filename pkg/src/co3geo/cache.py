"""Versioned on-disk cache for expensive derived data.

Entries are .npz files keyed by a digest of the generator file bytes,
the seed and a format version, so editing the input or bumping the
version invalidates everything automatically.  Corrupt entries are
treated as misses and overwritten.
"""

from __future__ import annotations

import hashlib
import os

import numpy as np

CACHE_VERSION = 1


class Cache:
    def __init__(self, directory: str, *key_parts):
        self.directory = directory
        h = hashlib.sha256()
        h.update(f"v{CACHE_VERSION}".encode())
        for part in key_parts:
            if isinstance(part, bytes):
                h.update(part)
            else:
                h.update(str(part).encode())
            h.update(b"\x00")
        self.key = h.hexdigest()[:16]
        self.hits = 0
        self.misses = 0

    def _path(self, name: str) -> str:
        return os.path.join(self.directory, f"{name}-{self.key}.npz")

    def get(self, name: str) -> dict | None:
        path = self._path(name)
        if not os.path.exists(path):
            self.misses += 1
            return None
        try:
            with np.load(path, allow_pickle=False) as z:
                out = {k: z[k] for k in z.files}
        except Exception:
            self.misses += 1
            return None
        self.hits += 1
        return out

    def put(self, name: str, **arrays) -> None:
        os.makedirs(self.directory, exist_ok=True)
        path = self._path(name)
        tmp = path + ".tmp"
        np.savez_compressed(tmp, **arrays)
        # numpy appends .npz to unknown suffixes
        if os.path.exists(tmp + ".npz"):
            tmp = tmp + ".npz"
        os.replace(tmp, path)


class NullCache(Cache):
    """Cache interface that never stores anything."""

    def __init__(self):
        super().__init__("", b"")

    def get(self, name):
        self.misses += 1
        return None

    def put(self, name, **arrays):
        pass


def file_digest(path: str) -> bytes:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.digest()
