"""On-disk key store.

Layout: ``<root>/<context-id>/secret.bin`` and ``<root>/<context-id>/eval.bin``.
The root defaults to ``./keys`` and can be overridden by the
``HEGRAM_KEYSTORE`` environment variable.  Both files carry a 4-byte
magic and a format version byte so stale or foreign files fail loudly.
"""

from __future__ import annotations

import os
from pathlib import Path

from ..exceptions import KeyStoreError
from .base import EvalKey, KeyPair, SecretKey

SECRET_MAGIC = b"HGSK"
EVAL_MAGIC = b"HGEK"
FORMAT_VERSION = 1

KEYSTORE_ENV = "HEGRAM_KEYSTORE"
_KEY_ID_LEN = 16
_MATERIAL_LEN = 32

SECRET_FILENAME = "secret.bin"
EVAL_FILENAME = "eval.bin"


def keystore_root(root=None) -> Path:
    if root is not None:
        return Path(root)
    env = os.environ.get(KEYSTORE_ENV)
    return Path(env) if env else Path("keys")


def _pack(magic: bytes, key_id: bytes, material: bytes) -> bytes:
    return magic + bytes([FORMAT_VERSION]) + key_id + material


def _unpack(blob: bytes, magic: bytes, path: Path) -> tuple[bytes, bytes]:
    if len(blob) != 4 + 1 + _KEY_ID_LEN + _MATERIAL_LEN:
        raise KeyStoreError(f"{path}: wrong file length {len(blob)}")
    if blob[:4] != magic:
        raise KeyStoreError(f"{path}: bad magic {blob[:4]!r}, expected {magic!r}")
    if blob[4] != FORMAT_VERSION:
        raise KeyStoreError(f"{path}: unsupported format version {blob[4]}")
    key_id = blob[5 : 5 + _KEY_ID_LEN]
    material = blob[5 + _KEY_ID_LEN :]
    return key_id, material


def save_keypair(keypair: KeyPair, root=None, context_id: str | None = None) -> Path:
    """Write both halves of a key pair; returns the context directory."""
    context_id = context_id or keypair.key_id.hex()
    directory = keystore_root(root) / context_id
    directory.mkdir(parents=True, exist_ok=True)
    secret = keypair.secret_key
    (directory / SECRET_FILENAME).write_bytes(
        _pack(SECRET_MAGIC, secret.key_id, secret.material)
    )
    (directory / EVAL_FILENAME).write_bytes(
        _pack(EVAL_MAGIC, keypair.eval_key.key_id, keypair.eval_key.material)
    )
    return directory


def _read(path: Path) -> bytes:
    if not path.is_file():
        raise KeyStoreError(f"missing key store entry: {path}")
    return path.read_bytes()


def load_eval_key(context_id: str, root=None) -> EvalKey:
    path = keystore_root(root) / context_id / EVAL_FILENAME
    key_id, material = _unpack(_read(path), EVAL_MAGIC, path)
    return EvalKey(key_id=key_id, material=material)


def load_secret_key(context_id: str, root=None) -> SecretKey:
    path = keystore_root(root) / context_id / SECRET_FILENAME
    key_id, material = _unpack(_read(path), SECRET_MAGIC, path)
    return SecretKey(key_id=key_id, material=material)


def load_keypair(context_id: str, root=None) -> KeyPair:
    secret = load_secret_key(context_id, root=root)
    eval_key = load_eval_key(context_id, root=root)
    if secret.key_id != eval_key.key_id:
        raise KeyStoreError(
            f"key id mismatch between secret and eval halves under {context_id}"
        )
    return KeyPair(secret_key=secret, eval_key=eval_key)
