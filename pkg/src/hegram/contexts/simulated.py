"""Encrypted-execution simulation: constraints and cost, not cryptography.

This backend is an executable model of what a torus-scheme FHE runtime
permits, not a secure cipher.  It enforces the rules that shape circuit
design -- an 8-bit plaintext domain, a finite noise budget per
ciphertext, comparisons expressible only as table lookups, keys split
into a client-held secret and a server-side evaluation key -- and it
meters each primitive so circuit cost can be studied without the real
runtime.  Plaintexts are stored internally; the public API never
exposes one without the secret key.

Charging model: one table lookup costs one programmable bootstrap plus
one key switch (and refreshes the result's noise budget); one element
addition costs one encrypted addition and consumes one unit of budget;
an explicit bootstrap costs one programmable bootstrap.
"""

from __future__ import annotations

import struct
from typing import Optional, Sequence

import numpy as np

from ..exceptions import (
    DomainError,
    IntegrityError,
    KeyStoreError,
    NoiseBudgetError,
)
from .base import (
    PLAINTEXT_BITS,
    PLAINTEXT_MAX,
    ContextConfig,
    EvalContext,
    KeyPair,
    KIND_SIMULATED,
    check_table,
    derive_keypair,
)
from . import keystore

CIPHERTEXT_MAGIC = b"HGCT"
CIPHERTEXT_VERSION = 1
_CT_HEADER = struct.Struct("<4sB16sB")  # magic, version, key id, domain bits


class Ciphertext:
    """Opaque handle to one encrypted 8-bit integer.

    Immutable value object: operations return new ciphertexts.  The
    plaintext is intentionally not part of the public surface;
    ``SimulatedContext.decrypt`` is the only way back out.
    """

    __slots__ = ("_plain", "key_id", "noise_budget")

    def __init__(self, plain: int, key_id: bytes, noise_budget: int):
        self._plain = plain
        self.key_id = key_id
        self.noise_budget = noise_budget

    def __repr__(self) -> str:  # deliberately plaintext-free
        return (
            f"Ciphertext(key={self.key_id.hex()[:8]}, "
            f"noise_budget={self.noise_budget})"
        )


class SimulatedContext(EvalContext):
    def __init__(self, config: ContextConfig | None = None, keypair: KeyPair | None = None):
        if config is None:
            config = ContextConfig(kind=KIND_SIMULATED)
        super().__init__(config)
        self._keypair = keypair
        self._rng = np.random.default_rng(config.rng_seed)

    # -- keys ----------------------------------------------------------

    def keygen(self) -> KeyPair:
        self._keypair = derive_keypair(self.config.rng_seed)
        return self._keypair

    @property
    def keypair(self) -> KeyPair:
        if self._keypair is None:
            raise IntegrityError("no keys installed; call keygen() or load keys")
        return self._keypair

    @property
    def key_id(self) -> bytes:
        return self.keypair.key_id

    @property
    def context_id(self) -> str:
        return self.keypair.key_id.hex()

    @property
    def can_decrypt(self) -> bool:
        return self._keypair is not None and self._keypair.secret_key is not None

    def save_keys(self, root=None, context_id: str | None = None) -> str:
        """Persist the installed key pair to the on-disk key store."""
        context_id = context_id or self.context_id
        keystore.save_keypair(self.keypair, root=root, context_id=context_id)
        return context_id

    @classmethod
    def from_keystore(
        cls,
        context_id: str,
        root=None,
        config: ContextConfig | None = None,
        eval_only: bool = False,
    ) -> "SimulatedContext":
        """Rebuild a context around keys loaded from disk.

        With ``eval_only`` the secret key is not read; the resulting
        context can compute but can neither encrypt fresh data nor
        decrypt results, which is the server's view of the world.
        """
        if eval_only:
            eval_key = keystore.load_eval_key(context_id, root=root)
            pair = KeyPair(secret_key=None, eval_key=eval_key)  # type: ignore[arg-type]
        else:
            pair = keystore.load_keypair(context_id, root=root)
        return cls(config=config, keypair=pair)

    # -- value lifecycle ------------------------------------------------

    def _check_key(self, value: Ciphertext) -> None:
        if not isinstance(value, Ciphertext):
            raise DomainError(f"expected a Ciphertext, got {type(value).__name__}")
        if value.key_id != self.key_id:
            raise IntegrityError(
                f"ciphertext under key {value.key_id.hex()[:8]} used with "
                f"context key {self.key_id.hex()[:8]}"
            )

    def encrypt(self, x: int) -> Ciphertext:
        if not self.can_decrypt:
            raise IntegrityError("encrypting fresh data requires the secret key")
        x = int(x)
        if not 0 <= x <= PLAINTEXT_MAX:
            raise DomainError(f"plaintext {x} outside [0, {PLAINTEXT_MAX}]")
        return Ciphertext(x, self.key_id, self.config.noise_budget)

    def decrypt(self, value) -> int:
        if isinstance(value, (int, np.integer)):
            # Plain ints pass through so mixed plain/decrypted pipelines
            # (e.g. histograms already materialised) read uniformly.
            return int(value)
        self._check_key(value)
        if not self.can_decrypt:
            raise IntegrityError("decryption requires the secret key")
        return value._plain

    def trivial(self, x: int) -> Ciphertext:
        # A noiseless encoding of a public constant; legal server-side.
        x = int(x)
        if not 0 <= x <= PLAINTEXT_MAX:
            raise DomainError(f"plaintext {x} outside [0, {PLAINTEXT_MAX}]")
        return Ciphertext(x, self.key_id, self.config.noise_budget)

    def is_value(self, value) -> bool:
        return isinstance(value, Ciphertext)

    # -- primitives ------------------------------------------------------

    def add(self, a: Ciphertext, b: Ciphertext) -> Ciphertext:
        self._check_key(a)
        self._check_key(b)
        if a.noise_budget <= 0 or b.noise_budget <= 0:
            raise NoiseBudgetError(
                "noise budget exhausted; bootstrap before adding again"
            )
        total = a._plain + b._plain
        if total > PLAINTEXT_MAX:
            raise DomainError(
                f"sum {total} overflows the {PLAINTEXT_BITS}-bit plaintext domain"
            )
        self.counter.encrypted_add += 1
        return Ciphertext(total, self.key_id, min(a.noise_budget, b.noise_budget) - 1)

    def lut_eval(self, value: Ciphertext, table: Sequence[int]) -> Ciphertext:
        self._check_key(value)
        check_table(table)
        result = int(table[value._plain])
        if not 0 <= result <= PLAINTEXT_MAX:
            raise DomainError(f"table entry {result} outside [0, {PLAINTEXT_MAX}]")
        if self.config.inject_failures and self.config.failure_probability > 0:
            if self._rng.random() < self.config.failure_probability:
                result = self._wrong_entry(table, result)
        self.counter.pbs += 1
        self.counter.key_switch += 1
        # A lookup rides on a bootstrap, so the output is always fresh.
        return Ciphertext(result, self.key_id, self.config.noise_budget)

    def _wrong_entry(self, table: Sequence[int], correct: int) -> int:
        candidates = sorted(set(int(t) for t in table) - {correct})
        if not candidates:
            return correct  # constant table: no distinguishable wrong entry
        return int(self._rng.choice(candidates))

    def bootstrap(self, value: Ciphertext) -> Ciphertext:
        self._check_key(value)
        self.counter.pbs += 1
        return Ciphertext(value._plain, self.key_id, self.config.noise_budget)

    def noise_budget_of(self, value) -> Optional[int]:
        self._check_key(value)
        return value.noise_budget

    # -- serialization -----------------------------------------------------

    def serialize_ciphertext(self, value: Ciphertext) -> bytes:
        """Versioned wire form: header plus a payload masked per key.

        The mask is derived from the evaluation key, so any holder of the
        public key material can round-trip the bytes; this mirrors the
        fact that the simulation models constraints, not confidentiality.
        """
        self._check_key(value)
        header = _CT_HEADER.pack(
            CIPHERTEXT_MAGIC, CIPHERTEXT_VERSION, value.key_id, PLAINTEXT_BITS
        )
        mask = self.keypair.eval_key.material[0]
        payload = bytes([value._plain ^ mask, value.noise_budget & 0xFF])
        return header + payload

    def deserialize_ciphertext(self, blob: bytes) -> Ciphertext:
        if len(blob) != _CT_HEADER.size + 2:
            raise KeyStoreError(f"ciphertext blob has wrong length {len(blob)}")
        magic, version, key_id, bits = _CT_HEADER.unpack(blob[: _CT_HEADER.size])
        if magic != CIPHERTEXT_MAGIC:
            raise KeyStoreError(f"bad ciphertext magic {magic!r}")
        if version != CIPHERTEXT_VERSION:
            raise KeyStoreError(f"unsupported ciphertext format version {version}")
        if bits != PLAINTEXT_BITS:
            raise KeyStoreError(f"unsupported plaintext width {bits} bits")
        if key_id != self.key_id:
            raise IntegrityError("ciphertext belongs to a different key")
        mask = self.keypair.eval_key.material[0]
        plain, budget = blob[_CT_HEADER.size], blob[_CT_HEADER.size + 1]
        return Ciphertext(plain ^ mask, key_id, budget)
