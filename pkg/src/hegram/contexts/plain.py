"""The plain-integer oracle context.

Values are ordinary Python ints and every primitive is its textbook
integer meaning.  Results on this context define correctness for the
encrypted backends; nothing is metered because nothing costs anything.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..exceptions import DomainError
from .base import (
    PLAINTEXT_MAX,
    ContextConfig,
    EvalContext,
    KeyPair,
    KIND_PLAIN,
    check_table,
    derive_keypair,
)


class PlainContext(EvalContext):
    def __init__(self, config: ContextConfig | None = None):
        if config is None:
            config = ContextConfig(kind=KIND_PLAIN)
        super().__init__(config)
        self._keypair: KeyPair | None = None

    def keygen(self) -> KeyPair:
        # No cryptography happens here; a key pair is still derived so
        # key-store round trips behave identically across context kinds.
        self._keypair = derive_keypair(self.config.rng_seed)
        return self._keypair

    def encrypt(self, x: int) -> int:
        x = int(x)
        if not 0 <= x <= PLAINTEXT_MAX:
            raise DomainError(f"plaintext {x} outside [0, {PLAINTEXT_MAX}]")
        return x

    def decrypt(self, value) -> int:
        return int(value)

    def trivial(self, x: int) -> int:
        return int(x)

    def is_value(self, value) -> bool:
        return isinstance(value, (int, np.integer))

    def add(self, a: int, b: int) -> int:
        return int(a) + int(b)

    def lut_eval(self, value: int, table: Sequence[int]) -> int:
        check_table(table)
        value = int(value)
        if not 0 <= value <= PLAINTEXT_MAX:
            raise DomainError(f"lookup input {value} outside [0, {PLAINTEXT_MAX}]")
        return int(table[value])

    def bootstrap(self, value: int) -> int:
        return int(value)

    def noise_budget_of(self, value) -> Optional[int]:
        return None
