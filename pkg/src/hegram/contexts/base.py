"""The arithmetic substrate shared by all evaluation backends.

Every algorithm in this package is written against one small contract:
8-bit integer values that support element addition, total table lookup,
and an explicit noise refresh.  Three backends implement it:

* ``PlainContext`` -- the plain-integer oracle; results define correctness.
* ``SimulatedContext`` -- enforces the constraints an encrypted torus
  backend imposes (limited noise budget, lookup-table-only comparisons,
  probabilistic lookup failure) and meters every operation.
* ``NativeContext`` -- optional adapter over a real FHE library.

Because the contract is identical, one code path serves plain and
encrypted execution and the plain results act as the decryption oracle
for the encrypted ones.
"""

from __future__ import annotations

import hashlib
from abc import ABC, abstractmethod
from dataclasses import dataclass, fields
from typing import Dict, Optional, Sequence

from ..exceptions import ConfigurationError

PLAINTEXT_BITS = 8
PLAINTEXT_MAX = (1 << PLAINTEXT_BITS) - 1
TABLE_SIZE = PLAINTEXT_MAX + 1

KIND_PLAIN = "plain"
KIND_SIMULATED = "simulated"
KIND_NATIVE = "native"
CONTEXT_KINDS = (KIND_PLAIN, KIND_SIMULATED, KIND_NATIVE)

DEFAULT_FAILURE_PROBABILITY = 1.0 / 100_000
DEFAULT_NOISE_BUDGET = 8


@dataclass
class OpCounter:
    """Per-category tally of substrate operations.

    Categories follow the cost taxonomy of torus-scheme circuits:
    programmable bootstraps, key switches, clear/encrypted additions,
    clear multiplies, and encrypted negations.  The pipelines in this
    package never multiply, so ``clear_mul`` stays 0 by construction.
    """

    pbs: int = 0
    key_switch: int = 0
    clear_add: int = 0
    encrypted_add: int = 0
    clear_mul: int = 0
    encrypted_neg: int = 0

    def total(self) -> int:
        return sum(getattr(self, f.name) for f in fields(self))

    def as_dict(self) -> Dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def copy(self) -> "OpCounter":
        return OpCounter(**self.as_dict())

    def __add__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(
            **{
                f.name: getattr(self, f.name) + getattr(other, f.name)
                for f in fields(self)
            }
        )

    def __sub__(self, other: "OpCounter") -> "OpCounter":
        diff = OpCounter(
            **{
                f.name: getattr(self, f.name) - getattr(other, f.name)
                for f in fields(self)
            }
        )
        if any(v < 0 for v in diff.as_dict().values()):
            raise ValueError("counter difference would be negative")
        return diff


@dataclass(frozen=True)
class ContextConfig:
    """Configuration for building an evaluation context.

    ``noise_budget`` is the number of additions a fresh ciphertext can
    absorb before a bootstrap becomes mandatory (simulation only).
    ``failure_probability`` models the small chance that a table lookup
    returns a wrong entry; injection is off by default so runs are
    deterministic.
    """

    kind: str = KIND_PLAIN
    rng_seed: int = 0
    noise_budget: int = DEFAULT_NOISE_BUDGET
    failure_probability: float = DEFAULT_FAILURE_PROBABILITY
    inject_failures: bool = False

    def __post_init__(self):
        if self.kind not in CONTEXT_KINDS:
            raise ConfigurationError(
                f"unknown context kind {self.kind!r}; expected one of {CONTEXT_KINDS}"
            )
        if self.noise_budget < 1:
            raise ConfigurationError(
                f"noise_budget must be >= 1, got {self.noise_budget}"
            )
        if not 0.0 <= self.failure_probability <= 1.0:
            raise ConfigurationError(
                f"failure_probability must be in [0, 1], got {self.failure_probability}"
            )


@dataclass(frozen=True)
class SecretKey:
    """Client-held decryption key.  Never leaves the client role."""

    key_id: bytes
    material: bytes


@dataclass(frozen=True)
class EvalKey:
    """Public evaluation key; sufficient for server-side computation only."""

    key_id: bytes
    material: bytes


@dataclass(frozen=True)
class KeyPair:
    secret_key: SecretKey
    eval_key: EvalKey

    @property
    def key_id(self) -> bytes:
        return self.eval_key.key_id


def derive_keypair(seed: int) -> KeyPair:
    """Deterministically derive a simulated key pair from a seed.

    The evaluation key is a one-way hash of the secret material: related
    to it, but useless for recovering plaintexts.
    """
    secret = hashlib.sha256(b"hegram/secret/" + seed.to_bytes(8, "little", signed=True)).digest()
    key_id = hashlib.sha256(b"hegram/id/" + secret).digest()[:16]
    eval_material = hashlib.sha256(b"hegram/eval/" + secret).digest()
    return KeyPair(
        secret_key=SecretKey(key_id=key_id, material=secret),
        eval_key=EvalKey(key_id=key_id, material=eval_material),
    )


def check_table(table: Sequence[int]) -> None:
    """A lookup table must be total over the 8-bit domain with 8-bit entries."""
    if len(table) != TABLE_SIZE:
        raise ConfigurationError(
            f"lookup table must have {TABLE_SIZE} entries, got {len(table)}"
        )


class EvalContext(ABC):
    """Abstract arithmetic substrate.

    Subclasses define what a "value" is (int or ciphertext) and how the
    five primitives behave.  ``counter`` meters whatever the backend
    charges; the plain oracle charges nothing.
    """

    def __init__(self, config: ContextConfig):
        self.config = config
        self.counter = OpCounter()

    @property
    def kind(self) -> str:
        return self.config.kind

    # -- key and value lifecycle ------------------------------------

    @abstractmethod
    def keygen(self) -> KeyPair:
        """Generate (and install) the context's key pair."""

    @abstractmethod
    def encrypt(self, x: int):
        """Client-side ingestion of one plain integer in [0, 255]."""

    @abstractmethod
    def decrypt(self, value) -> int:
        """Client-side recovery of a plain integer; requires the secret key."""

    @abstractmethod
    def trivial(self, x: int):
        """A server-side constant (e.g. an accumulator seeded with 0)."""

    @abstractmethod
    def is_value(self, value) -> bool:
        """True if ``value`` is already in this context's value domain."""

    def ingest(self, value):
        """Pass context values through; encrypt plain integers."""
        return value if self.is_value(value) else self.encrypt(int(value))

    # -- arithmetic primitives --------------------------------------

    @abstractmethod
    def add(self, a, b):
        """Element addition; decrypts to the sum of the operands."""

    @abstractmethod
    def lut_eval(self, value, table: Sequence[int]):
        """Apply a total 8-bit lookup table; refreshes noise as a side effect."""

    @abstractmethod
    def bootstrap(self, value):
        """Refresh a value's noise budget without changing its plaintext."""

    @abstractmethod
    def noise_budget_of(self, value) -> Optional[int]:
        """Remaining additions before a refresh is mandatory; None = unlimited."""

    def prepare_tables(self, tables) -> None:
        """Declare the lookup tables a run will use.

        Gives backends that compile ahead of execution a chance to do so;
        the in-process backends need no preparation.
        """

    # -- accounting ---------------------------------------------------

    def snapshot_counts(self) -> OpCounter:
        """A consistent point-in-time copy of the operation counters."""
        return self.counter.copy()

    def reset_counts(self) -> None:
        self.counter = OpCounter()
