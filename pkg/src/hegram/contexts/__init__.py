"""Evaluation contexts: plain oracle, encrypted simulation, native adapter."""

from __future__ import annotations

from ..exceptions import ConfigurationError
from .base import (
    CONTEXT_KINDS,
    DEFAULT_FAILURE_PROBABILITY,
    DEFAULT_NOISE_BUDGET,
    KIND_NATIVE,
    KIND_PLAIN,
    KIND_SIMULATED,
    PLAINTEXT_BITS,
    PLAINTEXT_MAX,
    TABLE_SIZE,
    ContextConfig,
    EvalContext,
    EvalKey,
    KeyPair,
    OpCounter,
    SecretKey,
    derive_keypair,
)
from .native import NativeContext, native_available
from .plain import PlainContext
from .simulated import Ciphertext, SimulatedContext
from . import keystore

__all__ = [
    "CONTEXT_KINDS",
    "Ciphertext",
    "ContextConfig",
    "DEFAULT_FAILURE_PROBABILITY",
    "DEFAULT_NOISE_BUDGET",
    "EvalContext",
    "EvalKey",
    "KIND_NATIVE",
    "KIND_PLAIN",
    "KIND_SIMULATED",
    "KeyPair",
    "NativeContext",
    "OpCounter",
    "PLAINTEXT_BITS",
    "PLAINTEXT_MAX",
    "PlainContext",
    "SecretKey",
    "SimulatedContext",
    "TABLE_SIZE",
    "derive_keypair",
    "keystore",
    "make_context",
    "native_available",
]


def make_context(config: ContextConfig | str | None = None, **overrides) -> EvalContext:
    """Build the evaluation context a configuration asks for.

    Accepts a :class:`ContextConfig`, a kind string (``"plain"``,
    ``"simulated"``, ``"native"``), or None for the plain oracle.
    Keyword overrides are applied on top of the config.
    """
    if config is None:
        config = ContextConfig()
    elif isinstance(config, str):
        config = ContextConfig(kind=config)
    elif not isinstance(config, ContextConfig):
        raise ConfigurationError(
            f"expected a ContextConfig or kind string, got {type(config).__name__}"
        )
    if overrides:
        merged = config.__dict__ | overrides
        config = ContextConfig(**merged)

    if config.kind == KIND_PLAIN:
        return PlainContext(config)
    if config.kind == KIND_SIMULATED:
        return SimulatedContext(config)
    return NativeContext(config)
