"""Optional adapter over a real torus-FHE runtime (concrete-python).

This backend is a separately built component: the package works fully
without it, and requesting it in a build where ``concrete-python`` is
not installed raises :class:`~hegram.exceptions.CapabilityError`.

When the runtime is present, the adapter exposes the same contract as
the other contexts with one extra obligation: every lookup table a run
will use must be declared up front via ``prepare_tables`` so the
underlying circuits can be compiled once (compilation is the dominant
cost of the real runtime).  The detector pipelines do this in their
setup phase.  Operation counters mirror whatever statistics the runtime
exposes; when it exposes none, counts stay zero and
``not_instrumented`` is set.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Tuple

from ..exceptions import CapabilityError, DomainError
from .base import (
    PLAINTEXT_MAX,
    ContextConfig,
    EvalContext,
    KeyPair,
    KIND_NATIVE,
    check_table,
)

try:  # pragma: no cover - depends on the optional runtime
    from concrete import fhe as _fhe

    NATIVE_AVAILABLE = True
except ImportError:  # pragma: no cover
    _fhe = None
    NATIVE_AVAILABLE = False

_MISSING_MSG = (
    "the native FHE backend requires the optional 'concrete-python' package; "
    "install hegram[native] or use the 'plain' or 'simulated' context"
)


def native_available() -> bool:
    """True when the optional FHE runtime can be imported."""
    return NATIVE_AVAILABLE


class NativeContext(EvalContext):  # pragma: no cover - optional backend
    """Adapter compiling add/lookup kernels through concrete-python."""

    def __init__(self, config: ContextConfig | None = None):
        if not NATIVE_AVAILABLE:
            raise CapabilityError(_MISSING_MSG)
        if config is None:
            config = ContextConfig(kind=KIND_NATIVE)
        super().__init__(config)
        self.not_instrumented = False
        self._tables: Tuple[Tuple[int, ...], ...] = ()
        self._circuits = {}
        self._add_circuit = None

    # -- compilation -----------------------------------------------------

    def prepare_tables(self, tables: Iterable[Sequence[int]]) -> None:
        """Compile one lookup circuit per distinct table, plus the adder."""
        unique = []
        for table in tables:
            check_table(table)
            key = tuple(int(t) for t in table)
            if key not in self._circuits and key not in unique:
                unique.append(key)
        inputset = list(range(PLAINTEXT_MAX + 1))
        for key in unique:
            lut = _fhe.LookupTable(list(key))

            def apply(x, lut=lut):
                return lut[x]

            compiler = _fhe.Compiler(apply, {"x": "encrypted"})
            self._circuits[key] = compiler.compile(inputset)
        if self._add_circuit is None:
            pairs = [(a, PLAINTEXT_MAX - a) for a in range(0, PLAINTEXT_MAX + 1, 15)]
            pairs += [(0, 0), (1, 1)]
            compiler = _fhe.Compiler(lambda x, y: x + y, {"x": "encrypted", "y": "encrypted"})
            self._add_circuit = compiler.compile(pairs)

    def _circuit_for(self, table: Sequence[int]):
        key = tuple(int(t) for t in table)
        circuit = self._circuits.get(key)
        if circuit is None:
            raise CapabilityError(
                "table was not declared via prepare_tables(); the native "
                "backend compiles its lookup circuits ahead of execution"
            )
        return circuit

    def _charge(self, circuit) -> None:
        stats = getattr(circuit, "statistics", None)
        if not stats:
            self.not_instrumented = True
            return
        self.counter.pbs += int(stats.get("programmable_bootstrap_count", 0))
        self.counter.key_switch += int(stats.get("key_switch_count", 0))
        self.counter.clear_add += int(stats.get("clear_addition_count", 0))
        self.counter.encrypted_add += int(stats.get("encrypted_addition_count", 0))
        self.counter.clear_mul += int(stats.get("clear_multiplication_count", 0))
        self.counter.encrypted_neg += int(stats.get("encrypted_negation_count", 0))

    # -- contract ----------------------------------------------------------

    def keygen(self) -> KeyPair:
        if self._add_circuit is None:
            raise CapabilityError("call prepare_tables() before keygen()")
        self._add_circuit.keygen()
        for circuit in self._circuits.values():
            circuit.keygen()
        return KeyPair(secret_key=None, eval_key=None)  # managed by the runtime

    def encrypt(self, x: int):
        if not 0 <= int(x) <= PLAINTEXT_MAX:
            raise DomainError(f"plaintext {x} outside [0, {PLAINTEXT_MAX}]")
        if self._add_circuit is None:
            raise CapabilityError("call prepare_tables() before encrypting")
        value, _ = self._add_circuit.encrypt(int(x), 0)
        return value

    def decrypt(self, value) -> int:
        return int(self._add_circuit.decrypt(value))

    def trivial(self, x: int):
        return self.encrypt(x)

    def is_value(self, value) -> bool:
        return not isinstance(value, int)

    def add(self, a, b):
        result = self._add_circuit.run(a, b)
        self._charge(self._add_circuit)
        return result

    def lut_eval(self, value, table: Sequence[int]):
        circuit = self._circuit_for(table)
        result = circuit.run(value)
        self._charge(circuit)
        return result

    def bootstrap(self, value):
        # The runtime schedules its own noise management.
        return value

    def noise_budget_of(self, value) -> Optional[int]:
        return None
