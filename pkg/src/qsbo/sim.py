"""Dense statevector simulation.

Qubit ``j`` is bit ``j`` of the basis index (little-endian), so ``X`` on
qubit ``j`` of ``|0...0>`` gives basis index ``2**j``.  Bitstrings returned by
:func:`sample` are printed most-significant qubit first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import StructuralError, ValidationError

_SQRT1_2 = 1 / math.sqrt(2)

# Base kinds; controlled variants (CNOT, CCX, MCX, CZ, CRY, MCRY, CPHASE) are
# the same kinds with a non-empty ``controls`` tuple.
BASE_KINDS = ("X", "Z", "H", "RY", "PHASE", "SWAP")
_PARAMETRIC = ("RY", "PHASE")
_SELF_INVERSE = ("X", "Z", "H", "SWAP")


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: Tuple[int, ...]
    controls: Tuple[int, ...] = ()
    angle: Optional[float] = None

    def __post_init__(self):
        if self.kind not in BASE_KINDS:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        ntargets = 2 if self.kind == "SWAP" else 1
        if len(self.targets) != ntargets:
            raise StructuralError(f"{self.kind} acts on {ntargets} target qubit(s), got {self.targets}")
        qubits = self.targets + self.controls
        if len(set(qubits)) != len(qubits):
            raise StructuralError(f"control and target qubits must be distinct: {qubits}")
        if any(q < 0 for q in qubits):
            raise StructuralError(f"negative qubit index in {qubits}")
        if self.kind in _PARAMETRIC:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValidationError(f"{self.kind} needs a finite angle, got {self.angle}")
        elif self.angle is not None:
            raise ValidationError(f"{self.kind} takes no angle")

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.controls + self.targets

    @property
    def name(self) -> str:
        """Conventional name, e.g. ``CNOT`` for an X with one control."""
        nc = len(self.controls)
        if nc == 0:
            return self.kind
        if self.kind == "X":
            return {1: "CNOT", 2: "CCX"}.get(nc, "MCX")
        if self.kind == "RY":
            return "CRY" if nc == 1 else "MCRY"
        if self.kind == "Z":
            return "CZ" if nc == 1 else "MCZ"
        if self.kind == "PHASE":
            return "CPHASE" if nc == 1 else "MCPHASE"
        return "C" * nc + self.kind

    def base_matrix(self) -> np.ndarray:
        """Unitary of the gate on its targets only (controls excluded)."""
        if self.kind == "X":
            return np.array([[0, 1], [1, 0]], dtype=complex)
        if self.kind == "Z":
            return np.array([[1, 0], [0, -1]], dtype=complex)
        if self.kind == "H":
            return np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT1_2
        if self.kind == "RY":
            c, s = math.cos(self.angle / 2), math.sin(self.angle / 2)
            return np.array([[c, -s], [s, c]], dtype=complex)
        if self.kind == "PHASE":
            return np.diag([1, np.exp(1j * self.angle)]).astype(complex)
        # SWAP in the (t0, t1) basis ordering |t1 t0>
        return np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)

    def matrix(self) -> np.ndarray:
        """Unitary on ``controls + targets`` (little-endian in that order)."""
        base = self.base_matrix()
        nc = len(self.controls)
        dim_t = base.shape[0]
        full = np.eye(dim_t << nc, dtype=complex)
        # Controls are the low bits; all-ones control pattern selects a block.
        sel = [(t << nc) | ((1 << nc) - 1) for t in range(dim_t)]
        full[np.ix_(sel, sel)] = base
        return full

    def inverse(self) -> "Gate":
        if self.kind in _SELF_INVERSE:
            return self
        return Gate(self.kind, self.targets, self.controls, -self.angle)

    def with_controls(self, extra: Iterable[int]) -> "Gate":
        return Gate(self.kind, self.targets, tuple(extra) + self.controls, self.angle)


# -- gate constructors -------------------------------------------------------

def x(q):
    return Gate("X", (q,))


def z(q):
    return Gate("Z", (q,))


def h(q):
    return Gate("H", (q,))


def ry(angle, q):
    return Gate("RY", (q,), (), float(angle))


def phase(angle, q):
    return Gate("PHASE", (q,), (), float(angle))


def swap(q0, q1):
    return Gate("SWAP", (q0, q1))


def cnot(c, t):
    return Gate("X", (t,), (c,))


def ccx(c0, c1, t):
    return Gate("X", (t,), (c0, c1))


def mcx(controls, t):
    return Gate("X", (t,), tuple(controls))


def cz(c, t):
    return Gate("Z", (t,), (c,))


def mcz(controls, t):
    return Gate("Z", (t,), tuple(controls))


def cry(angle, c, t):
    return Gate("RY", (t,), (c,), float(angle))


def mcry(angle, controls, t):
    return Gate("RY", (t,), tuple(controls), float(angle))


def cphase(angle, c, t):
    return Gate("PHASE", (t,), (c,), float(angle))


# -- circuits ----------------------------------------------------------------

@dataclass
class Circuit:
    """Ordered gate list over ``num_qubits`` qubits with named registers.

    ``global_phase`` matters once a circuit is turned into a controlled
    operation (it becomes a relative phase on the control).
    """

    num_qubits: int
    gates: List[Gate] = field(default_factory=list)
    registers: Dict[str, range] = field(default_factory=dict)
    global_phase: float = 0.0

    @classmethod
    def with_registers(cls, *spec: Tuple[str, int]) -> "Circuit":
        """Allocate contiguous registers in the given order, e.g.
        ``Circuit.with_registers(("a", 3), ("b", 3), ("z", 1))``."""
        regs = {}
        start = 0
        for name, size in spec:
            if size < 1:
                raise ValidationError(f"register {name!r} needs at least one qubit")
            if name in regs:
                raise StructuralError(f"duplicate register {name!r}")
            regs[name] = range(start, start + size)
            start += size
        return cls(start, [], regs)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValidationError("a circuit needs at least one qubit")
        seen = set()
        for name, rng in self.registers.items():
            if rng.start < 0 or rng.stop > self.num_qubits:
                raise StructuralError(f"register {name!r} {rng} exceeds {self.num_qubits} qubits")
            if seen & set(rng):
                raise StructuralError(f"register {name!r} overlaps another register")
            seen |= set(rng)
        for g in self.gates:
            self._check(g)

    def __getitem__(self, name: str) -> range:
        return self.registers[name]

    def __len__(self) -> int:
        return len(self.gates)

    def _check(self, gate: Gate):
        bad = [q for q in gate.qubits if q >= self.num_qubits]
        if bad:
            raise StructuralError(f"{gate.name} uses qubit(s) {bad} outside a {self.num_qubits}-qubit circuit")

    def append(self, gate: Gate) -> "Circuit":
        self._check(gate)
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def compose(self, other: "Circuit", qubits: Optional[Sequence[int]] = None) -> "Circuit":
        """Append ``other``'s gates, mapping its qubit ``i`` to ``qubits[i]``."""
        if qubits is None:
            if other.num_qubits > self.num_qubits:
                raise StructuralError("composed circuit is wider than the target")
            for g in other.gates:
                self.append(g)
        else:
            if len(qubits) != other.num_qubits:
                raise StructuralError(f"qubit map has {len(qubits)} entries for a {other.num_qubits}-qubit circuit")
            m = list(qubits)
            for g in other.gates:
                self.append(Gate(g.kind, tuple(m[q] for q in g.targets), tuple(m[q] for q in g.controls), g.angle))
        self.global_phase += other.global_phase
        return self

    def copy(self) -> "Circuit":
        return Circuit(self.num_qubits, list(self.gates), dict(self.registers), self.global_phase)

    def size(self) -> int:
        return len(self.gates)

    def depth(self) -> int:
        """Critical-path length; every gate occupies one layer on all its qubits."""
        level = [0] * self.num_qubits
        for g in self.gates:
            d = 1 + max(level[q] for q in g.qubits)
            for q in g.qubits:
                level[q] = d
        return max(level, default=0)

    def count_ops(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for g in self.gates:
            out[g.name] = out.get(g.name, 0) + 1
        return out


def invert(circuit: Circuit) -> Circuit:
    """Adjoint circuit: reversed order, each gate replaced by its inverse."""
    return Circuit(
        circuit.num_qubits,
        [g.inverse() for g in reversed(circuit.gates)],
        dict(circuit.registers),
        -circuit.global_phase,
    )


def controlled(circuit: Circuit, control: int, num_qubits: Optional[int] = None,
               qubits: Optional[Sequence[int]] = None) -> Circuit:
    """Controlled version of ``circuit`` placed on a wider register.

    ``qubits`` maps the inner circuit's qubits into the result; the global
    phase turns into a PHASE gate on ``control``.
    """
    width = num_qubits if num_qubits is not None else circuit.num_qubits + 1
    m = list(qubits) if qubits is not None else list(range(circuit.num_qubits))
    if control in m:
        raise StructuralError("control qubit overlaps the controlled circuit")
    out = Circuit(width)
    for g in circuit.gates:
        out.append(Gate(g.kind, tuple(m[q] for q in g.targets),
                        (control,) + tuple(m[q] for q in g.controls), g.angle))
    if circuit.global_phase % (2 * math.pi):
        out.append(phase(circuit.global_phase, control))
    return out


# -- statevectors ------------------------------------------------------------

@dataclass
class Statevector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.num_qubits < 1:
            raise ValidationError("a statevector needs at least one qubit")
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise StructuralError(
                f"expected {1 << self.num_qubits} amplitudes, got shape {self.amplitudes.shape}")

    @classmethod
    def zero(cls, num_qubits: int) -> "Statevector":
        return cls.basis(num_qubits, 0)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "Statevector":
        amps = np.zeros(1 << num_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self, qubits: Optional[Sequence[int]] = None) -> np.ndarray:
        """Outcome probabilities, optionally marginalised onto ``qubits``.

        The marginal is indexed little-endian over ``qubits`` in the order given.
        """
        p = np.abs(self.amplitudes) ** 2
        if qubits is None:
            return p
        qubits = list(qubits)
        _check_indices(qubits, self.num_qubits)
        n = self.num_qubits
        t = p.reshape((2,) * n)
        keep = [n - 1 - q for q in qubits]
        drop = tuple(ax for ax in range(n) if ax not in keep)
        marg = t.sum(axis=drop) if drop else t
        # Remaining axes are in increasing axis order; reorder so that the
        # first listed qubit is the least significant bit.
        order = sorted(keep)
        perm = [order.index(ax) for ax in reversed(keep)]
        return np.ascontiguousarray(np.transpose(marg, perm)).reshape(-1)


def _check_indices(qubits, n):
    for q in qubits:
        if not 0 <= q < n:
            raise StructuralError(f"qubit {q} out of range for {n} qubits")


def _apply_inplace(t: np.ndarray, gate: Gate, n: int) -> None:
    """Apply ``gate`` to the rank-``n`` tensor view ``t`` of a statevector."""
    idx = [slice(None)] * n
    for c in gate.controls:
        idx[n - 1 - c] = 1
    if gate.kind == "SWAP":
        a, b = gate.targets
        i01, i10 = list(idx), list(idx)
        i01[n - 1 - a], i01[n - 1 - b] = 1, 0
        i10[n - 1 - a], i10[n - 1 - b] = 0, 1
        i01, i10 = tuple(i01), tuple(i10)
        tmp = t[i01].copy()
        t[i01] = t[i10]
        t[i10] = tmp
        return
    ax = n - 1 - gate.targets[0]
    i0, i1 = list(idx), list(idx)
    i0[ax], i1[ax] = 0, 1
    i0, i1 = tuple(i0), tuple(i1)
    k = gate.kind
    if k == "X":
        tmp = t[i0].copy()
        t[i0] = t[i1]
        t[i1] = tmp
    elif k == "Z":
        t[i1] *= -1
    elif k == "PHASE":
        t[i1] *= np.exp(1j * gate.angle)
    else:
        u = gate.base_matrix()
        a0 = t[i0].copy()
        a1 = t[i1]
        t[i0] = u[0, 0] * a0 + u[0, 1] * a1
        t[i1] = u[1, 0] * a0 + u[1, 1] * a1


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    _check_indices(gate.qubits, state.num_qubits)
    amps = state.amplitudes.copy()
    _apply_inplace(amps.reshape((2,) * state.num_qubits), gate, state.num_qubits)
    return Statevector(state.num_qubits, amps)


def apply_circuit(state: Statevector, circuit: Circuit) -> Statevector:
    if circuit.num_qubits != state.num_qubits:
        raise StructuralError(
            f"circuit has {circuit.num_qubits} qubits but the state has {state.num_qubits}")
    n = state.num_qubits
    amps = state.amplitudes.copy()
    t = amps.reshape((2,) * n)
    for g in circuit.gates:
        _apply_inplace(t, g, n)
    if circuit.global_phase:
        amps *= np.exp(1j * circuit.global_phase)
    return Statevector(n, amps)


def run(circuit: Circuit) -> Statevector:
    """Shorthand for ``apply_circuit(|0...0>, circuit)``."""
    return apply_circuit(Statevector.zero(circuit.num_qubits), circuit)


def qubit_one_probability(state: Statevector, qubit: int) -> float:
    _check_indices([qubit], state.num_qubits)
    t = (np.abs(state.amplitudes) ** 2).reshape((2,) * state.num_qubits)
    return float(t.take(1, axis=state.num_qubits - 1 - qubit).sum())


def sample(state: Statevector, shots: int, seed=None,
           qubits: Optional[Sequence[int]] = None) -> Dict[str, int]:
    """Multinomial measurement histogram ``{bitstring: count}``.

    Bitstrings list the highest measured qubit first.  ``seed`` may be an int
    or a :class:`numpy.random.Generator`.
    """
    if shots < 1:
        raise ValidationError(f"shots must be >= 1, got {shots}")
    p = state.probabilities(qubits)
    p = p / p.sum()
    width = len(qubits) if qubits is not None else state.num_qubits
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, p)
    return {format(i, f"0{width}b"): int(c) for i, c in enumerate(counts) if c}


def to_matrix(circuit: Circuit) -> np.ndarray:
    """Dense unitary of a (small) circuit, column ``j`` = image of ``|j>``."""
    n = circuit.num_qubits
    if n > 12:
        raise StructuralError("to_matrix is limited to 12 qubits")
    dim = 1 << n
    cols = [apply_circuit(Statevector.basis(n, j), circuit).amplitudes for j in range(dim)]
    return np.stack(cols, axis=1)
