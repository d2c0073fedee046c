"""Circuit families: loaders, the RY/CZ ansatz, the ripple-carry comparator,
payoff rotations, the newsvendor A-operator, the Grover operator and the QFT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import sim
from .errors import StructuralError, ValidationError
from .sim import Circuit


@dataclass(frozen=True)
class LinearPayoffTerm:
    """``sign * (slope * i + offset)`` where ``i`` is the integer held by
    ``register`` (default: the value register passed to the builder).

    With ``control_flag`` set, the term only contributes when that qubit is 1.
    """

    slope: float
    offset: float = 0.0
    control_flag: Optional[int] = None
    sign: int = 1
    register: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValidationError(f"sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class ScalingSpec:
    """Affine map of payoffs onto rotation angles.

    A payoff ``f`` becomes ``c * (2 (f - f_min) / (f_max - f_min) - 1) + pi/4``,
    so that ``sin^2`` of the angle is roughly ``c * f_scaled + 1/2``.
    """

    c: float
    f_min: float
    f_max: float

    def __post_init__(self):
        if not (0 < self.c <= 1):
            raise ValidationError(f"scaling c must lie in (0, 1], got {self.c}")
        if not self.f_max > self.f_min:
            raise ValidationError(f"f_max ({self.f_max}) must exceed f_min ({self.f_min})")

    @property
    def slope(self) -> float:
        """Angle per unit of payoff."""
        return 2 * self.c / (self.f_max - self.f_min)

    @property
    def intercept(self) -> float:
        """Angle for a payoff of zero."""
        return self.c * (-2 * self.f_min / (self.f_max - self.f_min) - 1) + math.pi / 4

    def scaled(self, f):
        return 2 * (np.asarray(f, dtype=float) - self.f_min) / (self.f_max - self.f_min) - 1

    def angle(self, f):
        return self.c * self.scaled(f) + math.pi / 4

    def probability(self, f):
        """``P(|1>)`` of the objective qubit for a basis state with payoff ``f``."""
        return np.sin(self.angle(f)) ** 2


@dataclass(frozen=True)
class AnsatzSpec:
    n: int
    depth: int
    params: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.n < 1:
            raise ValidationError("ansatz needs at least one qubit")
        if self.depth < 0:
            raise ValidationError("ansatz depth must be >= 0")
        want = (self.depth + 1) * self.n
        if len(self.params) != want:
            raise ValidationError(
                f"ansatz on {self.n} qubits with depth {self.depth} takes {want} parameters, "
                f"got {len(self.params)}")

    @staticmethod
    def num_params(n: int, depth: int) -> int:
        return (depth + 1) * n


# -- state preparation -------------------------------------------------------

def build_distribution_loader(pmf) -> Circuit:
    """Exact amplitude loader ``|0> -> sum_i sqrt(p_i) |i>``.

    Binary-tree construction: the top qubit is rotated by the marginal of the
    upper half, and each lower qubit by a rotation conditioned on the bits
    above it.
    """
    p = np.asarray(getattr(pmf, "probs", pmf), dtype=float)
    n = int(round(math.log2(len(p)))) if len(p) else 0
    if len(p) < 2 or 1 << n != len(p):
        raise ValidationError(f"pmf length must be a power of two >= 2, got {len(p)}")
    if np.any(~np.isfinite(p)) or np.any(p < 0):
        raise ValidationError("pmf entries must be finite and non-negative")
    if abs(p.sum() - 1) > 1e-9:
        raise ValidationError(f"pmf sums to {p.sum()}, not 1")

    circ = Circuit.with_registers(("value", n))
    tree = p.reshape((2,) * n)  # axis 0 = most significant qubit
    for level in range(n):
        q = n - 1 - level
        # marginal over the top `level+1` qubits, shape (2,)*(level+1)
        marg = tree.sum(axis=tuple(range(level + 1, n))) if level + 1 < n else tree
        for prefix in range(1 << level):
            bits = [(prefix >> (level - 1 - k)) & 1 for k in range(level)]  # MSB first
            node = marg[tuple(bits)] if level else marg
            p0, p1 = float(node[0]), float(node[1])
            if p0 + p1 <= 0 or p1 <= 0:
                continue
            angle = 2 * math.atan2(math.sqrt(p1), math.sqrt(p0))
            controls = [n - 1 - k for k in range(level)]
            zeros = [c for c, b in zip(controls, bits) if b == 0]
            circ.extend(sim.x(c) for c in zeros)
            circ.append(sim.mcry(angle, controls, q) if controls else sim.ry(angle, q))
            circ.extend(sim.x(c) for c in zeros)
    return circ


def build_ansatz(spec: AnsatzSpec) -> Circuit:
    """RY layer followed by ``depth`` repetitions of (linear CZ chain, RY layer)."""
    n = spec.n
    circ = Circuit.with_registers(("value", n))
    th = spec.params
    circ.extend(sim.ry(th[q], q) for q in range(n))
    for rep in range(1, spec.depth + 1):
        circ.extend(sim.cz(q, q + 1) for q in range(n - 1))
        circ.extend(sim.ry(th[rep * n + q], q) for q in range(n))
    return circ


# -- comparator --------------------------------------------------------------

def build_comparator(n: int) -> Circuit:
    """Ripple-carry comparator ``|a>|b>|z>|0> -> |a>|b>|z xor [b <= a]>|0>``.

    Registers: ``a`` and ``b`` (n qubits each), ``z`` and one carry ancilla
    ``anc``.  The carry of ``~a + b`` is the predicate ``b > a``; it is built
    with the majority (MAJ) chain, copied to ``z``, and uncomputed, and ``z``
    is finally negated.
    """
    if n < 1:
        raise ValidationError(f"comparator width must be >= 1, got {n}")
    circ = Circuit.with_registers(("a", n), ("b", n), ("z", 1), ("anc", 1))
    a, b = list(circ["a"]), list(circ["b"])
    zq, anc = circ["z"][0], circ["anc"][0]

    def maj(carry, bq, aq):
        return [sim.cnot(aq, bq), sim.cnot(aq, carry), sim.ccx(carry, bq, aq)]

    forward: List[sim.Gate] = [sim.x(q) for q in a]
    carry = anc
    for i in range(n):
        forward += maj(carry, b[i], a[i])
        carry = a[i]
    circ.extend(forward)
    circ.append(sim.cnot(a[n - 1], zq))
    circ.extend(g.inverse() for g in reversed(forward))
    circ.append(sim.x(zq))
    return circ


def comparator_metrics(n: int) -> Tuple[int, int]:
    """``(size, depth)`` of :func:`build_comparator` with Toffolis counted as one gate."""
    c = build_comparator(n)
    return c.size(), c.depth()


# -- payoff ------------------------------------------------------------------

def build_payoff_rotation(terms: Sequence[LinearPayoffTerm], value_register: Sequence[int],
                          objective_qubit: int, scaling: ScalingSpec,
                          num_qubits: Optional[int] = None) -> Circuit:
    """Controlled-RY encoding of a sum of linear payoffs.

    On a basis state with total payoff ``f`` the objective qubit ends in
    ``cos(phi)|0> + sin(phi)|1>`` with ``phi = scaling.angle(f)``.
    """
    value_register = tuple(value_register)
    used = set(value_register)
    for t in terms:
        used |= set(t.register or ())
        if t.control_flag is not None:
            used.add(t.control_flag)
    if objective_qubit in used:
        raise StructuralError("objective qubit overlaps a value/flag register")
    width = num_qubits if num_qubits is not None else max(used | {objective_qubit}) + 1
    circ = Circuit(width)

    k = scaling.slope
    offset = scaling.intercept
    for t in terms:
        reg = t.register if t.register is not None else value_register
        flag = () if t.control_flag is None else (t.control_flag,)
        for j, q in enumerate(reg):
            ang = 2 * t.sign * k * t.slope * (1 << j)
            if ang:
                circ.append(sim.mcry(ang, flag + (q,), objective_qubit))
        if t.offset:
            ang = 2 * t.sign * k * t.offset
            if flag:
                circ.append(sim.cry(ang, flag[0], objective_qubit))
            else:
                offset += t.sign * k * t.offset
    circ.append(sim.ry(2 * offset, objective_qubit))
    return circ


def build_newsvendor_A(ansatz: AnsatzSpec, demand_loader: Circuit, instance,
                       scaling: ScalingSpec) -> Circuit:
    """``A_theta = F (V(theta) x P_X x I)`` for the fixed-plus-linear newsvendor.

    Qubit layout (registers of the returned circuit): ``supply`` (k),
    ``demand`` (n), ``anc`` (comparator carry), ``flags`` (d<=s, s<=d, s==d)
    and ``objective``.  Flags and ancilla are uncomputed, so the state is
    ``sum sqrt(q_s p_d) |s>|d>|0..0> (cos phi |0> + sin phi |1>)``.
    """
    k = ansatz.n
    n = demand_loader.num_qubits
    if k != n:
        raise ValidationError(f"supply and demand registers must have equal width, got {k} and {n}")
    r, c, t = instance.r, instance.c, instance.t
    circ = Circuit.with_registers(("supply", k), ("demand", n), ("anc", 1), ("flags", 3), ("objective", 1))
    s_reg, d_reg = list(circ["supply"]), list(circ["demand"])
    anc = circ["anc"][0]
    f_sd, f_ds, f_eq = circ["flags"]
    obj = circ["objective"][0]

    circ.compose(build_ansatz(ansatz), s_reg)
    circ.compose(demand_loader, d_reg)

    cmp = build_comparator(n)
    # comparator(a, b, z, anc): z ^= [b <= a]
    flags_on = Circuit(circ.num_qubits)
    flags_on.compose(cmp, s_reg + d_reg + [f_sd, anc])   # [d <= s]
    flags_on.compose(cmp, d_reg + s_reg + [f_ds, anc])   # [s <= d]
    flags_on.append(sim.ccx(f_sd, f_ds, f_eq))           # [s == d]
    circ.compose(flags_on)

    terms = [
        LinearPayoffTerm(r, control_flag=f_sd, register=tuple(d_reg)),
        LinearPayoffTerm(r, control_flag=f_ds, register=tuple(s_reg)),
        LinearPayoffTerm(r, control_flag=f_eq, register=tuple(s_reg), sign=-1),
        LinearPayoffTerm(c, register=tuple(s_reg), sign=-1),
        LinearPayoffTerm(0.0, offset=t, sign=-1),
    ]
    circ.compose(build_payoff_rotation(terms, s_reg, obj, scaling, circ.num_qubits))
    if t:
        # give the fixed cost back on the s == 0 pattern
        circ.extend(sim.x(q) for q in s_reg)
        circ.append(sim.mcry(2 * scaling.slope * t, s_reg, obj))
        circ.extend(sim.x(q) for q in s_reg)

    circ.compose(sim.invert(flags_on))
    return circ


# -- Grover operator and QFT -------------------------------------------------

def build_grover_operator(A: Circuit, objective_qubit: int) -> Circuit:
    """``Q = A S_0 A^dagger S_psi0`` with ``Q^k A|0>`` following
    ``cos((2k+1) theta)|psi0>|0> + sin((2k+1) theta)|psi1>|1>`` exactly
    (including sign).
    """
    nq = A.num_qubits
    if not 0 <= objective_qubit < nq:
        raise StructuralError(f"objective qubit {objective_qubit} outside a {nq}-qubit circuit")
    Q = Circuit(nq, [], dict(A.registers))
    Q.append(sim.z(objective_qubit))
    Q.compose(sim.invert(A))
    Q.extend(sim.x(q) for q in range(nq))
    Q.append(sim.mcz(list(range(nq - 1)), nq - 1) if nq > 1 else sim.z(0))
    Q.extend(sim.x(q) for q in range(nq))
    Q.compose(A)
    # -(I - 2|0><0|) = 2|0><0| - I; makes Q a pure rotation by 2 theta.
    Q.global_phase = math.pi
    return Q


def build_qft(m: int, inverse: bool = False) -> Circuit:
    """``|j> -> M^{-1/2} sum_k exp(2 pi i j k / M) |k>`` on ``m`` qubits."""
    if m < 1:
        raise ValidationError(f"QFT width must be >= 1, got {m}")
    circ = Circuit(m)
    for j in reversed(range(m)):
        circ.append(sim.h(j))
        for kq in reversed(range(j)):
            circ.append(sim.cphase(math.pi / (1 << (j - kq)), kq, j))
    for i in range(m // 2):
        circ.append(sim.swap(i, m - 1 - i))
    return sim.invert(circ) if inverse else circ
