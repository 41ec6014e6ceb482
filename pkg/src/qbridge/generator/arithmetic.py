"""QFT-based and ripple-carry arithmetic on little-endian registers."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..circuit import Circuit, GateKind, invert_circuit
from ..errors import OperandOverflow, WidthMismatch
from ..problem import ArithmeticOperands, ProblemTag
from .mcx import mcp, toffoli


@dataclass
class ArithmeticCircuit:
    circuit: Circuit
    a: list[int]
    b: list[int]
    c: list[int]
    ancillas: list[int]
    target: list[int]


def _check(w: ArithmeticOperands) -> None:
    if min(w.width_a, w.width_b, w.product_width) < 1:
        raise WidthMismatch("register widths must be at least 1")
    if not (0 <= w.a < 1 << w.width_a and 0 <= w.b < 1 << w.width_b):
        raise OperandOverflow("operand does not fit its register")


def _keep(theta: float, truncate: int | None) -> bool:
    return truncate is None or abs(theta) >= 2 * math.pi / 2**truncate


def qft_on(c: Circuit, reg: list[int], truncate: int | None = None) -> None:
    """Fourier transform without the final reversal: reg[j] ends with phase 2*pi*x/2^(j+1)."""
    for j in range(len(reg) - 1, -1, -1):
        c.h(reg[j])
        for m in range(j - 1, -1, -1):
            theta = math.pi / 2 ** (j - m)
            if _keep(theta, truncate):
                c.cp(theta, reg[m], reg[j])


def iqft_on(c: Circuit, reg: list[int], truncate: int | None = None) -> None:
    tmp = Circuit(c.num_qubits)
    qft_on(tmp, reg, truncate)
    c.compose(invert_circuit(tmp))


def build_qft(n: int, swaps: bool = True, truncate: int | None = None) -> Circuit:
    """Textbook QFT on n qubits (qubit 0 least significant)."""
    c = Circuit(n)
    qft_on(c, list(range(n)), truncate)
    if swaps:
        for i in range(n // 2):
            c.swap(i, n - 1 - i)
    return c


def _phase_add(c: Circuit, src: list[int], dst: list[int], sign: float, truncate) -> None:
    # dst is in the Fourier basis; add sign * value(src)
    for j in range(len(dst)):
        for m in range(min(j + 1, len(src))):
            theta = sign * math.pi / 2 ** (j - m)
            if _keep(theta, truncate):
                c.cp(theta, src[m], dst[j])


def _layout(w: ArithmeticOperands, with_c: bool = False, carries: int = 0):
    a = list(range(w.width_a))
    b = list(range(w.width_a, w.width_a + w.width_b))
    start = w.width_a + w.width_b
    cw = w.product_width if with_c else 0
    cr = list(range(start, start + cw))
    anc = list(range(start + cw, start + cw + carries))
    return a, b, cr, anc, start + cw + carries


def build_qft_adder(w: ArithmeticOperands, truncate: int | None = None) -> ArithmeticCircuit:
    _check(w)
    a, b, _, _, width = _layout(w)
    c = Circuit(width)
    qft_on(c, b, truncate)
    _phase_add(c, a, b, 1.0, truncate)
    iqft_on(c, b, truncate)
    return ArithmeticCircuit(c, a, b, [], [], b)


def build_qft_subtractor(w: ArithmeticOperands, truncate: int | None = None) -> ArithmeticCircuit:
    """Adds the two's complement of a, i.e. negated Fourier phases."""
    _check(w)
    a, b, _, _, width = _layout(w)
    c = Circuit(width)
    qft_on(c, b, truncate)
    _phase_add(c, a, b, -1.0, truncate)
    iqft_on(c, b, truncate)
    return ArithmeticCircuit(c, a, b, [], [], b)


def build_qft_multiplier(w: ArithmeticOperands, truncate: int | None = None) -> ArithmeticCircuit:
    """c += a*b as a sequence of a_i-controlled Fourier additions of (b << i)."""
    _check(w)
    a, b, cr, _, width = _layout(w, with_c=True)
    c = Circuit(width)
    qft_on(c, cr, truncate)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            for k, ck in enumerate(cr):
                if i + j > k:
                    continue
                theta = math.pi / 2 ** (k - i - j)
                if _keep(theta, truncate):
                    mcp(c, theta, [ai, bj], ck)
    iqft_on(c, cr, truncate)
    return ArithmeticCircuit(c, a, b, cr, [], cr)


def build_ripple_adder(w: ArithmeticOperands) -> ArithmeticCircuit:
    """Carry/sum full-adder cells; wB-1 carry ancillas start and end in |0>."""
    _check(w)
    nb = w.width_b
    a_reg, b, _, anc, width = _layout(w, carries=max(nb - 1, 0))
    c = Circuit(width)
    a = [a_reg[i] if i < len(a_reg) else None for i in range(nb)]
    carry = [None] + anc  # carry[i] feeds bit i

    def carry_cell(i: int, circ: Circuit):
        ci, ai, bi, co = carry[i], a[i], b[i], carry[i + 1]
        if ai is not None:
            toffoli(circ, ai, bi, co)
            circ.cx(ai, bi)
        if ci is not None:
            toffoli(circ, ci, bi, co)

    def sum_cell(i: int):
        if a[i] is not None:
            c.cx(a[i], b[i])
        if carry[i] is not None:
            c.cx(carry[i], b[i])

    cells = []
    for i in range(nb - 1):
        cell = Circuit(width)
        carry_cell(i, cell)
        cells.append(cell)
        c.compose(cell)
    sum_cell(nb - 1)
    for i in range(nb - 2, -1, -1):
        c.compose(invert_circuit(cells[i]))
        sum_cell(i)
    return ArithmeticCircuit(c, a_reg, b, [], anc, b)


def build_ripple_subtractor(w: ArithmeticOperands) -> ArithmeticCircuit:
    add = build_ripple_adder(w)
    return ArithmeticCircuit(invert_circuit(add.circuit), add.a, add.b, [], add.ancillas, add.b)


BUILDERS = {
    ("qft", ProblemTag.ADD): build_qft_adder,
    ("qft", ProblemTag.SUB): build_qft_subtractor,
    ("qft", ProblemTag.MUL): build_qft_multiplier,
    ("reversible", ProblemTag.ADD): build_ripple_adder,
    ("reversible", ProblemTag.SUB): build_ripple_subtractor,
}


def build_arithmetic_circuit(op: ProblemTag, w: ArithmeticOperands, encoding: str = "qft") -> ArithmeticCircuit:
    try:
        builder = BUILDERS[(encoding, op)]
    except KeyError:
        raise WidthMismatch(f"no {encoding} circuit for {op.display}") from None
    return builder(w)


def prepared(ac: ArithmeticCircuit, w: ArithmeticOperands, measure: bool = True) -> Circuit:
    """Basis-state preparation of a and b, the operation, then measurement of the target."""
    c = Circuit(ac.circuit.num_qubits)
    for i, q in enumerate(ac.a):
        if (w.a >> i) & 1:
            c.x(q)
    for i, q in enumerate(ac.b):
        if (w.b >> i) & 1:
            c.x(q)
    c.compose(ac.circuit)
    if measure:
        c.measure_all(ac.target)
    return c


def uses_only(c: Circuit, kinds: set[GateKind]) -> bool:
    return all(g.kind in kinds for g in c.ops)
