"""Multi-controlled gates expressed in the primitive gate set."""

from __future__ import annotations

import math
from typing import Sequence

from ..circuit import Circuit

T = math.pi / 4


def toffoli(c: Circuit, a: int, b: int, t: int) -> None:
    """Textbook 6-CNOT Toffoli with T = P(pi/4)."""
    c.h(t)
    c.cx(b, t)
    c.p(t, -T)
    c.cx(a, t)
    c.p(t, T)
    c.cx(b, t)
    c.p(t, -T)
    c.cx(a, t)
    c.p(b, T)
    c.p(t, T)
    c.h(t)
    c.cx(a, b)
    c.p(a, T)
    c.p(b, -T)
    c.cx(a, b)


def mcp(c: Circuit, theta: float, controls: Sequence[int], target: int) -> None:
    """Phase theta on the all-ones subspace of controls + target, ancilla-free.

    Recursion: C^k P(t) = CP(t/2)[c_k,t] C^{k-1}X[->c_k] CP(-t/2)[c_k,t] C^{k-1}X[->c_k] C^{k-1}P(t/2).
    """
    controls = list(controls)
    if not controls:
        c.p(target, theta)
        return
    if len(controls) == 1:
        c.cp(theta, controls[0], target)
        return
    *rest, last = controls
    c.cp(theta / 2, last, target)
    mcx(c, rest, last)
    c.cp(-theta / 2, last, target)
    mcx(c, rest, last)
    mcp(c, theta / 2, rest, target)


def _ladder(c: Circuit, ctrl: list[int], anc: list[int], t: int) -> None:
    # borrowed-ancilla V-chain: 4(k-2) Toffolis, ancillas may hold any state
    k = len(ctrl)

    def down_up(top_target: int):
        toffoli(c, ctrl[k - 1], anc[k - 3], top_target)
        for i in range(k - 2, 1, -1):
            toffoli(c, ctrl[i], anc[i - 2], anc[i - 1])
        toffoli(c, ctrl[0], ctrl[1], anc[0])
        for i in range(2, k - 1):
            toffoli(c, ctrl[i], anc[i - 2], anc[i - 1])
        toffoli(c, ctrl[k - 1], anc[k - 3], top_target)

    down_up(t)
    # second pass restores the borrowed ancillas
    for i in range(k - 2, 1, -1):
        toffoli(c, ctrl[i], anc[i - 2], anc[i - 1])
    toffoli(c, ctrl[0], ctrl[1], anc[0])
    for i in range(2, k - 1):
        toffoli(c, ctrl[i], anc[i - 2], anc[i - 1])


def mcx(c: Circuit, controls: Sequence[int], target: int, dirty: Sequence[int] = ()) -> None:
    """Multi-controlled X; `dirty` lists idle qubits that may be borrowed in any state."""
    controls = list(controls)
    k = len(controls)
    pool = [q for q in dirty if q != target and q not in controls]
    if k == 0:
        c.x(target)
    elif k == 1:
        c.cx(controls[0], target)
    elif k == 2:
        toffoli(c, controls[0], controls[1], target)
    elif k == 3 or not pool:
        c.h(target)
        mcp(c, math.pi, controls, target)
        c.h(target)
    elif len(pool) >= k - 2:
        _ladder(c, controls, pool[: k - 2], target)
    else:
        # split around one borrowed qubit; each half borrows from the other
        a = pool[0]
        m1 = (k + 1) // 2
        grp_a, grp_b = controls[:m1], controls[m1:]
        for _ in range(2):
            mcx(c, grp_a, a, grp_b + [target])
            mcx(c, grp_b + [a], target, grp_a)


def mcz(c: Circuit, qubits: Sequence[int], dirty: Sequence[int] = ()) -> None:
    """Phase -1 on the all-ones state of `qubits`."""
    qubits = list(qubits)
    if len(qubits) == 1:
        c.z(qubits[0])
        return
    if len(qubits) == 2:
        c.cz(qubits[0], qubits[1])
        return
    *ctrl, t = qubits
    c.h(t)
    mcx(c, ctrl, t, dirty)
    c.h(t)
