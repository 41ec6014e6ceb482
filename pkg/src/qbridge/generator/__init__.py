"""Circuit generators for every quantum-compatible format."""

from .arithmetic import (
    ArithmeticCircuit,
    build_arithmetic_circuit,
    build_qft,
    build_qft_adder,
    build_qft_multiplier,
    build_qft_subtractor,
    build_ripple_adder,
    build_ripple_subtractor,
    prepared,
)
from .grover import (
    GroverResult,
    GroverRunner,
    GroverSchedule,
    build_diffusion,
    build_grover_circuit,
    build_grover_iteration,
    build_oracle,
    grover_search,
    oracle_width,
)
from .mcx import mcp, mcx, mcz, toffoli
from .variational import (
    QaoaConfig,
    QaoaParams,
    build_qaoa,
    build_vqe_ansatz,
    init_qaoa_params,
    init_vqe_params,
)

__all__ = [
    "ArithmeticCircuit", "build_arithmetic_circuit", "build_qft", "build_qft_adder",
    "build_qft_multiplier", "build_qft_subtractor", "build_ripple_adder",
    "build_ripple_subtractor", "prepared", "GroverResult", "GroverRunner",
    "GroverSchedule", "build_diffusion", "build_grover_circuit", "build_grover_iteration",
    "build_oracle", "grover_search", "oracle_width", "mcp", "mcx", "mcz", "toffoli",
    "QaoaConfig", "QaoaParams", "build_qaoa", "build_vqe_ansatz", "init_qaoa_params",
    "init_vqe_params",
]
