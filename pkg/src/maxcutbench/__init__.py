"""Max-Cut, QUBO and Ising solvers with a benchmark harness."""
from .anneal import (
    SaRunConfig,
    SaSchedule,
    SolveResult,
    greedy_descent,
    sa1_preset,
    sa2_preset,
    sa_solve,
)
from .exact import ExactResult, branch_and_bound, brute_force
from .graph import Graph, cut_delta, cut_value, laplacian, quad_form
from .transforms import (
    IsingInstance,
    QuboInstance,
    TransformResult,
    ising_energy,
    ising_to_maxcut,
    maxcut_to_ising,
    maxcut_to_qubo,
    qubo_to_maxcut,
)

__version__ = "0.1.0"
