"""Classical correlation and quantum discord of bipartite quantum states.

The package optimizes parameterized von Neumann measurements on
subsystem B to minimize the measurement-conditioned entropy, from which
classical correlation and quantum discord follow.  See the README for
the CLI and the acceptance suite.
"""

from .correlations import (CorrelationReport, classical_correlation,
                           mutual_information, mutual_information_bell,
                           quantum_discord)
from .linalg import (binary_entropy, hermitian_eig, is_density_matrix, kron,
                     partial_trace, shannon_entropy, von_neumann_entropy)
from .measurement import (MeasurementEnsemble, ProjectorPair,
                          VonNeumannMeasurement, apply_measurement,
                          bell_conditional_entropy, conditional_entropy,
                          conditional_entropy_fn, from_angles, from_bloch,
                          projectors)
from .optimizer import (OptimizationResult, OptimizerConfig,
                        analytic_gradient_bell, finite_diff_gradient,
                        gradient_descent, grid_oracle, multi_start,
                        nelder_mead)
from .states import (DensityMatrix, GateOp, VectorizedState,
                     apply_gate_sequence, bell_diagonal, devectorize,
                     fixed_random_state, load_state, mixed_bell_family,
                     save_state, vectorize, werner)
from .su_basis import (GeneratorSet, SuDecomposition, canonicalize_two_qubit,
                       decompose, generators, reconstruct)

__version__ = "0.1.0"
