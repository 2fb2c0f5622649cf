"""Coherence witnesses, their comparability, and the robustness of coherence."""
from .comparability import (SimplexWeights, StateComparabilityVerdict, StateVerdict,
                            WitnessComparabilityVerdict, WitnessVerdict, compare_states,
                            compare_two_states, compare_witnesses, construct_common_witness,
                            extract_common_state, max_min_eigenvalue_over_simplex)
from .matcore import (EigenDecomposition, IncoherentState, density_matrix, dephase,
                      eig_hermitian, frobenius_norm, hermitian, is_psd, min_eigenpair,
                      operator_norm, trace_pair)
from .robustness import RobustnessResult, robustness, robustness_pure_oracle, verify_corollary2
from .witness import (CoherenceWitness, DetectionReport, construct_dephasing_witness,
                      construct_geometric_witness, construct_projector_witness, detect,
                      is_coherent, is_optimal, normalize, validate_witness)

__version__ = "0.1.0"
