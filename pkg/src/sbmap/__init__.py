"""Dynamical map of the spin-boson model from a path sum over Trotter steps."""
from .bath import (BathSpec, DiscretizedBath, KernelSet, alpha_coeff, bath_correlation,
                   bose_einstein, build_bath, build_kernels, dephasing_rate, kernel_beta,
                   kernel_beta_T, omega2_scalar)
from .errors import (InvalidArgument, InvalidCutoff, InvalidGate, InvalidInput, InvalidSpec,
                     InvalidState, ResourceLimit, SpinBosonError)
from .limits import markov_map, pure_dephasing_density, semigroup_defect
from .pathsum import (DynamicalMap, PathString, choi_matrix, compute_map, conditioned_evolution,
                      dynamical_map, f_weight, g_weight, map_coefficients, pi_string,
                      reduced_density, trotter_bound)
from .spin import (SpinSystem, bloch, devectorize, eigendecompose, pauli_basis, step_propagator,
                   vectorize)
from .ttm import learn_tensors, memory_diagnostic, propagate

__version__ = "0.1.0"
