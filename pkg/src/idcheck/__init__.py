"""Certified identity-check estimators for shallow geometrically local circuits.

The package certifies how close a shallow D-dimensional circuit is to the
identity: a linear-time sweep over a reclusive cube partition yields a
diamond-norm estimate with a multiplicative guarantee, an eigenvalue-polygon
point upgrades it to an operator-norm estimate, a brute-force oracle provides
ground truth on small instances, and an exactly solvable XY-chain Trotter
benchmark exercises the full pipeline.
"""

from .checker import (CheckReport, PolygonPoint, algorithm1, check_circuit,
                      general_estimate, layered_bound, opnorm_estimate,
                      polygon_point_product_1d, polygon_point_zero,
                      validate_partition)
from .circuit import (Circuit, Gate, gate_matrix, inverse, lightcone,
                      lightcone_separated, localize, make_circuit, named_gate,
                      parse_circuit, serialize_circuit)
from .errors import (CircuitFormatError, ConvergenceError, IdCheckError,
                     IndeterminateError, InapplicabilityError, PartitionError,
                     SeparationError, SizingError, ValidationError)
from .lattice import (ArrayShape, Cube, ReclusivePartition, check_partition,
                      color_of, coloring_is_valid, enumerate_cubes,
                      generator_matrix, greedy_touching_coloring,
                      reclusive_partition)
from .oracle import (PhaseSet, circuit_distances, eig_phases, exact_diamond,
                     exact_opnorm, full_unitary)
from .spectral import (CommutatorSpec, DenseUnitary, PowerMethodResult,
                       build_commutator, comm_norm, commutator_apply,
                       commutator_spec, dense_cap, hermitian_min_eig,
                       power_method_norm, theta)
from .xy_benchmark import (XYInstance, build_trotter_pair, free_fermion_delta,
                           run_experiment, single_particle_phases)

__version__ = "0.1.0"
