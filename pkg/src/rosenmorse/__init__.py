"""Rosen-Morse quantum systems: eigenstates, SUSY hierarchies, rational
extensions, high-order ladder-operator chains, coherent states, and
classical-analogue phase flows."""

from .classical import (PhaseTrajectory, Potential1D, extension_potential,
                        flow, harmonic_potential, system_potential,
                        turning_points)
from .coherent import (CoherentState, almost_eigen_deviation, coherent_state,
                       density, evolve, mean_energy, measured_lowering_deviation,
                       observables, observables_spectral, rho, state_values,
                       trajectory)
from .errors import (EvaluationDomainError, RosenMorseError, ToleranceError,
                     ValidationError)
from .jets import Jet, compose_series, const, lift
from .ladder import (MultiplierOp, OperatorChain, action_residual,
                     annihilation_residual, apply, build_ladder,
                     build_re_ladder, gha_check, ground_shift, shifted_energy)
from .quadrature import (QuadratureGrid, gauss_legendre_grid, integrate,
                         stable_integral)
from .specfun import jacobi, jacobi_explicit, jacobi_value, log_gamma
from .susy import (FirstOrderOp, RationalExtension, intertwiners,
                   partner_params, partner_potential, superpotential,
                   susy_map, type3_extension, type3_potential, type3_state)
from .systems import (RMI, RMII, Spectrum, SystemParams, WaveFunction,
                      count_nodes, default_grid, eigenstate, imag_residue,
                      potential, schrodinger_residual, spectrum, tail_maximum)

__version__ = "0.1.0"
