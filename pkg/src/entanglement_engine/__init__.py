"""Finite-time simulation of a two-qubit autonomous entanglement engine.

Currents, current noise, coherence, concurrence and kinetic uncertainty
ratios are computed by Liouville-space propagation and cross-checked
against closed-form expressions.
"""

__version__ = "0.1.0"

from .analytic import (AnalyticSelector, Quantity, analytic_transient, steady_activity,
                       steady_coherence, steady_current, steady_internal_activity,
                       steady_kur, steady_noise)
from .errors import (ConfigInvalid, DegenerateSteadyState, DimensionMismatch, EngineError,
                     InvalidParameter, NonPhysicalState, NoSignChange, NumericalFailure,
                     OffGrid, UncoveredSelector, ZeroBias, ZeroCoherence, ZeroCurrent)
from .kur import ActivityMode, KurSeries, kur_asym, kur_left, kur_series, violation_windows
from .liouville import (BasisTag, LiouvilleOperator, VectorizedState, devectorize, propagate,
                        propagator, steady_state, traceless_pseudoinverse, vectorize)
from .metrics import (SweepPoint, concurrence, critical_current, critical_point,
                      current_coherence_ratio, steady_sweep)
from .model import (EngineParams, InitialKind, RateSet, Regime, XState, fermi,
                    full_liouvillian, initial_state, jump_superoperators, rates,
                    reduced_liouvillian)
from .observables import (CorrelationValue, NoiseKernel, activity, conservation_residual,
                          current, finite_time_zero_freq_noise, internal_activity,
                          internal_current, steady_state_noise, total_activity,
                          two_time_correlation)
