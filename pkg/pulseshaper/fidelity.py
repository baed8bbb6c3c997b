"""
Gate infidelity objectives: plain, calibration robust and subsystem averaged.
"""
import json
from enum import Enum

import numpy as np

from pulseshaper.backends import gather_in_order
from pulseshaper.propagators import NOMINAL_MEMBER, PropagationMethod, trace_overlap
from pulseshaper.pulses import sample_pulse
from pulseshaper.spins import DEFAULT_MAXIMUM_SPINS, Subgroup, restrict_to_subgroup
from pulseshaper.utils.exceptions import ConfigurationError, DimensionMismatchError
from pulseshaper.utils.serialization import TypedBaseModel

DEFAULT_EPSILON = 0.05
DEFAULT_WEIGHTS = (0.3, 0.4, 0.3)


class RobustnessMode(Enum):
    """The calibration error a pulse should be robust against."""

    Off = 'none'
    Amplitude = 'amplitude'
    Frequency = 'frequency'


class RobustnessSettings(TypedBaseModel):
    """How the infidelities of a pulse under a ±ε calibration error are
    combined into a single robust infidelity.
    """

    @property
    def mode(self):
        """RobustnessMode: Which quantity is mis-calibrated."""
        return self._mode

    @property
    def epsilon(self):
        """float: The relative calibration error, ε."""
        return self._epsilon

    @property
    def weights(self):
        """tuple of float: The weights (α₁, α₂, α₃) of the (1-ε), 1 and (1+ε) infidelities."""
        return self._weights

    def __init__(self, mode=RobustnessMode.Off, epsilon=DEFAULT_EPSILON, weights=DEFAULT_WEIGHTS):
        """Constructs a new RobustnessSettings object.

        Parameters
        ----------
        mode: RobustnessMode or str
            Which quantity is mis-calibrated.
        epsilon: float
            The relative calibration error, which must lie in [0, 1).
        weights: tuple of float
            The three non-negative weights, not all zero.
        """
        self._mode = RobustnessMode(mode)
        self._epsilon = float(epsilon)
        self._weights = tuple(float(weight) for weight in weights)

        self._validate()

    def _validate(self):

        if not 0.0 <= self._epsilon < 1.0:
            raise ConfigurationError(f'The calibration error must lie within [0, 1), not {self._epsilon}.')

        _check_weights(self._weights)

    def members(self):
        """Returns the (amplitude scale, frame offset scale) of every
        propagator this setting needs, in (1-ε), 1, (1+ε) order.

        Returns
        -------
        list of tuple of float and float
        """
        if self._mode == RobustnessMode.Off:
            return [NOMINAL_MEMBER]

        lower, upper = 1.0 - self._epsilon, 1.0 + self._epsilon

        if self._mode == RobustnessMode.Amplitude:
            return [(lower, 1.0), NOMINAL_MEMBER, (upper, 1.0)]

        return [(1.0, lower), NOMINAL_MEMBER, (1.0, upper)]

    def __getstate__(self):

        return {
            'mode': self._mode,
            'epsilon': self._epsilon,
            'weights': list(self._weights)
        }

    def __setstate__(self, state):

        self._mode = state['mode']
        self._epsilon = state['epsilon']
        self._weights = tuple(state['weights'])

        self._validate()

    def __eq__(self, other):

        return (isinstance(other, RobustnessSettings) and
                self._mode == other.mode and
                self._epsilon == other.epsilon and
                self._weights == other.weights)

    def __ne__(self, other):
        return not self.__eq__(other)


def _check_weights(weights):

    if len(weights) != 3:
        raise ConfigurationError(f'Exactly three robustness weights are required, not {len(weights)}.')

    if any(weight < 0.0 for weight in weights) or sum(weights) <= 0.0:
        raise ConfigurationError(f'The robustness weights {list(weights)} must be non-negative and not all zero.')


class Objective(TypedBaseModel):
    """The quantity a pulse is optimized against: one goal unitary per
    subgroup of spins, how calibration robustness is folded in, and which
    propagation method to use.
    """

    @property
    def goals(self):
        """list of tuple of Subgroup and numpy.ndarray: The goal unitary of each subgroup."""
        return self._goals

    @property
    def robustness(self):
        """RobustnessSettings: The robustness settings."""
        return self._robustness

    @property
    def method(self):
        """PropagationMethod: The propagation method."""
        return self._method

    @property
    def maximum_spins(self):
        """int: The explicit state size cap applied to each subgroup."""
        return self._maximum_spins

    @property
    def column_chunk(self):
        """int: The number of propagator columns streamed at once, or None for the default chunk."""
        return self._column_chunk

    def __init__(self, goals, robustness=None, method=PropagationMethod.Fast,
                 maximum_spins=DEFAULT_MAXIMUM_SPINS, column_chunk=None):
        """Constructs a new Objective object.

        Parameters
        ----------
        goals: list of tuple of Subgroup and numpy.ndarray
            The goal unitary of each subgroup. The dimension of each
            goal must be 2 to the power of the size of its subgroup.
        robustness: RobustnessSettings, optional
            The robustness settings. Defaults to no robustness.
        method: PropagationMethod or str
            The propagation method.
        maximum_spins: int
            The explicit state size cap applied to each subgroup.
        column_chunk: int, optional
            The number of propagator columns streamed at once.
        """

        self._goals = [(subgroup, np.asarray(goal, dtype=complex)) for subgroup, goal in goals]
        self._robustness = robustness or RobustnessSettings()
        self._method = PropagationMethod(method)
        self._maximum_spins = int(maximum_spins)
        self._column_chunk = column_chunk

        self._validate()

    def _validate(self):

        if len(self._goals) == 0:
            raise ConfigurationError('An objective needs at least one subgroup goal.')

        for subgroup, goal in self._goals:

            dimension = 2 ** len(subgroup)

            if goal.shape != (dimension, dimension):

                raise DimensionMismatchError(f'The goal of subgroup {subgroup.one_based()} has shape {goal.shape}, '
                                             f'but a {len(subgroup)} spin subgroup needs {dimension}x{dimension}.')

    def validate_for(self, system):
        """Checks that every subgroup refers to spins of `system`."""

        for subgroup, _ in self._goals:
            subgroup.validate_for(system)

    def with_robustness(self, robustness):
        """Returns a copy of this objective with different robustness settings."""
        return Objective(self._goals, robustness, self._method, self._maximum_spins, self._column_chunk)

    def without_robustness(self):
        """Returns a copy of this objective which measures the plain infidelity."""
        return self.with_robustness(RobustnessSettings(RobustnessMode.Off,
                                                       self._robustness.epsilon,
                                                       self._robustness.weights))

    def __getstate__(self):

        return {
            'goals': [{'subgroup': subgroup, 'goal': goal} for subgroup, goal in self._goals],
            'robustness': self._robustness,
            'method': self._method,
            'maximum_spins': self._maximum_spins,
            'column_chunk': self._column_chunk
        }

    def __setstate__(self, state):

        self._goals = [(entry['subgroup'], np.asarray(entry['goal'], dtype=complex)) for entry in state['goals']]
        self._robustness = state['robustness']
        self._method = state['method']
        self._maximum_spins = state['maximum_spins']
        self._column_chunk = state['column_chunk']

        self._validate()

    def __eq__(self, other):

        if not isinstance(other, Objective) or len(self._goals) != len(other.goals):
            return False

        for (subgroup, goal), (other_subgroup, other_goal) in zip(self._goals, other.goals):

            if subgroup != other_subgroup or not np.array_equal(goal, other_goal):
                return False

        return (self._robustness == other.robustness and
                self._method == other.method and
                self._maximum_spins == other.maximum_spins and
                self._column_chunk == other.column_chunk)

    def __ne__(self, other):
        return not self.__eq__(other)


def _infidelity_from_trace(trace, dimension):
    return max(0.0, 1.0 - abs(trace) / dimension)


def gate_infidelity(unitary, goal):
    """Computes the trace infidelity 1 - |Tr(G† U)| / N, which is blind
    to the global phase of either unitary.

    Parameters
    ----------
    unitary: numpy.ndarray
        The implemented unitary U.
    goal: numpy.ndarray
        The goal unitary G.

    Returns
    -------
    float
        The infidelity, within [0, 1].
    """
    unitary = np.asarray(unitary)
    goal = np.asarray(goal)

    if unitary.shape != goal.shape or unitary.ndim != 2 or unitary.shape[0] != unitary.shape[1]:
        raise DimensionMismatchError(f'Cannot compare a {unitary.shape} unitary with a {goal.shape} goal.')

    return _infidelity_from_trace(np.vdot(goal, unitary), len(goal))


def robust_infidelity(infidelities, weights=DEFAULT_WEIGHTS):
    """Combines the (F₋, F, F₊) infidelities of a pulse under a ±ε
    calibration error into their weighted mean.

    Parameters
    ----------
    infidelities: tuple of float
        (F₋, F, F₊)
    weights: tuple of float
        (α₁, α₂, α₃)

    Returns
    -------
    float
    """
    _check_weights(weights)

    if len(infidelities) != 3:
        raise ValueError(f'Three infidelities are required, not {len(infidelities)}.')

    return sum(weight * value for weight, value in zip(weights, infidelities)) / sum(weights)


def subsystem_infidelity(infidelities):
    """Averages the infidelities of every subgroup with equal weights.

    Parameters
    ----------
    infidelities: list of float
        The infidelity of each subgroup.

    Returns
    -------
    float
    """
    if len(infidelities) == 0:
        raise ValueError('At least one subgroup infidelity is required.')

    return sum(infidelities) / len(infidelities)


def _subgroup_infidelity(objective, system, subgroup, goal, pulse):
    """The (robust) infidelity of a single subgroup."""

    subsystem = restrict_to_subgroup(system, subgroup)
    robustness = objective.robustness

    traces = trace_overlap(goal,
                           subsystem,
                           pulse,
                           robustness.members(),
                           objective.method,
                           objective.column_chunk,
                           objective.maximum_spins)

    infidelities = [_infidelity_from_trace(trace, len(goal)) for trace in traces]

    if robustness.mode == RobustnessMode.Off:
        return infidelities[0]

    return robust_infidelity(infidelities, robustness.weights)


def evaluate_pulse(objective, system, pulse, backend=None):
    """Evaluates an objective for an already sampled pulse.

    Parameters
    ----------
    objective: Objective
        The objective to evaluate.
    system: SpinSystem
        The full spin system.
    pulse: SampledPulse
        The sampled pulse.
    backend: PulseShaperBackend, optional
        A backend to distribute the subgroups over.

    Returns
    -------
    float
        The subsystem averaged (robust) infidelity.
    """
    objective.validate_for(system)

    argument_list = [(objective, system, subgroup, goal, pulse) for subgroup, goal in objective.goals]
    infidelities = gather_in_order(backend, _subgroup_infidelity, argument_list)

    return subsystem_infidelity(infidelities)


def evaluate(objective, system, params, spec, backend=None):
    """Samples a pulse and evaluates an objective for it.

    Parameters
    ----------
    objective: Objective
        The objective to evaluate.
    system: SpinSystem
        The full spin system.
    params: FourierParams
        The pulse parameters.
    spec: PulseSpec
        The fixed pulse settings.
    backend: PulseShaperBackend, optional
        A backend to distribute the subgroups over.

    Returns
    -------
    float
        The infidelity, within [0, 1].
    """
    return evaluate_pulse(objective, system, sample_pulse(params, spec), backend)


def parse_robustness_config(document):
    """Creates `RobustnessSettings` from the ``robustness`` section of an
    optimization config, e.g. ``{"mode": "amplitude", "epsilon": 0.05}``.
    """

    if document is None:
        return RobustnessSettings()

    if isinstance(document, str):
        document = json.loads(document)

    try:
        mode = RobustnessMode(document.get('mode', RobustnessMode.Off.value))
    except ValueError:
        raise ConfigurationError(f'{document.get("mode")} is not a robustness mode - expected one of '
                                 f'{[mode.value for mode in RobustnessMode]}.')

    return RobustnessSettings(mode,
                              document.get('epsilon', DEFAULT_EPSILON),
                              document.get('weights', DEFAULT_WEIGHTS))


def whole_system_objective(goal, number_of_spins, method=PropagationMethod.Fast,
                           maximum_spins=DEFAULT_MAXIMUM_SPINS):
    """Creates a plain objective with a single subgroup covering every spin."""
    return Objective([(Subgroup(range(number_of_spins)), goal)], None, method, maximum_spins)
