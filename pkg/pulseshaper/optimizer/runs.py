"""
Multi-start, time step annealed optimization of sine series pulses.
"""
import json
import logging
import math
import time

import numpy as np

from pulseshaper.backends import gather_in_order
from pulseshaper.fidelity import RobustnessSettings, evaluate, parse_robustness_config
from pulseshaper.optimizer.simplex import SimplexConfig, nelder_mead
from pulseshaper.propagators import DEFAULT_COLUMN_CHUNK, PropagationMethod
from pulseshaper.pulses import FourierParams, check_step_count, pack, parameter_scales, unpack
from pulseshaper.spins import DEFAULT_MAXIMUM_SPINS
from pulseshaper.utils.exceptions import ConfigurationError
from pulseshaper.utils.quantities import to_seconds
from pulseshaper.utils.serialization import TypedBaseModel

DEFAULT_TIME_STEPS = (5.0e-6, 2.5e-6, 1.25e-6, 0.625e-6)
DEFAULT_NUMBER_OF_STARTS = 3

#: The infidelity an optimization configured from a document aims for unless told otherwise.
DEFAULT_TARGET = 1.0e-3


class AnnealSchedule(TypedBaseModel):
    """The strictly decreasing sequence of time steps an optimization is
    refined through, each stage warm starting from the best point of the
    one before.
    """

    @property
    def time_steps(self):
        """tuple of float: The time step of each stage in seconds."""
        return self._time_steps

    def __init__(self, time_steps=DEFAULT_TIME_STEPS):
        """Constructs a new AnnealSchedule object.

        Parameters
        ----------
        time_steps: list of float
            The time step of each stage in seconds.
        """
        self._time_steps = tuple(float(time_step) for time_step in time_steps)
        self._validate()

    def _validate(self):

        if len(self._time_steps) == 0:
            raise ConfigurationError('An annealing schedule needs at least one time step.')

        if any(time_step <= 0.0 for time_step in self._time_steps):
            raise ConfigurationError(f'The time steps {list(self._time_steps)} must all be positive.')

        for previous, current in zip(self._time_steps[:-1], self._time_steps[1:]):

            if current >= previous:
                raise ConfigurationError(f'The time steps {list(self._time_steps)} must be strictly decreasing.')

    def validate_for(self, duration):
        """Checks that every time step divides `duration` into a whole number of steps."""

        for time_step in self._time_steps:
            check_step_count(duration, time_step)

    @classmethod
    def from_document(cls, document):
        """Creates a schedule from a list of time steps, e.g. ``["5 us", "2.5 us"]``."""
        return cls([to_seconds(value) for value in document])

    def __getstate__(self):
        return {'time_steps': list(self._time_steps)}

    def __setstate__(self, state):

        self._time_steps = tuple(state['time_steps'])
        self._validate()

    def __eq__(self, other):
        return isinstance(other, AnnealSchedule) and self._time_steps == other.time_steps

    def __ne__(self, other):
        return not self.__eq__(other)


class StageResult(TypedBaseModel):
    """The outcome of a single annealing stage."""

    def __init__(self, time_step, initial_infidelity, best_infidelity, best_values, stop_reason, wall_clock):
        """Constructs a new StageResult object.

        Parameters
        ----------
        time_step: float
            The time step of the stage in seconds.
        initial_infidelity: float
            The objective at the warm start point.
        best_infidelity: float
            The best objective found.
        best_values: list of float
            The best objective seen after each evaluation.
        stop_reason: StopReason
            Why the simplex search stopped.
        wall_clock: float
            The wall clock time spent in the stage in seconds.
        """

        self.time_step = time_step
        self.initial_infidelity = initial_infidelity
        self.best_infidelity = best_infidelity
        self.best_values = [float(value) for value in best_values]
        self.stop_reason = stop_reason
        self.wall_clock = wall_clock

    @property
    def evaluations(self):
        """int: The number of objective evaluations used by the stage."""
        return len(self.best_values)

    def __getstate__(self):

        return {
            'time_step': self.time_step,
            'initial_infidelity': self.initial_infidelity,
            'best_infidelity': self.best_infidelity,
            'best_values': self.best_values,
            'stop_reason': self.stop_reason,
            'wall_clock': self.wall_clock
        }

    def __setstate__(self, state):

        self.time_step = state['time_step']
        self.initial_infidelity = state['initial_infidelity']
        self.best_infidelity = state['best_infidelity']
        self.best_values = state['best_values']
        self.stop_reason = state['stop_reason']
        self.wall_clock = state['wall_clock']

    def __eq__(self, other):
        return isinstance(other, StageResult) and self.__getstate__() == other.__getstate__()

    def __ne__(self, other):
        return not self.__eq__(other)


class OptimizationRun(TypedBaseModel):
    """The outcome of a multi-start optimization, reporting the best start."""

    def __init__(self, seed, best_start, best_params, best_infidelity, stages, start_infidelities,
                 total_evaluations, wall_clock):
        """Constructs a new OptimizationRun object.

        Parameters
        ----------
        seed: int
            The seed every random start was derived from.
        best_start: int
            The index of the best start.
        best_params: FourierParams
            The best parameters found.
        best_infidelity: float
            The objective of the best parameters at the finest time step.
        stages: list of StageResult
            The stages of the best start.
        start_infidelities: list of float
            The final objective of every start.
        total_evaluations: int
            The number of objective evaluations over all starts.
        wall_clock: float
            The wall clock time of the whole run in seconds.
        """

        self.seed = seed
        self.best_start = best_start
        self.best_params = best_params
        self.best_infidelity = best_infidelity
        self.stages = stages
        self.start_infidelities = start_infidelities
        self.total_evaluations = total_evaluations
        self.wall_clock = wall_clock

    @property
    def evaluations(self):
        """int: The number of objective evaluations used by the best start."""
        return sum(stage.evaluations for stage in self.stages)

    def __getstate__(self):

        return {
            'seed': self.seed,
            'best_start': self.best_start,
            'best_params': self.best_params,
            'best_infidelity': self.best_infidelity,
            'stages': self.stages,
            'start_infidelities': self.start_infidelities,
            'total_evaluations': self.total_evaluations,
            'wall_clock': self.wall_clock
        }

    def __setstate__(self, state):

        self.seed = state['seed']
        self.best_start = state['best_start']
        self.best_params = state['best_params']
        self.best_infidelity = state['best_infidelity']
        self.stages = state['stages']
        self.start_infidelities = state['start_infidelities']
        self.total_evaluations = state['total_evaluations']
        self.wall_clock = state['wall_clock']


def random_init(amplitude_terms, phase_terms, spec, seed):
    """Draws a random starting point for an optimization.

    The amplitudes a_k are drawn from [0, A_max / s_A], the frequencies b_k
    and f_k from [0, 20π / τ_f] (at most ten oscillations over the pulse),
    the offsets c_k and g_k from [0, 2π) and the phase amplitudes d_k
    from [0, π].

    Parameters
    ----------
    amplitude_terms: int
        The number of amplitude sines, s_A.
    phase_terms: int
        The number of phase sines, s_P.
    spec: PulseSpec
        The fixed pulse settings.
    seed: int or numpy.random.SeedSequence
        The seed to draw with.

    Returns
    -------
    FourierParams
    """
    generator = np.random.default_rng(seed)
    maximum_frequency = 20.0 * math.pi / spec.duration

    amplitude_triples = np.column_stack([
        generator.uniform(0.0, spec.max_amplitude / amplitude_terms, amplitude_terms),
        generator.uniform(0.0, maximum_frequency, amplitude_terms),
        generator.uniform(0.0, 2.0 * math.pi, amplitude_terms)
    ])

    phase_triples = np.column_stack([
        generator.uniform(0.0, math.pi, phase_terms),
        generator.uniform(0.0, maximum_frequency, phase_terms),
        generator.uniform(0.0, 2.0 * math.pi, phase_terms)
    ])

    return FourierParams(amplitude_triples, phase_triples)


def _run_start(system, objective, spec, initial_params, schedule, simplex_config, start_index, backend=None):
    """Anneals a single start through every stage of the schedule.

    Returns
    -------
    numpy.ndarray
        The best packed parameters.
    float
        Their objective at the finest time step.
    list of StageResult
    """
    amplitude_terms = initial_params.number_of_amplitude_terms
    phase_terms = initial_params.number_of_phase_terms

    scales = parameter_scales(amplitude_terms, phase_terms, spec)

    best_x = pack(initial_params)
    best_value = math.inf

    stages = []

    for time_step in schedule.time_steps:

        stage_spec = spec.with_time_step(time_step)

        def stage_objective(vector):
            return evaluate(objective, system, unpack(vector, amplitude_terms, phase_terms), stage_spec, backend)

        stage_start = time.perf_counter()
        best_x, best_value, trace = nelder_mead(stage_objective, best_x, simplex_config, scales)

        stage = StageResult(time_step,
                            trace.best_values[0],
                            best_value,
                            trace.best_values,
                            trace.stop_reason,
                            time.perf_counter() - stage_start)

        logging.info(f'Start {start_index}: the {time_step * 1e6:.4g} us stage went from '
                     f'{stage.initial_infidelity:.6g} to {best_value:.6g} in {stage.evaluations} '
                     f'evaluations ({trace.stop_reason.value}).')

        stages.append(stage)

    return best_x, best_value, stages


def optimize_pulse(system, objective, spec, amplitude_terms, phase_terms, schedule=None, simplex_config=None,
                   number_of_starts=DEFAULT_NUMBER_OF_STARTS, seed=0, backend=None):
    """Optimizes a sine series pulse from several random starting points,
    annealing each start through a schedule of decreasing time steps.

    Notes
    -----
    With a backend and more than one start, the starts are distributed over
    the backend. With a backend and a single start, the subgroups of each
    objective evaluation are distributed instead. Either way the results
    are reduced in start order, so that the outcome does not depend on the
    number of workers.

    Parameters
    ----------
    system: SpinSystem
        The spin system.
    objective: Objective
        The objective to minimize.
    spec: PulseSpec
        The fixed pulse settings. Its time step is replaced by those of
        the schedule.
    amplitude_terms: int
        The number of amplitude sines, s_A.
    phase_terms: int
        The number of phase sines, s_P.
    schedule: AnnealSchedule, optional
        The time steps to anneal through.
    simplex_config: SimplexConfig, optional
        The settings of each simplex search.
    number_of_starts: int
        The number of random starts.
    seed: int
        The seed every start is derived from.
    backend: PulseShaperBackend, optional
        A backend to distribute the work over.

    Returns
    -------
    OptimizationRun
    """
    schedule = schedule or AnnealSchedule()
    simplex_config = simplex_config or SimplexConfig()

    if number_of_starts < 1:
        raise ConfigurationError(f'At least one optimization start is required, not {number_of_starts}.')

    schedule.validate_for(spec.duration)
    objective.validate_for(system)

    start_seeds = np.random.SeedSequence(seed).spawn(number_of_starts)

    argument_list = [
        (system, objective, spec, random_init(amplitude_terms, phase_terms, spec, start_seed),
         schedule, simplex_config, start_index)
        for start_index, start_seed in enumerate(start_seeds)
    ]

    run_start = time.perf_counter()

    if backend is not None and number_of_starts > 1:
        start_results = gather_in_order(backend, _run_start, argument_list)
    else:
        start_results = [_run_start(*arguments, backend=backend) for arguments in argument_list]

    start_infidelities = [value for _, value, _ in start_results]

    # The lowest index wins ties.
    best_start = int(np.argmin(start_infidelities))
    best_x, best_value, best_stages = start_results[best_start]

    total_evaluations = sum(stage.evaluations for _, _, stages in start_results for stage in stages)

    logging.info(f'The best of {number_of_starts} starts (start {best_start}) reached an infidelity of '
                 f'{best_value:.6g} after {total_evaluations} evaluations in total.')

    return OptimizationRun(seed,
                           best_start,
                           unpack(best_x, amplitude_terms, phase_terms),
                           best_value,
                           best_stages,
                           start_infidelities,
                           total_evaluations,
                           time.perf_counter() - run_start)


def target_reached(run, simplex_config):
    """Returns whether a run beat the target of its simplex settings."""

    if simplex_config.target is None:
        return True

    return run.best_infidelity < simplex_config.target


class OptimizationSettings:
    """The settings of an optimization, as read from an optimization
    config document."""

    def __init__(self, seed=0, number_of_starts=DEFAULT_NUMBER_OF_STARTS, schedule=None, simplex_config=None,
                 robustness=None, method=PropagationMethod.Fast, maximum_spins=DEFAULT_MAXIMUM_SPINS,
                 column_chunk=DEFAULT_COLUMN_CHUNK):

        self.seed = seed
        self.number_of_starts = number_of_starts
        self.schedule = schedule or AnnealSchedule()
        self.simplex_config = simplex_config or SimplexConfig(target=DEFAULT_TARGET)
        self.robustness = robustness or RobustnessSettings()
        self.method = PropagationMethod(method)
        self.maximum_spins = maximum_spins
        self.column_chunk = column_chunk

    @classmethod
    def from_document(cls, document):
        """Creates settings from an optimization config document. Every
        key is optional.

        Parameters
        ----------
        document: str or dict
            The JSON text, or already parsed dictionary, of the document.

        Returns
        -------
        OptimizationSettings
        """

        if isinstance(document, (str, bytes)):

            try:
                document = json.loads(document)
            except json.JSONDecodeError as e:
                raise ConfigurationError(f'The optimization document is not valid JSON: {e}')

        simplex_document = dict(document.get('simplex', {}))
        simplex_document.setdefault('target', DEFAULT_TARGET)

        schedule = None

        if 'schedule' in document:
            schedule = AnnealSchedule.from_document(document['schedule'])

        try:
            method = PropagationMethod(document.get('method', PropagationMethod.Fast.value))
        except ValueError:
            raise ConfigurationError(f'{document.get("method")} is not a propagation method - '
                                     f'expected exact or fast.')

        column_chunk = int(document.get('column_chunk', DEFAULT_COLUMN_CHUNK))

        if column_chunk < 1:
            raise ConfigurationError(f'The column chunk must be at least one, not {column_chunk}.')

        return cls(int(document.get('seed', 0)),
                   int(document.get('starts', DEFAULT_NUMBER_OF_STARTS)),
                   schedule,
                   SimplexConfig.from_document(simplex_document),
                   parse_robustness_config(document.get('robustness')),
                   method,
                   int(document.get('maximum_spins', DEFAULT_MAXIMUM_SPINS)),
                   column_chunk)
