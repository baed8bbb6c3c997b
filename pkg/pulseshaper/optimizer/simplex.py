"""
A derivative free Nelder-Mead simplex minimizer.
"""
import logging
import math
from enum import Enum

import numpy as np

from pulseshaper.utils.exceptions import ConfigurationError, NonFiniteObjectiveError
from pulseshaper.utils.serialization import TypedBaseModel


class StopReason(Enum):
    """Why a simplex search stopped."""

    Tolerance = 'tolerance'
    Target = 'target'
    Evaluations = 'evaluations'


class SimplexConfig(TypedBaseModel):
    """The coefficients and stopping criteria of a Nelder-Mead search."""

    def __init__(self, reflection=1.0, expansion=2.0, contraction=0.5, shrink=0.5, max_evaluations=2000,
                 f_tolerance=1.0e-10, target=None, initial_step=0.1):
        """Constructs a new SimplexConfig object.

        Parameters
        ----------
        reflection: float
            The reflection coefficient, which must be positive.
        expansion: float
            The expansion coefficient, which must exceed the reflection coefficient.
        contraction: float
            The contraction coefficient, within (0, 1).
        shrink: float
            The shrink coefficient, within (0, 1).
        max_evaluations: int
            The maximum number of objective evaluations.
        f_tolerance: float
            The search stops once the spread of the objective over the
            simplex vertices drops to this value.
        target: float, optional
            The search stops once the best value drops below this value.
        initial_step: float
            The relative size of the initial simplex.
        """

        self.reflection = float(reflection)
        self.expansion = float(expansion)
        self.contraction = float(contraction)
        self.shrink = float(shrink)
        self.max_evaluations = int(max_evaluations)
        self.f_tolerance = float(f_tolerance)
        self.target = None if target is None else float(target)
        self.initial_step = float(initial_step)

        self._validate()

    def _validate(self):

        if self.reflection <= 0.0:
            raise ConfigurationError(f'The reflection coefficient must be positive, not {self.reflection}.')
        if self.expansion <= self.reflection:
            raise ConfigurationError(f'The expansion coefficient ({self.expansion}) must exceed the '
                                     f'reflection coefficient ({self.reflection}).')
        if not 0.0 < self.contraction < 1.0:
            raise ConfigurationError(f'The contraction coefficient must lie within (0, 1), not {self.contraction}.')
        if not 0.0 < self.shrink < 1.0:
            raise ConfigurationError(f'The shrink coefficient must lie within (0, 1), not {self.shrink}.')
        if self.max_evaluations < 1:
            raise ConfigurationError(f'At least one evaluation must be allowed, not {self.max_evaluations}.')
        if self.f_tolerance < 0.0:
            raise ConfigurationError(f'The tolerance cannot be negative ({self.f_tolerance}).')
        if self.initial_step <= 0.0:
            raise ConfigurationError(f'The initial simplex step must be positive, not {self.initial_step}.')

    @classmethod
    def from_document(cls, document):
        """Creates a config from the ``simplex`` section of an optimization
        config. Every key is optional."""

        unknown_keys = set(document) - set(cls().__getstate__())

        if len(unknown_keys) > 0:
            raise ConfigurationError(f'Unknown simplex settings: {sorted(unknown_keys)}.')

        return cls(**document)

    def __getstate__(self):

        return {
            'reflection': self.reflection,
            'expansion': self.expansion,
            'contraction': self.contraction,
            'shrink': self.shrink,
            'max_evaluations': self.max_evaluations,
            'f_tolerance': self.f_tolerance,
            'target': self.target,
            'initial_step': self.initial_step
        }

    def __setstate__(self, state):

        self.reflection = state['reflection']
        self.expansion = state['expansion']
        self.contraction = state['contraction']
        self.shrink = state['shrink']
        self.max_evaluations = state['max_evaluations']
        self.f_tolerance = state['f_tolerance']
        self.target = state['target']
        self.initial_step = state['initial_step']

        self._validate()

    def __eq__(self, other):
        return isinstance(other, SimplexConfig) and self.__getstate__() == other.__getstate__()

    def __ne__(self, other):
        return not self.__eq__(other)


class SimplexTrace:
    """A record of how a simplex search progressed."""

    def __init__(self, best_values, stop_reason):
        """
        Parameters
        ----------
        best_values: list of float
            The best value seen after each objective evaluation.
        stop_reason: StopReason
            Why the search stopped.
        """
        self.best_values = np.array(best_values, dtype=float)
        self.stop_reason = stop_reason

    @property
    def evaluations(self):
        """int: The number of times the objective was called."""
        return len(self.best_values)


class _EvaluationBudgetExhausted(Exception):
    pass


class _CountingObjective:
    """Wraps an objective to count its calls, enforce the evaluation
    budget and remember the best point ever evaluated."""

    def __init__(self, function, max_evaluations):

        self._function = function
        self._max_evaluations = max_evaluations

        self.best_x = None
        self.best_value = math.inf
        self.best_values = []

    def __call__(self, x):

        if len(self.best_values) >= self._max_evaluations:
            raise _EvaluationBudgetExhausted()

        value = float(self._function(x))

        if not math.isfinite(value):
            raise NonFiniteObjectiveError(value, x)

        if value < self.best_value:

            self.best_value = value
            self.best_x = np.array(x, dtype=float)

        self.best_values.append(self.best_value)
        return value


def initial_simplex(x0, initial_step, scales=None):
    """Builds the n + 1 vertices of the starting simplex by displacing
    each coordinate of `x0` in turn by `initial_step * max(|x0_i|, scale_i)`.

    Parameters
    ----------
    x0: numpy.ndarray
        The starting point.
    initial_step: float
        The relative step size.
    scales: numpy.ndarray, optional
        The natural size of each coordinate. Defaults to one.

    Returns
    -------
    numpy.ndarray, shape=(n + 1, n)
    """
    x0 = np.asarray(x0, dtype=float)
    scales = np.ones_like(x0) if scales is None else np.asarray(scales, dtype=float)

    steps = initial_step * np.maximum(np.abs(x0), scales)

    vertices = np.tile(x0, (len(x0) + 1, 1))
    vertices[1:] += np.diag(steps)

    return vertices


def nelder_mead(function, x0, config=None, scales=None):
    """Minimizes a function with the Nelder-Mead simplex method.

    Notes
    -----
    Vertices are ordered with a stable sort so that, among vertices with
    equal values, the one which has been in the simplex longest is
    preferred. The search stops when the spread of values over the simplex
    drops to `config.f_tolerance`, when the best value drops below
    `config.target`, or when `config.max_evaluations` is used up.

    Parameters
    ----------
    function: callable
        The objective, taking a 1D array and returning a float.
    x0: array_like
        The starting point.
    config: SimplexConfig, optional
        The search settings.
    scales: array_like, optional
        The natural size of each coordinate, used to build the initial simplex.

    Returns
    -------
    numpy.ndarray
        The best point evaluated.
    float
        The value at the best point.
    SimplexTrace
        The progress of the search.
    """
    config = config or SimplexConfig()
    x0 = np.asarray(x0, dtype=float).reshape(-1)

    objective = _CountingObjective(function, config.max_evaluations)

    vertices = initial_simplex(x0, config.initial_step, scales)
    values = np.full(len(vertices), math.inf)

    stop_reason = StopReason.Evaluations

    try:

        for index, vertex in enumerate(vertices):
            values[index] = objective(vertex)

        while True:

            order = np.argsort(values, kind='stable')
            vertices, values = vertices[order], values[order]

            if values[-1] - values[0] <= config.f_tolerance:

                stop_reason = StopReason.Tolerance
                break

            if config.target is not None and values[0] < config.target:

                stop_reason = StopReason.Target
                break

            centroid = vertices[:-1].mean(axis=0)
            worst = vertices[-1]

            reflected = centroid + config.reflection * (centroid - worst)
            reflected_value = objective(reflected)

            if reflected_value < values[0]:

                expanded = centroid + config.expansion * (reflected - centroid)
                expanded_value = objective(expanded)

                if expanded_value < reflected_value:
                    vertices[-1], values[-1] = expanded, expanded_value
                else:
                    vertices[-1], values[-1] = reflected, reflected_value

                continue

            if reflected_value < values[-2]:

                vertices[-1], values[-1] = reflected, reflected_value
                continue

            if reflected_value < values[-1]:

                contracted = centroid + config.contraction * (reflected - centroid)
                contracted_value = objective(contracted)

                accepted = contracted_value <= reflected_value

            else:

                contracted = centroid + config.contraction * (worst - centroid)
                contracted_value = objective(contracted)

                accepted = contracted_value < values[-1]

            if accepted:

                vertices[-1], values[-1] = contracted, contracted_value
                continue

            for index in range(1, len(vertices)):

                vertices[index] = vertices[0] + config.shrink * (vertices[index] - vertices[0])
                values[index] = objective(vertices[index])

    except _EvaluationBudgetExhausted:
        logging.info(f'The simplex search used all {config.max_evaluations} evaluations.')

    trace = SimplexTrace(objective.best_values, stop_reason)

    if objective.best_x is None:
        return x0, math.inf, trace

    return objective.best_x, objective.best_value, trace
