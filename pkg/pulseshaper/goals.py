"""
Constructors for the goal unitaries a pulse is optimized towards.
"""
import functools
import json
import math

import numpy as np

from pulseshaper.propagators import unitarity_error
from pulseshaper.spins import DEFAULT_MAXIMUM_SPINS, Subgroup, default_tiling
from pulseshaper.utils.exceptions import ConfigurationError, DimensionMismatchError, NonUnitaryError
from pulseshaper.utils.serialization import TypedBaseModel

#: The tolerance on |U†U - I| applied to user supplied goal matrices.
UNITARITY_TOLERANCE = 1.0e-6

_PAULI_MATRICES = {
    'x': np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    'y': np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    'z': np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
}


class RotationGoal(TypedBaseModel):
    """A simultaneous rotation of a set of spins by the same angle about
    the same axis, with every other spin left untouched.
    """

    @property
    def targets(self):
        """tuple of int: The 1-based numbers of the rotated spins."""
        return self._targets

    @property
    def axis(self):
        """str or float: 'x', 'y' or 'z', or the angle (rad) of an axis in the xy-plane measured from x."""
        return self._axis

    @property
    def angle(self):
        """float: The rotation angle in rad."""
        return self._angle

    def __init__(self, targets, axis, angle):
        """Constructs a new RotationGoal object.

        Parameters
        ----------
        targets: list of int
            The 1-based numbers of the rotated spins.
        axis: str or float
            'x', 'y' or 'z', or the in-plane angle of the axis in rad.
        angle: float
            The rotation angle in rad.
        """

        self._targets = tuple(int(target) for target in targets)
        self._axis = axis.lower() if isinstance(axis, str) else float(axis)
        self._angle = float(angle)

        self._validate()

    def _validate(self):

        if len(self._targets) == 0:
            raise ConfigurationError('A rotation goal must rotate at least one spin.')

        if len(set(self._targets)) != len(self._targets):
            raise ConfigurationError(f'The rotation targets {list(self._targets)} contain repeated spins.')

        if isinstance(self._axis, str) and self._axis not in _PAULI_MATRICES:
            raise ConfigurationError(f'{self._axis} is not a rotation axis - expected x, y, z or an angle.')

    def __getstate__(self):

        return {
            'targets': list(self._targets),
            'axis': self._axis,
            'angle': self._angle
        }

    def __setstate__(self, state):

        self._targets = tuple(state['targets'])
        self._axis = state['axis']
        self._angle = state['angle']

        self._validate()


def _axis_operator(axis):

    if isinstance(axis, str):
        return _PAULI_MATRICES[axis]

    return math.cos(axis) * _PAULI_MATRICES['x'] + math.sin(axis) * _PAULI_MATRICES['y']


def single_spin_rotation(axis, angle):
    """Returns exp(-i θ σ_n / 2) for a rotation by θ about the axis n."""
    return math.cos(angle / 2.0) * np.eye(2) - 1.0j * math.sin(angle / 2.0) * _axis_operator(axis)


def rotation_goal(number_of_spins, goal):
    """Builds the unitary of a simultaneous rotation: the tensor product of
    exp(-i θ σ_n / 2) on every target spin and the identity elsewhere.

    Parameters
    ----------
    number_of_spins: int
        The number of spins, q, the unitary acts on.
    goal: RotationGoal
        The rotation.

    Returns
    -------
    numpy.ndarray
        The 2^q x 2^q goal unitary.
    """
    for target in goal.targets:

        if not 1 <= target <= number_of_spins:
            raise ConfigurationError(f'Spin {target} cannot be rotated in a system of {number_of_spins} spins.')

    rotation = single_spin_rotation(goal.axis, goal.angle)
    factors = [rotation if spin in goal.targets else np.eye(2) for spin in range(1, number_of_spins + 1)]

    return functools.reduce(np.kron, factors, np.eye(1, dtype=complex))


def _validated_goal(entries, dimension):

    if dimension < 2 or dimension & (dimension - 1) != 0:
        raise DimensionMismatchError(f'A goal matrix must have a power of two dimension, not {dimension}.')

    if len(entries) != dimension * dimension:

        raise DimensionMismatchError(f'A {dimension}x{dimension} goal matrix needs {dimension * dimension} '
                                     f'entries, but {len(entries)} were provided.')

    matrix = np.array([complex(real, imaginary) for real, imaginary in entries]).reshape(dimension, dimension)
    error = unitarity_error(matrix)

    if error > UNITARITY_TOLERANCE:
        raise NonUnitaryError(f'The goal matrix is not unitary (max |U†U - I| = {error:.3e}).')

    return matrix


def goal_from_file(document):
    """Reads a user supplied goal unitary.

    The text form is a dimension line followed by one ``re im`` line
    per entry in row major order; lines starting with ``#`` are comments.
    The JSON form (as embedded in goal configs) is
    ``{"dimension": N, "entries": [[re, im], ...]}``.

    Parameters
    ----------
    document: str or dict
        The text of the document, or the parsed JSON form.

    Returns
    -------
    numpy.ndarray
        The validated goal unitary.
    """

    if isinstance(document, dict):

        if 'dimension' not in document or 'entries' not in document:
            raise ConfigurationError('A goal matrix document needs both a `dimension` and an `entries` field.')

        return _validated_goal([tuple(entry) for entry in document['entries']], int(document['dimension']))

    lines = [line.strip() for line in document.splitlines()]
    lines = [line for line in lines if len(line) > 0 and not line.startswith('#')]

    if len(lines) == 0:
        raise ConfigurationError('The goal matrix document is empty.')

    try:

        dimension = int(lines[0])
        entries = [tuple(float(value) for value in line.split()) for line in lines[1:]]

    except ValueError as e:
        raise ConfigurationError(f'The goal matrix document could not be parsed: {e}')

    if any(len(entry) != 2 for entry in entries):
        raise ConfigurationError('Every goal matrix entry must be a `re im` pair.')

    return _validated_goal(entries, dimension)


def subgroup_rotation_goals(subgroups, targets, axis, angle):
    """Expresses a rotation of a set of spins as one goal per subgroup,
    each rotating only the targets which fall within it.

    Parameters
    ----------
    subgroups: list of Subgroup
        The subgroups.
    targets: list of int
        The 1-based numbers of the rotated spins in the full system.
    axis: str or float
        The rotation axis.
    angle: float
        The rotation angle in rad.

    Returns
    -------
    list of tuple of Subgroup and numpy.ndarray
    """
    goals = []
    targets = set(targets)

    for subgroup in subgroups:

        local_targets = [position + 1 for position, index in enumerate(subgroup.indices) if index + 1 in targets]

        if len(local_targets) == 0:

            goals.append((subgroup, np.eye(2 ** len(subgroup), dtype=complex)))
            continue

        goals.append((subgroup, rotation_goal(len(subgroup), RotationGoal(local_targets, axis, angle))))

    return goals


def odd_spins(number_of_spins):
    """list of int: The odd 1-based spin numbers of a system."""
    return list(range(1, number_of_spins + 1, 2))


def odd_spin_rotation_goal(system, subgroups, angle, axis='x'):
    """Builds the per subgroup goals of a rotation of every odd numbered
    spin (1, 3, 5, ... counted over the whole system) of a lattice.

    Parameters
    ----------
    system: SpinSystem
        The full system.
    subgroups: list of Subgroup
        The subgroups the system is optimized through.
    angle: float
        The rotation angle in rad.
    axis: str or float
        The rotation axis.

    Returns
    -------
    list of tuple of Subgroup and numpy.ndarray
    """
    for subgroup in subgroups:
        subgroup.validate_for(system)

    return subgroup_rotation_goals(subgroups, odd_spins(system.number_of_spins), axis, angle)


def _parse_axis(value):

    if isinstance(value, str):
        return value.lower()

    return math.radians(float(value))


def _parse_subgroups(document, system):

    if 'subgroups' in document and 'tiling' in document:
        raise ConfigurationError('A goal document may declare either `subgroups` or a `tiling`, not both.')

    if 'subgroups' in document:
        subgroups = [Subgroup.from_one_based(indices) for indices in document['subgroups']]

    elif 'tiling' in document:

        rows, cols = int(document['tiling']['rows']), int(document['tiling']['cols'])

        if rows * cols != system.number_of_spins:

            raise ConfigurationError(f'A {rows}x{cols} tiling does not cover a system of '
                                     f'{system.number_of_spins} spins.')

        subgroups = default_tiling(rows, cols)

    else:
        subgroups = [Subgroup(range(system.number_of_spins))]

    for subgroup in subgroups:
        subgroup.validate_for(system)

    return subgroups


def parse_goal_config(document, system, maximum_spins=None):
    """Creates the per subgroup goals described by a goal config document.

    The ``type`` of the goal is one of ``rotation`` (with ``targets``,
    ``axis`` and ``angle`` in degrees), ``odd_spins`` (with ``axis`` and
    ``angle``) or ``matrix`` (with one goal matrix document per subgroup in
    ``matrices``). Subgroups are declared through ``subgroups`` (lists of
    1-based spin numbers) or a ``tiling`` of ``rows`` x ``cols``, and default
    to a single subgroup covering the whole system.

    Parameters
    ----------
    document: str or dict
        The JSON text, or already parsed dictionary, of the document.
    system: SpinSystem
        The system the goals act on.
    maximum_spins: int, optional
        The explicit state cap up to which the whole system goal is built.
        Defaults to `DEFAULT_MAXIMUM_SPINS`.

    Returns
    -------
    list of tuple of Subgroup and numpy.ndarray
        The goal of each subgroup.
    numpy.ndarray, optional
        The goal on the whole system, if one is defined, for verifying
        subgroup optimized pulses against the full system.
    """

    if isinstance(document, (str, bytes)):

        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f'The goal document is not valid JSON: {e}')

    goal_type = document.get('type')
    subgroups = _parse_subgroups(document, system)

    if goal_type in ['rotation', 'odd_spins']:

        axis = _parse_axis(document.get('axis', 'x'))

        if 'angle' not in document:
            raise ConfigurationError('A rotation goal document must define an `angle` (in degrees).')

        angle = math.radians(float(document['angle']))

        if goal_type == 'rotation':

            if 'targets' not in document:
                raise ConfigurationError('A rotation goal document must list its `targets`.')

            targets = [int(target) for target in document['targets']]

        else:
            targets = odd_spins(system.number_of_spins)

        whole_system_rotation = RotationGoal(targets, axis, angle)

        for target in targets:

            if not 1 <= target <= system.number_of_spins:
                raise ConfigurationError(f'The rotation target {target} is not a spin of the system.')

        whole_system_goal = None

        if maximum_spins is None:
            maximum_spins = DEFAULT_MAXIMUM_SPINS

        if system.number_of_spins <= maximum_spins:
            whole_system_goal = rotation_goal(system.number_of_spins, whole_system_rotation)

        if goal_type == 'odd_spins':
            return odd_spin_rotation_goal(system, subgroups, angle, axis), whole_system_goal

        return subgroup_rotation_goals(subgroups, targets, axis, angle), whole_system_goal

    if goal_type == 'matrix':

        matrices = document.get('matrices', [])

        if len(matrices) != len(subgroups):

            raise ConfigurationError(f'{len(matrices)} goal matrices were provided for '
                                     f'{len(subgroups)} subgroups.')

        goals = [(subgroup, goal_from_file(matrix)) for subgroup, matrix in zip(subgroups, matrices)]

        for subgroup, goal in goals:

            if len(goal) != 2 ** len(subgroup):

                raise DimensionMismatchError(f'The {len(goal)}x{len(goal)} goal matrix does not match the '
                                             f'{len(subgroup)} spin subgroup {subgroup.one_based()}.')

        whole_system_goal = None

        if len(goals) == 1 and goals[0][0].indices == tuple(range(system.number_of_spins)):
            whole_system_goal = goals[0][1]

        return goals, whole_system_goal

    raise ConfigurationError(f'{goal_type} is not a goal type - expected rotation, odd_spins or matrix.')
