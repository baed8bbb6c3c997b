"""
Exact and fast propagators of a spin system driven by a sampled pulse.

Notes
-----
During each step the spins evolve under

    H / ħ = H₀ + Ω (cos φ Jx + sin φ Jy),

where H₀ is the diagonal drift Hamiltonian and Jx, Jy are the collective
spin operators Σ σ_x / 2 and Σ σ_y / 2. The fast method factorizes each
step unitary as

    U ≈ exp(-iφΓ) W₁ exp(-iΩΓδt) W₂ exp(iφΓ),

with Γ = Σ σ_z / 2, W₁ = exp(-iH₀δt/2) H and W₂ = H exp(-iH₀δt/2), where H is
the normalized Hadamard tensor (H² = I), so that every factor is either
diagonal or a Walsh-Hadamard transform.
"""
import math
from enum import Enum

import numpy as np

from pulseshaper.spins import basis_spin_projections, check_explicit_size, drift_diagonal, scale_frame_offsets
from pulseshaper.utils.exceptions import DimensionMismatchError

#: The (amplitude scale, frame offset scale) of a propagator which sees the pulse as designed.
NOMINAL_MEMBER = (1.0, 1.0)

#: The number of propagator columns streamed together when no chunk is given.
DEFAULT_COLUMN_CHUNK = 256


class PropagationMethod(Enum):
    """The method used to build step propagators."""

    Exact = 'exact'
    Fast = 'fast'


def walsh_hadamard(vectors):
    """Applies the normalized q-fold Hadamard tensor to one or more
    vectors of length 2^q using the fast butterfly network.

    Parameters
    ----------
    vectors: numpy.ndarray
        An array whose first axis has length 2^q. Every other axis is
        treated as a batch axis.

    Returns
    -------
    numpy.ndarray
        The transformed array (a new array of the same shape).
    """
    vectors = np.asarray(vectors)
    length = vectors.shape[0]

    if length < 1 or length & (length - 1) != 0:
        raise DimensionMismatchError(f'The Walsh-Hadamard transform needs a power of two length, not {length}.')

    result = np.array(vectors, dtype=np.result_type(vectors.dtype, float), order='C')
    _walsh_hadamard_in_place(result)

    return result


def _walsh_hadamard_in_place(block):
    """Overwrites a C contiguous block with its normalized Walsh-Hadamard
    transform along the first axis."""
    assert block.flags.c_contiguous

    length = block.shape[0]
    batch_shape = block.shape[1:]

    half_width = 1

    while half_width < length:

        butterflies = block.reshape((length // (2 * half_width), 2, half_width) + batch_shape)

        upper = butterflies[:, 0]
        lower = butterflies[:, 1]

        # (a, b) -> (a + b, a - b) without temporaries.
        upper += lower
        lower *= -2.0
        lower += upper

        half_width *= 2

    # One factor of 1/√2 per qubit.
    block *= 1.0 / math.sqrt(length)


def collective_spin_operators(number_of_spins):
    """Builds the collective spin operators Jx = Σ σ_x / 2 and
    Jy = Σ σ_y / 2 as dense matrices.

    Returns
    -------
    numpy.ndarray
        Jx
    numpy.ndarray
        Jy
    """
    sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    sigma_y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)

    dimension = 2 ** number_of_spins

    total_x = np.zeros((dimension, dimension), dtype=complex)
    total_y = np.zeros((dimension, dimension), dtype=complex)

    for spin_index in range(number_of_spins):

        left = np.eye(2 ** spin_index)
        right = np.eye(2 ** (number_of_spins - spin_index - 1))

        total_x += np.kron(np.kron(left, sigma_x), right)
        total_y += np.kron(np.kron(left, sigma_y), right)

    return 0.5 * total_x, 0.5 * total_y


def _exact_step_from_parts(drift, spin_x, spin_y, amplitude, phase, time_step):

    hamiltonian = np.diag(drift).astype(complex)
    hamiltonian += amplitude * (math.cos(phase) * spin_x + math.sin(phase) * spin_y)

    eigenvalues, eigenvectors = np.linalg.eigh(hamiltonian)
    return (eigenvectors * np.exp(-1.0j * eigenvalues * time_step)) @ eigenvectors.conj().T


def exact_step(system, amplitude, phase, time_step, maximum_spins=None):
    """Computes the exact unitary of a single time step by
    diagonalizing the step Hamiltonian.

    Parameters
    ----------
    system: SpinSystem
        The driven spin system.
    amplitude: float
        The pulse amplitude Ω during the step in rad/s.
    phase: float
        The pulse phase φ during the step in rad.
    time_step: float
        The step length δt in seconds.
    maximum_spins: int, optional
        The explicit state size cap.

    Returns
    -------
    numpy.ndarray
        The 2^q x 2^q step unitary.
    """
    drift = drift_diagonal(system, maximum_spins)
    spin_x, spin_y = collective_spin_operators(system.number_of_spins)

    return _exact_step_from_parts(drift, spin_x, spin_y, amplitude, phase, time_step)


class FastStepContext:
    """The diagonals which the fast step factorization needs, which only
    depend on the spin system and the time step and so are computed once.
    """

    @property
    def gamma(self):
        """numpy.ndarray: The diagonal of Γ = Σ σ_z / 2."""
        return self._gamma

    @property
    def w_half(self):
        """numpy.ndarray: The diagonal of exp(-iH₀δt/2)."""
        return self._w_half

    @property
    def number_of_spins(self):
        return self._number_of_spins

    @property
    def time_step(self):
        return self._time_step

    def __init__(self, gamma, w_half, number_of_spins, time_step):

        self._gamma = gamma
        self._w_half = w_half
        self._number_of_spins = number_of_spins
        self._time_step = time_step

        self._gamma.flags.writeable = False
        self._w_half.flags.writeable = False


def build_fast_context(system, time_step, maximum_spins=None):
    """Precomputes the diagonals used by `fast_step_apply`.

    Parameters
    ----------
    system: SpinSystem
        The driven spin system.
    time_step: float
        The step length δt in seconds.
    maximum_spins: int, optional
        The explicit state size cap.

    Returns
    -------
    FastStepContext
    """
    drift = drift_diagonal(system, maximum_spins)
    gamma = basis_spin_projections(system.number_of_spins).sum(axis=1)

    return FastStepContext(gamma, np.exp(-0.5j * drift * time_step), system.number_of_spins, time_step)


def fast_step_apply(context, amplitude, phase, state_block):
    """Applies a single fast step, exp(-iφΓ) W₁ exp(-iΩΓδt) W₂ exp(iφΓ), to
    one or more state vectors.

    Parameters
    ----------
    context: FastStepContext
        The precomputed diagonals.
    amplitude: float
        The pulse amplitude Ω during the step in rad/s.
    phase: float
        The pulse phase φ during the step in rad.
    state_block: numpy.ndarray, shape=(2^q,) or (2^q, k)
        The state vector(s), stored as columns.

    Returns
    -------
    numpy.ndarray
        The propagated state(s), with the same shape as `state_block`.
    """
    state_block = np.asarray(state_block)

    if state_block.shape[0] != len(context.gamma):

        raise DimensionMismatchError(f'A state of dimension {state_block.shape[0]} cannot be propagated by '
                                     f'a {context.number_of_spins} spin context.')

    shape = (-1,) + (1,) * (state_block.ndim - 1)

    gamma = context.gamma.reshape(shape)
    w_half = context.w_half.reshape(shape)

    block = np.exp(1.0j * phase * gamma) * state_block
    block = walsh_hadamard(w_half * block)
    block = walsh_hadamard(np.exp(-1.0j * amplitude * context.time_step * gamma) * block)

    return np.exp(-1.0j * phase * gamma) * (w_half * block)


def _member_drifts(system, members, maximum_spins):

    drifts = {}

    for _, offset_scale in members:

        if offset_scale in drifts:
            continue

        scaled_system = system if offset_scale == 1.0 else scale_frame_offsets(system, offset_scale)
        drifts[offset_scale] = drift_diagonal(scaled_system, maximum_spins)

    return [drifts[offset_scale] for _, offset_scale in members]


def _propagate_fast(system, pulse, members, columns, maximum_spins):
    """Propagates the computational basis states listed in `columns` through
    the whole pulse, once per member, with the fast factorization.

    Every member shares the Hadamard passes and phase factors of a step; only
    the amplitude (or drift) diagonal differs between them.

    Returns
    -------
    numpy.ndarray, shape=(2^q, len(members), len(columns))
    """
    dimension = 2 ** system.number_of_spins
    time_step = pulse.time_step

    gamma = basis_spin_projections(system.number_of_spins).sum(axis=1)[:, None, None]

    drifts = np.stack(_member_drifts(system, members, maximum_spins), axis=1)
    w_half = np.exp(-0.5j * drifts * time_step)[:, :, None]
    w_full = w_half * w_half

    amplitude_scales = np.array([amplitude_scale for amplitude_scale, _ in members])[None, :, None]

    block = np.zeros((dimension, len(members), len(columns)), dtype=complex)
    block[np.asarray(columns), :, np.arange(len(columns))] = 1.0

    amplitudes = pulse.amplitudes
    phases = pulse.phases

    block *= w_half * np.exp(1.0j * phases[0] * gamma)

    for step_index in range(pulse.number_of_steps):

        if step_index > 0:

            # The closing factors of the previous step merge with the opening factors of this one.
            block *= w_full * np.exp(1.0j * (phases[step_index] - phases[step_index - 1]) * gamma)

        _walsh_hadamard_in_place(block)
        block *= np.exp(-1.0j * amplitudes[step_index] * time_step * amplitude_scales * gamma)
        _walsh_hadamard_in_place(block)

    block *= w_half * np.exp(-1.0j * phases[-1] * gamma)

    return block


def _propagate_exact(system, pulse, members, maximum_spins):
    """Builds the full propagator of every member from exact steps.

    Returns
    -------
    list of numpy.ndarray
    """
    spin_x, spin_y = collective_spin_operators(system.number_of_spins)
    propagators = []

    for (amplitude_scale, _), drift in zip(members, _member_drifts(system, members, maximum_spins)):

        propagator = np.eye(2 ** system.number_of_spins, dtype=complex)

        for amplitude, phase in zip(pulse.amplitudes, pulse.phases):

            step = _exact_step_from_parts(drift, spin_x, spin_y, amplitude_scale * amplitude, phase, pulse.time_step)
            propagator = step @ propagator

        propagators.append(propagator)

    return propagators


def propagate_members(system, pulse, members, method=PropagationMethod.Fast, maximum_spins=None):
    """Builds the total propagator of a pulse for each of a set of
    perturbed conditions.

    Parameters
    ----------
    system: SpinSystem
        The driven spin system.
    pulse: SampledPulse
        The sampled pulse.
    members: list of tuple of float and float
        The (amplitude scale, frame offset scale) of each propagator to build.
    method: PropagationMethod
        The propagation method.
    maximum_spins: int, optional
        The explicit state size cap.

    Returns
    -------
    list of numpy.ndarray
        One unitary per member.
    """
    check_explicit_size(system.number_of_spins, maximum_spins)
    method = PropagationMethod(method)

    if method == PropagationMethod.Exact:
        return _propagate_exact(system, pulse, members, maximum_spins)

    dimension = 2 ** system.number_of_spins
    block = _propagate_fast(system, pulse, members, range(dimension), maximum_spins)

    return [block[:, index, :] for index in range(len(members))]


def total_propagator(system, pulse, method=PropagationMethod.Fast, maximum_spins=None):
    """Builds the time ordered product U_m ... U_1 of every step
    unitary of a pulse.

    Parameters
    ----------
    system: SpinSystem
        The driven spin system.
    pulse: SampledPulse
        The sampled pulse.
    method: PropagationMethod
        Whether to use exact or fast step unitaries.
    maximum_spins: int, optional
        The explicit state size cap.

    Returns
    -------
    numpy.ndarray
    """
    return propagate_members(system, pulse, [NOMINAL_MEMBER], method, maximum_spins)[0]


def _symmetric_members(epsilon, amplitude):

    if amplitude:
        return [(1.0 - epsilon, 1.0), NOMINAL_MEMBER, (1.0 + epsilon, 1.0)]

    return [(1.0, 1.0 - epsilon), NOMINAL_MEMBER, (1.0, 1.0 + epsilon)]


def scaled_triple(system, pulse, epsilon, method=PropagationMethod.Fast, maximum_spins=None):
    """Builds the propagators of a pulse whose amplitude is scaled by
    (1 - ε), 1 and (1 + ε).

    Returns
    -------
    tuple of numpy.ndarray
        (U₋, U, U₊)
    """
    return tuple(propagate_members(system, pulse, _symmetric_members(epsilon, True), method, maximum_spins))


def frequency_scaled_propagator(system, pulse, epsilon, method=PropagationMethod.Fast, maximum_spins=None):
    """Builds the propagators of a pulse applied to systems whose frame
    offsets (ω_k - ω_R) are scaled by (1 - ε), 1 and (1 + ε).

    Returns
    -------
    tuple of numpy.ndarray
        (U₋, U, U₊)
    """
    return tuple(propagate_members(system, pulse, _symmetric_members(epsilon, False), method, maximum_spins))


def trace_overlap(goal, system, pulse, members=(NOMINAL_MEMBER,), method=PropagationMethod.Fast,
                  column_chunk=None, maximum_spins=None):
    """Computes Tr(G† U) for each member propagator U without ever
    storing more than `column_chunk` of its columns at once.

    Parameters
    ----------
    goal: numpy.ndarray
        The goal unitary G.
    system: SpinSystem
        The driven spin system.
    pulse: SampledPulse
        The sampled pulse.
    members: list of tuple of float and float
        The (amplitude scale, frame offset scale) of each propagator.
    method: PropagationMethod
        The propagation method. Exact propagation always builds the full matrix.
    column_chunk: int, optional
        The number of columns to propagate together. Defaults to
        `DEFAULT_COLUMN_CHUNK`.
    maximum_spins: int, optional
        The explicit state size cap.

    Returns
    -------
    numpy.ndarray of complex
        One trace per member.
    """
    check_explicit_size(system.number_of_spins, maximum_spins)

    dimension = 2 ** system.number_of_spins
    goal = np.asarray(goal)

    if goal.shape != (dimension, dimension):

        raise DimensionMismatchError(f'A goal of shape {goal.shape} does not match a '
                                     f'{system.number_of_spins} spin system.')

    method = PropagationMethod(method)
    members = list(members)

    if method == PropagationMethod.Exact:

        propagators = _propagate_exact(system, pulse, members, maximum_spins)
        return np.array([np.vdot(goal, propagator) for propagator in propagators])

    column_chunk = DEFAULT_COLUMN_CHUNK if column_chunk is None else max(1, int(column_chunk))
    column_chunk = min(column_chunk, dimension)
    traces = np.zeros(len(members), dtype=complex)

    for first_column in range(0, dimension, column_chunk):

        columns = np.arange(first_column, min(first_column + column_chunk, dimension))
        block = _propagate_fast(system, pulse, members, columns, maximum_spins)

        traces += np.einsum('ij,irj->r', goal[:, columns].conj(), block)

    return traces


def unitarity_error(matrix):
    """Returns the largest entry of |U†U - I|."""
    matrix = np.asarray(matrix)
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(len(matrix)))))
