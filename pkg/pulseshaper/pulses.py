"""
An API for the sine series pulse parameterization, and for sampling
pulses onto a discrete time grid.

Notes
-----
The amplitude of a pulse is the series

    Ω(t) = Σ a_k sin(b_k t + c_k),

shifted so that its minimum over the sample grid is zero and then, only if its
maximum exceeds the amplitude bound, uniformly rescaled onto [0, A_max]. The
phase is the unbounded series φ(t) = Σ d_k sin(f_k t + g_k). The amplitude is
finally multiplied by a tanh edge envelope which forces it to zero at both ends
of the pulse.

Samples are taken at the midpoint, (k + 1/2)δt, of each time step.
"""
import json
import math

import numpy as np

from pulseshaper import unit
from pulseshaper.utils.exceptions import ConfigurationError, ParameterCountError
from pulseshaper.utils.quantities import to_angular_frequency, to_seconds
from pulseshaper.utils.serialization import TypedBaseModel

#: The ζ₁ and ζ₂ edge factors of the envelope used by default.
DEFAULT_EDGE_FACTORS = (2.0, 2.0)


def param_count(amplitude_terms, phase_terms):
    """Returns the number of free parameters of a sine series
    pulse.

    Parameters
    ----------
    amplitude_terms: int
        The number of amplitude sines, s_A.
    phase_terms: int
        The number of phase sines, s_P.

    Returns
    -------
    int
        3(s_A + s_P)
    """

    if amplitude_terms < 1 or phase_terms < 1:

        raise ConfigurationError(f'A pulse needs at least one amplitude and one phase term '
                                 f'(s_A={amplitude_terms}, s_P={phase_terms}).')

    return 3 * (amplitude_terms + phase_terms)


class FourierParams(TypedBaseModel):
    """The coefficients of the amplitude and phase sine series of
    a pulse.

    The amplitude triples are (a_k [rad/s], b_k [rad/s], c_k [rad]) and
    the phase triples (d_k [rad], f_k [rad/s], g_k [rad]).
    """

    @property
    def amplitude_terms(self):
        """numpy.ndarray, shape=(s_A, 3): The (a_k, b_k, c_k) triples."""
        return self._amplitude_terms

    @property
    def phase_terms(self):
        """numpy.ndarray, shape=(s_P, 3): The (d_k, f_k, g_k) triples."""
        return self._phase_terms

    @property
    def number_of_amplitude_terms(self):
        return len(self._amplitude_terms)

    @property
    def number_of_phase_terms(self):
        return len(self._phase_terms)

    def __init__(self, amplitude_terms, phase_terms):
        """Constructs a new FourierParams object.

        Parameters
        ----------
        amplitude_terms: array_like, shape=(s_A, 3)
            The (a_k, b_k, c_k) triples.
        phase_terms: array_like, shape=(s_P, 3)
            The (d_k, f_k, g_k) triples.
        """

        self._amplitude_terms = np.array(amplitude_terms, dtype=float).reshape(-1, 3)
        self._phase_terms = np.array(phase_terms, dtype=float).reshape(-1, 3)

        param_count(len(self._amplitude_terms), len(self._phase_terms))

    @classmethod
    def zeros(cls, amplitude_terms, phase_terms):
        """Creates a set of parameters which describes a pulse with
        zero amplitude and zero phase."""
        return cls(np.zeros((amplitude_terms, 3)), np.zeros((phase_terms, 3)))

    def __getstate__(self):

        return {
            'amplitude_terms': self._amplitude_terms.tolist(),
            'phase_terms': self._phase_terms.tolist()
        }

    def __setstate__(self, state):

        self._amplitude_terms = np.array(state['amplitude_terms'], dtype=float).reshape(-1, 3)
        self._phase_terms = np.array(state['phase_terms'], dtype=float).reshape(-1, 3)

    def __eq__(self, other):

        return (isinstance(other, FourierParams) and
                np.array_equal(self._amplitude_terms, other.amplitude_terms) and
                np.array_equal(self._phase_terms, other.phase_terms))

    def __ne__(self, other):
        return not self.__eq__(other)


class PulseSpec(TypedBaseModel):
    """The fixed settings of a pulse: its duration, amplitude bound, edge
    envelope and the time step it is sampled with.
    """

    @property
    def duration(self):
        """float: The duration, τ_f, of the pulse in seconds."""
        return self._duration

    @property
    def max_amplitude(self):
        """float: The amplitude bound, A_max, in rad/s."""
        return self._max_amplitude

    @property
    def edge_factors(self):
        """tuple of float and float: The ζ₁ and ζ₂ envelope factors."""
        return self._edge_factors

    @property
    def time_step(self):
        """float: The sampling time step, δt, in seconds."""
        return self._time_step

    @property
    def number_of_steps(self):
        """int: The number of time steps, τ_f / δt."""
        return int(round(self._duration / self._time_step))

    def __init__(self, duration, max_amplitude, time_step, edge_factors=DEFAULT_EDGE_FACTORS):
        """Constructs a new PulseSpec object.

        Parameters
        ----------
        duration: float
            The pulse duration in seconds.
        max_amplitude: float
            The amplitude bound in rad/s.
        time_step: float
            The sampling time step in seconds.
        edge_factors: tuple of float and float
            The ζ₁ and ζ₂ envelope factors.
        """

        self._duration = float(duration)
        self._max_amplitude = float(max_amplitude)
        self._time_step = float(time_step)
        self._edge_factors = tuple(float(factor) for factor in edge_factors)

        self._validate()

    def _validate(self):

        if self._duration <= 0.0:
            raise ConfigurationError(f'The pulse duration must be positive, not {self._duration} s.')
        if self._max_amplitude <= 0.0:
            raise ConfigurationError(f'The amplitude bound must be positive, not {self._max_amplitude} rad/s.')
        if self._time_step <= 0.0:
            raise ConfigurationError(f'The time step must be positive, not {self._time_step} s.')

        if len(self._edge_factors) != 2:
            raise ConfigurationError('Exactly two edge factors (ζ₁, ζ₂) must be provided.')

        check_step_count(self._duration, self._time_step)

    def with_time_step(self, time_step):
        """Returns a copy of this spec sampled with a different time step.

        Parameters
        ----------
        time_step: float
            The new time step in seconds.

        Returns
        -------
        PulseSpec
        """
        return PulseSpec(self._duration, self._max_amplitude, time_step, self._edge_factors)

    def __getstate__(self):

        return {
            'duration': self._duration * unit.second,
            'max_amplitude': self._max_amplitude * unit.radian / unit.second,
            'time_step': self._time_step * unit.second,
            'edge_factors': list(self._edge_factors)
        }

    def __setstate__(self, state):

        self._duration = state['duration'].to(unit.second).magnitude
        self._max_amplitude = state['max_amplitude'].to(unit.radian / unit.second).magnitude
        self._time_step = state['time_step'].to(unit.second).magnitude
        self._edge_factors = tuple(state['edge_factors'])

        self._validate()

    def __eq__(self, other):

        return (isinstance(other, PulseSpec) and
                self._duration == other.duration and
                self._max_amplitude == other.max_amplitude and
                self._time_step == other.time_step and
                self._edge_factors == other.edge_factors)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):

        return (f'<PulseSpec duration={self._duration * 1e6:.3f} us '
                f'time_step={self._time_step * 1e6:.4f} us steps={self.number_of_steps}>')


def check_step_count(duration, time_step):
    """Checks that a duration divides into a whole, positive number of
    time steps (to a relative tolerance of 1e-9).

    Returns
    -------
    int
        The number of steps.
    """
    number_of_steps = int(round(duration / time_step))

    if number_of_steps < 1 or abs(number_of_steps * time_step - duration) > 1.0e-9 * duration:

        raise ConfigurationError(f'A duration of {duration} s is not a whole number of '
                                 f'{time_step} s time steps.')

    return number_of_steps


class SampledPulse(TypedBaseModel):
    """A pulse sampled onto a grid of equal time steps, holding the
    amplitude and phase applied during each step.
    """

    @property
    def amplitudes(self):
        """numpy.ndarray: The amplitude Ω of each step in rad/s."""
        return self._amplitudes

    @property
    def phases(self):
        """numpy.ndarray: The phase φ of each step in rad."""
        return self._phases

    @property
    def time_step(self):
        """float: The step length δt in seconds."""
        return self._time_step

    @property
    def max_amplitude(self):
        """float: The amplitude bound the pulse was sampled against, in rad/s."""
        return self._max_amplitude

    @property
    def number_of_steps(self):
        return len(self._amplitudes)

    @property
    def duration(self):
        """float: The total duration in seconds."""
        return self.number_of_steps * self._time_step

    def __init__(self, amplitudes, phases, time_step, max_amplitude):
        """Constructs a new SampledPulse object.

        Parameters
        ----------
        amplitudes: array_like of float
            The amplitude of each step in rad/s.
        phases: array_like of float
            The phase of each step in rad.
        time_step: float
            The step length in seconds.
        max_amplitude: float
            The amplitude bound in rad/s.
        """

        self._amplitudes = np.array(amplitudes, dtype=float).reshape(-1)
        self._phases = np.array(phases, dtype=float).reshape(-1)
        self._time_step = float(time_step)
        self._max_amplitude = float(max_amplitude)

        if len(self._amplitudes) != len(self._phases):

            raise ConfigurationError(f'A pulse with {len(self._amplitudes)} amplitudes cannot have '
                                     f'{len(self._phases)} phases.')

        if len(self._amplitudes) == 0:
            raise ConfigurationError('A sampled pulse must contain at least one step.')

    def scaled(self, factor):
        """Returns a copy of this pulse with every amplitude multiplied
        by `factor`, as seen by a mis-calibrated spectrometer."""
        return SampledPulse(self._amplitudes * factor, self._phases, self._time_step, self._max_amplitude)

    def sample_times(self):
        """numpy.ndarray: The midpoint time of each step in seconds."""
        return (np.arange(self.number_of_steps) + 0.5) * self._time_step

    def __getstate__(self):

        return {
            'amplitudes': self._amplitudes,
            'phases': self._phases,
            'time_step': self._time_step,
            'max_amplitude': self._max_amplitude
        }

    def __setstate__(self, state):

        self._amplitudes = np.array(state['amplitudes'], dtype=float)
        self._phases = np.array(state['phases'], dtype=float)
        self._time_step = state['time_step']
        self._max_amplitude = state['max_amplitude']

    def __eq__(self, other):

        return (isinstance(other, SampledPulse) and
                np.array_equal(self._amplitudes, other.amplitudes) and
                np.array_equal(self._phases, other.phases) and
                self._time_step == other.time_step and
                self._max_amplitude == other.max_amplitude)

    def __ne__(self, other):
        return not self.__eq__(other)


def _sine_series(terms, grid):

    grid = np.asarray(grid, dtype=float)

    if len(terms) == 0:
        return np.zeros_like(grid)

    return np.sin(np.outer(grid, terms[:, 1]) + terms[:, 2]) @ terms[:, 0]


def amplitude_waveform(params, grid, max_amplitude):
    """Evaluates the amplitude series on a grid of times, before
    the edge envelope is applied.

    The series is shifted so that its minimum over `grid` is exactly
    zero, and then rescaled by A_max / Ω_max if (and only if) its maximum
    over `grid`, Ω_max, exceeds A_max.

    Parameters
    ----------
    params: FourierParams
        The pulse parameters.
    grid: numpy.ndarray
        The sample times in seconds.
    max_amplitude: float
        The amplitude bound A_max in rad/s.

    Returns
    -------
    numpy.ndarray
        The amplitudes in rad/s, all within [0, A_max].
    """
    waveform = _sine_series(params.amplitude_terms, grid)
    waveform = waveform - waveform.min()

    peak_amplitude = waveform.max()

    if peak_amplitude > max_amplitude:

        waveform = waveform * (max_amplitude / peak_amplitude)
        # Keep the bound exact in the face of rounding.
        waveform = np.minimum(waveform, max_amplitude)

    return waveform


def phase_waveform(params, grid):
    """Evaluates the (unwrapped) phase series on a grid of times.

    Parameters
    ----------
    params: FourierParams
        The pulse parameters.
    grid: numpy.ndarray
        The sample times in seconds.

    Returns
    -------
    numpy.ndarray
        The phases in rad.
    """
    return _sine_series(params.phase_terms, grid)


def edge_envelope(time, duration, first_edge_factor, second_edge_factor):
    """Evaluates the edge envelope

        Λ(t) = -tanh(ζ₁t / τ_f) tanh(ζ₂(t - τ_f) / τ_f)

    which smoothly takes the pulse amplitude to zero at t = 0 and t = τ_f.

    Parameters
    ----------
    time: float or numpy.ndarray
        The time(s), within [0, τ_f], to evaluate the envelope at.
    duration: float
        The pulse duration τ_f.
    first_edge_factor: float
        ζ₁
    second_edge_factor: float
        ζ₂

    Returns
    -------
    float or numpy.ndarray
        The envelope value(s), within [0, 1).
    """
    time = np.asarray(time, dtype=float)

    if np.any(time < 0.0) or np.any(time > duration):
        raise ConfigurationError(f'The edge envelope is only defined for times within [0, {duration}] s.')

    envelope = (-np.tanh(first_edge_factor * time / duration) *
                np.tanh(second_edge_factor * (time - duration) / duration))

    # tanh(0) may be signed.
    envelope = np.abs(envelope)

    return float(envelope) if envelope.ndim == 0 else envelope


def sample_pulse(params, spec):
    """Samples a pulse at the midpoint of each of its time steps.

    Parameters
    ----------
    params: FourierParams
        The pulse parameters.
    spec: PulseSpec
        The fixed pulse settings.

    Returns
    -------
    SampledPulse
    """
    grid = (np.arange(spec.number_of_steps) + 0.5) * spec.time_step

    envelope = edge_envelope(grid, spec.duration, *spec.edge_factors)

    amplitudes = envelope * amplitude_waveform(params, grid, spec.max_amplitude)
    phases = phase_waveform(params, grid)

    return SampledPulse(amplitudes, phases, spec.time_step, spec.max_amplitude)


def pack(params):
    """Flattens a set of pulse parameters into the vector searched
    over by the optimizer.

    The vector is ordered as every amplitude triple followed by every phase
    triple, i.e. (a_1, b_1, c_1, ..., a_sA, b_sA, c_sA, d_1, f_1, g_1, ...).

    Parameters
    ----------
    params: FourierParams
        The parameters to flatten.

    Returns
    -------
    numpy.ndarray
    """
    return np.concatenate([params.amplitude_terms.reshape(-1), params.phase_terms.reshape(-1)])


def unpack(vector, amplitude_terms, phase_terms):
    """The inverse of `pack`.

    Parameters
    ----------
    vector: array_like of float
        The flat parameter vector.
    amplitude_terms: int
        The number of amplitude sines, s_A.
    phase_terms: int
        The number of phase sines, s_P.

    Returns
    -------
    FourierParams
    """
    vector = np.asarray(vector, dtype=float).reshape(-1)
    expected_length = param_count(amplitude_terms, phase_terms)

    if len(vector) != expected_length:
        raise ParameterCountError(expected_length, len(vector))

    split_index = 3 * amplitude_terms
    return FourierParams(vector[:split_index].reshape(amplitude_terms, 3), vector[split_index:].reshape(phase_terms, 3))


def parameter_scales(amplitude_terms, phase_terms, spec):
    """Returns the natural size of each packed coordinate, used to build
    an initial simplex which is sensible for every coordinate's units.

    Amplitudes scale with A_max / s_A, frequencies with 2π / τ_f, and
    phases (and phase amplitudes) with one radian.

    Returns
    -------
    numpy.ndarray
    """
    frequency_scale = 2.0 * math.pi / spec.duration

    amplitude_scales = np.tile([spec.max_amplitude / amplitude_terms, frequency_scale, 1.0], amplitude_terms)
    phase_scales = np.tile([1.0, frequency_scale, 1.0], phase_terms)

    return np.concatenate([amplitude_scales, phase_scales])


def parse_pulse_config(document):
    """Creates a `PulseSpec` from a pulse config document.

    The document has the keys ``duration``, ``max_amplitude`` (a frequency
    in Hz, converted to rad/s), ``time_step``, ``amplitude_terms`` and
    ``phase_terms``, and optionally ``edge_factors``. Durations and
    frequencies may be given as strings with units, e.g. ``"500 us"``.

    Parameters
    ----------
    document: str or dict
        The JSON text, or already parsed dictionary, of the document.

    Returns
    -------
    PulseSpec
        The pulse settings.
    int
        The number of amplitude terms, s_A.
    int
        The number of phase terms, s_P.
    """

    if isinstance(document, (str, bytes)):

        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f'The pulse document is not valid JSON: {e}')

    for key in ['duration', 'max_amplitude', 'time_step', 'amplitude_terms', 'phase_terms']:

        if key not in document:
            raise ConfigurationError(f'The pulse document is missing the required `{key}` field.')

    spec = PulseSpec(to_seconds(document['duration']),
                     to_angular_frequency(document['max_amplitude']),
                     to_seconds(document['time_step']),
                     document.get('edge_factors', DEFAULT_EDGE_FACTORS))

    amplitude_terms = int(document['amplitude_terms'])
    phase_terms = int(document['phase_terms'])

    param_count(amplitude_terms, phase_terms)

    return spec, amplitude_terms, phase_terms


def params_to_document(params):
    """Creates the JSON-serializable params document of a set
    of pulse parameters."""

    return {
        'amplitude_terms': params.number_of_amplitude_terms,
        'phase_terms': params.number_of_phase_terms,
        'parameters': pack(params).tolist()
    }


def params_from_document(document):
    """Creates a set of pulse parameters from a params document.

    Parameters
    ----------
    document: str or dict
        The JSON text, or already parsed dictionary, of the document.

    Returns
    -------
    FourierParams
    """

    if isinstance(document, (str, bytes)):

        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f'The params document is not valid JSON: {e}')

    for key in ['amplitude_terms', 'phase_terms', 'parameters']:

        if key not in document:
            raise ConfigurationError(f'The params document is missing the required `{key}` field.')

    return unpack(document['parameters'], int(document['amplitude_terms']), int(document['phase_terms']))
