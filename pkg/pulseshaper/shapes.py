"""
Readers and writers for shape files and plain text plot data.

A shape file is a small header of ``#`` prefixed lines followed by one line
per time step, holding the amplitude as a percentage of the amplitude bound
and the phase in degrees wrapped to [0, 360), both with six decimals::

    # pulseshaper shape file, version 1
    # points: 4
    # duration_us: 4.000000
    # max_amplitude_hz: 10000.000000
    0.000000 0.000000
    50.000000 90.000000
    100.000000 180.000000
    25.000000 270.000000
"""
import math

import numpy as np
import pandas as pd

from pulseshaper.pulses import SampledPulse
from pulseshaper.utils.exceptions import ConfigurationError

SHAPE_FILE_VERSION = 1

_HEADER_KEYS = ['points', 'duration_us', 'max_amplitude_hz']


def wrapped_phase_degrees(phases):
    """Converts phases in rad to degrees wrapped onto [0, 360), at the
    six decimal precision of a shape file.

    Parameters
    ----------
    phases: numpy.ndarray
        The phases in rad.

    Returns
    -------
    numpy.ndarray
    """
    degrees = np.mod(np.degrees(phases), 360.0)

    # Values which would print as 360.000000 belong at zero.
    degrees[np.round(degrees, 6) >= 360.0] = 0.0
    return degrees


def shape_data_frame(pulse):
    """Builds the (amplitude percent, phase degrees) table of a pulse.

    Parameters
    ----------
    pulse: SampledPulse
        The pulse to tabulate.

    Returns
    -------
    pandas.DataFrame
    """
    return pd.DataFrame({
        'amplitude_percent': 100.0 * pulse.amplitudes / pulse.max_amplitude,
        'phase_degrees': wrapped_phase_degrees(pulse.phases)
    })


def write_shape_file(file_path, pulse):
    """Exports a sampled pulse as a shape file.

    Parameters
    ----------
    file_path: str
        The path to write to.
    pulse: SampledPulse
        The pulse to export.
    """
    header_lines = [
        f'# pulseshaper shape file, version {SHAPE_FILE_VERSION}',
        f'# points: {pulse.number_of_steps}',
        f'# duration_us: {pulse.duration * 1.0e6:.6f}',
        f'# max_amplitude_hz: {pulse.max_amplitude / (2.0 * math.pi):.6f}'
    ]

    with open(file_path, 'w') as file:

        file.write('\n'.join(header_lines) + '\n')

        shape_data_frame(pulse).to_csv(file, sep=' ', header=False, index=False,
                                       float_format='%.6f', lineterminator='\n')


def read_shape_file(file_path):
    """Imports a shape file written by `write_shape_file`.

    Parameters
    ----------
    file_path: str
        The path to read.

    Returns
    -------
    SampledPulse
        The pulse, with phases within [0, 2π).
    """
    header = {}

    with open(file_path) as file:

        for line in file:

            if not line.startswith('#'):
                break

            key, _, value = line[1:].partition(':')

            if key.strip() in _HEADER_KEYS:
                header[key.strip()] = float(value)

    missing_keys = [key for key in _HEADER_KEYS if key not in header]

    if len(missing_keys) > 0:
        raise ConfigurationError(f'The shape file {file_path} is missing the {missing_keys} header fields.')

    data = pd.read_csv(file_path, sep=' ', comment='#', header=None, names=['amplitude_percent', 'phase_degrees'])

    number_of_points = int(header['points'])

    if len(data) != number_of_points:

        raise ConfigurationError(f'The shape file {file_path} declares {number_of_points} points '
                                 f'but contains {len(data)}.')

    max_amplitude = 2.0 * math.pi * header['max_amplitude_hz']
    time_step = header['duration_us'] * 1.0e-6 / number_of_points

    return SampledPulse(data['amplitude_percent'].to_numpy() / 100.0 * max_amplitude,
                        np.radians(data['phase_degrees'].to_numpy()),
                        time_step,
                        max_amplitude)


def write_pulse_plot_data(file_path, pulse):
    """Writes the sampled amplitude and phase of a pulse as three
    whitespace separated columns: the step midpoint (µs), the
    amplitude (Hz) and the unwrapped phase (degrees).

    Parameters
    ----------
    file_path: str
        The path to write to.
    pulse: SampledPulse
        The pulse to tabulate.
    """
    data = pd.DataFrame({
        'time_us': pulse.sample_times() * 1.0e6,
        'amplitude_hz': pulse.amplitudes / (2.0 * math.pi),
        'phase_degrees': np.degrees(pulse.phases)
    })

    data.to_csv(file_path, sep=' ', header=False, index=False, float_format='%.6f', lineterminator='\n')


def write_sweep_data(file_path, scales, infidelities):
    """Writes a two column (scale, infidelity) sweep table.

    Parameters
    ----------
    file_path: str
        The path to write to.
    scales: list of float
        The swept values.
    infidelities: list of float
        The infidelity at each value.
    """
    data = pd.DataFrame({'scale': scales, 'infidelity': infidelities})
    data.to_csv(file_path, sep=' ', header=False, index=False, float_format='%.10g', lineterminator='\n')


def read_sweep_data(file_path):
    """Reads a sweep table written by `write_sweep_data`.

    Returns
    -------
    pandas.DataFrame
        With `scale` and `infidelity` columns.
    """
    return pd.read_csv(file_path, sep=' ', header=None, names=['scale', 'infidelity'])
