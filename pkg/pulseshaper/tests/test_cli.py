"""
Units tests for pulseshaper.cli
"""
import json
import math
import os
import tempfile

import numpy as np
import pytest

from pulseshaper.cli import EXIT_ERROR, EXIT_SUCCESS, EXIT_TARGET_MISSED, PARAMS_FILE_NAME, PLOT_DATA_FILE_NAME, \
    RECORD_FILE_NAME, SHAPE_FILE_NAME, cmd_simulate, cmd_verify, main
from pulseshaper.pulses import FourierParams, PulseSpec, SampledPulse, params_to_document
from pulseshaper.records import RunRecord
from pulseshaper.shapes import read_shape_file, read_sweep_data
from pulseshaper.spins import SpeciesBlock, build_square_lattice, parse_system_config, system_to_config
from pulseshaper.tests.utils import smooth_random_params
from pulseshaper.utils import get_data_filename
from pulseshaper.utils.exceptions import ConfigurationError


def _demo_arguments(out_dir, optimization_path=None):

    return ['optimize',
            '--system', get_data_filename('demo/system.json'),
            '--goal', get_data_filename('demo/goal.json'),
            '--pulse', get_data_filename('demo/pulse.json'),
            '--optimization', optimization_path or get_data_filename('demo/optimization.json'),
            '--out-dir', out_dir]


def _write_json(file_path, document):

    with open(file_path, 'w') as file:
        json.dump(document, file)


def test_demo_optimize():

    with tempfile.TemporaryDirectory() as directory:

        assert main(_demo_arguments(directory)) == EXIT_SUCCESS

        for file_name in [RECORD_FILE_NAME, PARAMS_FILE_NAME, SHAPE_FILE_NAME, PLOT_DATA_FILE_NAME]:
            assert os.path.isfile(os.path.join(directory, file_name))

        record = RunRecord.load(os.path.join(directory, RECORD_FILE_NAME))

        assert record.target_reached
        assert record.infidelities['plain'] < 1.0e-3

        assert record.seed == 1
        assert len(record.start_infidelities) == 3
        assert record.configs['goal']['angle'] == 90.0

        pulse = read_shape_file(os.path.join(directory, SHAPE_FILE_NAME))

        assert pulse.number_of_steps == 100
        assert np.all(pulse.amplitudes <= pulse.max_amplitude * (1.0 + 1.0e-6))


def test_seed_override():

    with tempfile.TemporaryDirectory() as directory:

        optimization_path = os.path.join(directory, 'optimization.json')

        _write_json(optimization_path, {
            'seed': 1,
            'starts': 1,
            'schedule': ['1 us'],
            'simplex': {'max_evaluations': 20}
        })

        out_dir = os.path.join(directory, 'out')
        main(_demo_arguments(out_dir, optimization_path) + ['--seed', '11'])

        record = RunRecord.load(os.path.join(out_dir, RECORD_FILE_NAME))

        assert record.seed == 11
        assert 0 < record.evaluations <= 20


def test_missed_target():

    with tempfile.TemporaryDirectory() as directory:

        optimization_path = os.path.join(directory, 'optimization.json')

        _write_json(optimization_path, {
            'seed': 2,
            'starts': 1,
            'schedule': ['1 us'],
            'simplex': {'max_evaluations': 1}
        })

        out_dir = os.path.join(directory, 'out')
        assert main(_demo_arguments(out_dir, optimization_path)) == EXIT_TARGET_MISSED

        record = RunRecord.load(os.path.join(out_dir, RECORD_FILE_NAME))

        assert not record.target_reached
        assert record.evaluations == 1
        assert record.finished is not None


def test_malformed_system():

    with tempfile.TemporaryDirectory() as directory:

        system_path = os.path.join(directory, 'system.json')
        _write_json(system_path, {'version': 1, 'n_spins': 2, 'frequencies_hz': [0.0]})

        arguments = _demo_arguments(os.path.join(directory, 'out'))
        arguments[arguments.index('--system') + 1] = system_path

        assert main(arguments) == EXIT_ERROR

        # The failure is still recorded.
        record = RunRecord.load(os.path.join(directory, 'out', RECORD_FILE_NAME))

        assert len(record.exceptions) == 1
        assert record.exceptions[0].message.startswith('ConfigurationError')


def test_missing_document():

    with tempfile.TemporaryDirectory() as directory:

        arguments = _demo_arguments(directory)
        arguments[arguments.index('--goal') + 1] = os.path.join(directory, 'missing.json')

        assert main(arguments) == EXIT_ERROR


def test_lattice_gen():

    with tempfile.TemporaryDirectory() as directory:

        out_path = os.path.join(directory, 'lattice.json')

        assert main(['lattice-gen', '--rows', '4', '--cols', '4', '--coupling', '50',
                     '--base-frequency', '700e6', '--spacing', '2000', '--out', out_path]) == EXIT_SUCCESS

        with open(out_path) as file:
            system = parse_system_config(file.read())

    assert system == build_square_lattice(4, 4, 50.0, 700.0e6, 2000.0)
    assert len(system.coupled_pairs()) == 24


def test_multi_species_lattice_gen():

    species = ['H:20:0', 'C:20:1e6', 'N:20:2e6', 'P:20:3e6', 'F:20:4e6']

    with tempfile.TemporaryDirectory() as directory:

        out_path = os.path.join(directory, 'lattice.json')

        assert main(['lattice-gen', '--rows', '10', '--cols', '10', '--coupling', '50', '--spacing', '2000',
                     '--species', *species, '--out', out_path]) == EXIT_SUCCESS

        with open(out_path) as file:
            system = parse_system_config(file.read())

    expected = build_square_lattice(10, 10, 50.0, 0.0, 2000.0, [SpeciesBlock.parse(block) for block in species])

    assert system == expected
    assert system.number_of_spins == 100
    assert len(system.channels) == 5
    assert len(system.coupled_pairs()) == 180


def test_simulate_methods_agree(generator):

    pulse_config = {
        'duration': '50 us',
        'max_amplitude': '5 kHz',
        'time_step': '0.1 us',
        'amplitude_terms': 2,
        'phase_terms': 2
    }

    spec = PulseSpec(50.0e-6, 2.0 * math.pi * 5.0e3, 0.1e-6)
    params_document = params_to_document(smooth_random_params(generator, spec))

    with open(get_data_filename('test/systems/two_spins.json')) as file:
        system_config = json.load(file)

    goal_config = {'type': 'rotation', 'targets': [1, 2], 'axis': 'x', 'angle': 90.0}

    report = cmd_simulate(system_config, goal_config, params_document, pulse_config, ['exact', 'fast'])

    assert set(report) == {'exact', 'fast'}
    assert abs(report['exact'] - report['fast']) < 1.0e-5


def test_simulate_command():

    with tempfile.TemporaryDirectory() as directory:

        params_path = os.path.join(directory, 'params.json')
        _write_json(params_path, params_to_document(FourierParams.zeros(2, 2)))

        assert main(['simulate',
                     '--system', get_data_filename('demo/system.json'),
                     '--goal', get_data_filename('demo/goal.json'),
                     '--params', params_path,
                     '--pulse', get_data_filename('demo/pulse.json'),
                     '--full-system']) == EXIT_SUCCESS


def test_verify_zero_pulse():

    system_config = {'version': 1, 'n_spins': 1, 'frequencies_hz': [0.0]}
    goal_config = {'type': 'rotation', 'targets': [1], 'axis': 'x', 'angle': 0.0}

    pulse = SampledPulse(np.zeros(20), np.zeros(20), 1.0e-6, 2.0 * math.pi * 1.0e4)

    with tempfile.TemporaryDirectory() as directory:

        tables = cmd_verify(system_config, goal_config, pulse,
                            amplitude_scales=[0.9, 1.0, 1.1],
                            frequency_scales=[0.5, 1.0, 2.0],
                            out_dir=directory)

        assert set(tables) == {'amplitude', 'frequency'}

        for name, table in tables.items():

            assert np.allclose(table['infidelity'], 0.0, atol=1.0e-12)

            written = read_sweep_data(os.path.join(directory, f'{name}_sweep.dat'))
            assert np.allclose(written['scale'], table['scale'])


def test_verify_frequency_shift():

    # A drift only pulse picks up the phase of the shifted spin.
    system_config = {'version': 1, 'n_spins': 1, 'frequencies_hz': [0.0], 'frame_hz': {'default': 0.0}}
    goal_config = {'type': 'rotation', 'targets': [1], 'axis': 'x', 'angle': 0.0}

    pulse = SampledPulse(np.zeros(100), np.zeros(100), 1.0e-6, 1.0)
    tables = cmd_verify(system_config, goal_config, pulse, frequency_shifts=[0.0, 1000.0])

    infidelities = tables['shift']['infidelity'].to_numpy()

    assert np.isclose(infidelities[0], 0.0)
    assert np.isclose(infidelities[1], 1.0 - abs(math.cos(math.pi * 1000.0 * 100.0e-6)))


def test_verify_command():

    with tempfile.TemporaryDirectory() as directory:

        assert main(['verify',
                     '--system', get_data_filename('demo/system.json'),
                     '--goal', get_data_filename('demo/goal.json'),
                     '--shape', get_data_filename('test/shapes/golden.shape'),
                     '--amplitude-scales', '0.95', '1.05', '3',
                     '--out-dir', directory]) == EXIT_SUCCESS

        assert len(read_sweep_data(os.path.join(directory, 'amplitude_sweep.dat'))) == 3


def test_export_shape():

    with tempfile.TemporaryDirectory() as directory:

        params_path = os.path.join(directory, 'params.json')
        _write_json(params_path, params_to_document(FourierParams.zeros(2, 2)))

        shape_path = os.path.join(directory, 'pulse.shape')
        plot_path = os.path.join(directory, 'pulse.dat')

        assert main(['export-shape', '--params', params_path, '--pulse', get_data_filename('demo/pulse.json'),
                     '--out', shape_path, '--plot-data', plot_path]) == EXIT_SUCCESS

        pulse = read_shape_file(shape_path)

        assert pulse.number_of_steps == 100
        assert np.allclose(pulse.amplitudes, 0.0)

        assert os.path.isfile(plot_path)


def test_usage_errors():

    # Missing required arguments.
    assert main(['optimize', '--system', 'system.json']) == EXIT_ERROR
    assert main(['unknown-command']) == EXIT_ERROR
    assert main([]) == EXIT_ERROR

    assert main(['--help']) == EXIT_SUCCESS


def test_simulate_full_system_cap():

    system_config = system_to_config(build_square_lattice(2, 2, 50.0, 0.0, 2000.0))
    goal_config = {'type': 'odd_spins', 'axis': 'x', 'angle': 90.0, 'tiling': {'rows': 2, 'cols': 2}}

    pulse_config = {'duration': '10 us', 'max_amplitude': '10 kHz', 'time_step': '1 us',
                    'amplitude_terms': 2, 'phase_terms': 2}

    params_document = params_to_document(FourierParams.zeros(2, 2))

    report = cmd_simulate(system_config, goal_config, params_document, pulse_config, ['fast'],
                          full_system=True, maximum_spins=4)

    # A zero pulse leaves the odd spins unrotated, so at most half of the goal's trace survives.
    assert 0.5 - 1.0e-9 <= report['fast'] <= 1.0

    with pytest.raises(ConfigurationError):

        cmd_simulate(system_config, goal_config, params_document, pulse_config, ['fast'],
                     full_system=True, maximum_spins=3)
