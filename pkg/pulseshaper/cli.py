"""
The `pulseshaper` command line interface.

Sub-commands
------------
optimize      Optimize a pulse and write its record, parameters and shape file.
simulate      Report the infidelity of a pulse by the exact and / or fast method.
verify        Sweep the infidelity of a pulse over calibration errors.
export-shape  Write the shape file (and plot data) of a set of parameters.
lattice-gen   Write the spin system config of a square lattice.

Exit codes are 0 when an optimization reached its target (or a command
succeeded), 2 when an optimization missed its target and 1 on any error.
"""
import argparse
import json
import logging
import os
import sys

import numpy as np
import pandas as pd

from pulseshaper.backends import DaskLocalCluster
from pulseshaper.fidelity import Objective, RobustnessMode, evaluate, evaluate_pulse, whole_system_objective
from pulseshaper.goals import parse_goal_config
from pulseshaper.optimizer import OptimizationSettings, optimize_pulse, target_reached
from pulseshaper.propagators import PropagationMethod
from pulseshaper.pulses import params_from_document, params_to_document, parse_pulse_config, sample_pulse
from pulseshaper.records import RunRecord
from pulseshaper.shapes import read_shape_file, write_pulse_plot_data, write_shape_file, write_sweep_data
from pulseshaper.spins import (SpeciesBlock, build_square_lattice, parse_system_config, scale_frame_offsets,
                               shift_frequencies, system_to_config)
from pulseshaper.utils import setup_timestamp_logging
from pulseshaper.utils.exceptions import ConfigurationError, PulseShaperException

EXIT_SUCCESS = 0
EXIT_ERROR = 1
EXIT_TARGET_MISSED = 2

RECORD_FILE_NAME = 'run_record.json'
PARAMS_FILE_NAME = 'best_params.json'
SHAPE_FILE_NAME = 'pulse.shape'
PLOT_DATA_FILE_NAME = 'pulse_plot.dat'


def read_json_document(file_path):
    """Reads a JSON config document from disk.

    Parameters
    ----------
    file_path: str
        The path of the document.

    Returns
    -------
    dict
    """
    try:

        with open(file_path) as file:
            return json.load(file)

    except OSError as e:
        raise ConfigurationError(f'The document {file_path} could not be read: {e}')
    except json.JSONDecodeError as e:
        raise ConfigurationError(f'The document {file_path} is not valid JSON: {e}')


def build_objective(system, goal_config, settings):
    """Creates the objective described by a goal config and
    optimization settings.

    Returns
    -------
    Objective
        The per subgroup objective.
    numpy.ndarray, optional
        The whole system goal, if the goal config defines one.
    """
    goals, whole_system_goal = parse_goal_config(goal_config, system, settings.maximum_spins)
    objective = Objective(goals, settings.robustness, settings.method, settings.maximum_spins, settings.column_chunk)

    return objective, whole_system_goal


def cmd_optimize(system_config, goal_config, pulse_config, optimization_config, out_dir, seed=None,
                 backend=None):
    """Optimizes a pulse and writes its run record, best parameters, shape
    file and plot data into `out_dir`.

    Parameters
    ----------
    system_config: dict
        The spin system config document.
    goal_config: dict
        The goal config document.
    pulse_config: dict
        The pulse config document.
    optimization_config: dict
        The optimization config document.
    out_dir: str
        The directory to write the artifacts to.
    seed: int, optional
        Overrides the seed of the optimization config.
    backend: PulseShaperBackend, optional
        A backend to distribute the optimization over.

    Returns
    -------
    RunRecord
    """
    os.makedirs(out_dir, exist_ok=True)

    settings = OptimizationSettings.from_document(optimization_config)

    if seed is not None:
        settings.seed = seed

    record = RunRecord({
        'system': system_config,
        'goal': goal_config,
        'pulse': pulse_config,
        'optimization': optimization_config
    }, settings.seed, settings.schedule)

    record.target = settings.simplex_config.target
    record_path = os.path.join(out_dir, RECORD_FILE_NAME)

    try:

        system = parse_system_config(system_config)
        spec, amplitude_terms, phase_terms = parse_pulse_config(pulse_config)

        objective, _ = build_objective(system, goal_config, settings)

        run = optimize_pulse(system, objective, spec, amplitude_terms, phase_terms, settings.schedule,
                             settings.simplex_config, settings.number_of_starts, settings.seed, backend)

        record.record_run(run)

        final_spec = spec.with_time_step(settings.schedule.time_steps[-1])

        record.infidelities = {
            'plain': evaluate(objective.without_robustness(), system, run.best_params, final_spec),
            'robust': run.best_infidelity
        }

        record.target_reached = target_reached(run, settings.simplex_config)

        params_path = os.path.join(out_dir, PARAMS_FILE_NAME)

        with open(params_path, 'w') as file:
            json.dump(params_to_document(run.best_params), file, indent=2)

        pulse = sample_pulse(run.best_params, final_spec)

        shape_path = os.path.join(out_dir, SHAPE_FILE_NAME)
        write_shape_file(shape_path, pulse)

        plot_path = os.path.join(out_dir, PLOT_DATA_FILE_NAME)
        write_pulse_plot_data(plot_path, pulse)

        record.artifacts = {
            'record': record_path,
            'params': params_path,
            'shape': shape_path,
            'plot_data': plot_path
        }

    except Exception as e:

        record.exceptions.append(PulseShaperException.from_exception(e, out_dir))
        raise

    finally:

        record.finish()
        record.save(record_path)

    if not record.target_reached:

        logging.warning(f'The optimization finished with an infidelity of {run.best_infidelity:.6g}, '
                        f'which misses the target of {record.target}.')

    return record


def _load_pulse(pulse_config, params_path=None, shape_path=None):

    if shape_path is not None:
        return read_shape_file(shape_path)

    if params_path is None:
        raise ConfigurationError('Either a params document or a shape file must be provided.')

    spec, _, _ = parse_pulse_config(pulse_config)
    params = params_from_document(read_json_document(params_path))

    return sample_pulse(params, spec)


def cmd_simulate(system_config, goal_config, params_document, pulse_config, methods=(PropagationMethod.Fast,),
                 full_system=False, maximum_spins=None):
    """Reports the plain infidelity of a pulse.

    Parameters
    ----------
    system_config: dict
        The spin system config document.
    goal_config: dict
        The goal config document.
    params_document: dict
        The params document of the pulse.
    pulse_config: dict
        The pulse config document, which fixes the time step.
    methods: list of PropagationMethod
        The propagation methods to report.
    full_system: bool
        If true, the pulse is verified against the whole system goal
        rather than the per subgroup goals.
    maximum_spins: int, optional
        Overrides the explicit state size cap.

    Returns
    -------
    dict of str and float
        The infidelity by method name.
    """
    system = parse_system_config(system_config)
    spec, _, _ = parse_pulse_config(pulse_config)

    pulse = sample_pulse(params_from_document(params_document), spec)

    settings = OptimizationSettings()

    if maximum_spins is not None:
        settings.maximum_spins = maximum_spins

    objective, whole_system_goal = build_objective(system, goal_config, settings)

    if full_system:

        if whole_system_goal is None:
            raise ConfigurationError('The goal config does not define a goal on the whole system.')

        objective = whole_system_objective(whole_system_goal, system.number_of_spins,
                                           maximum_spins=settings.maximum_spins)

    report = {}

    for method in methods:

        method = PropagationMethod(method)

        method_objective = Objective(objective.goals, None, method, objective.maximum_spins, objective.column_chunk)
        report[method.value] = evaluate_pulse(method_objective, system, pulse)

    return report


def cmd_verify(system_config, goal_config, pulse, amplitude_scales=None, frequency_scales=None,
               frequency_shifts=None, method=PropagationMethod.Fast, maximum_spins=None, out_dir=None):
    """Sweeps the plain infidelity of a pulse over mis-calibrated amplitudes,
    scaled frame offsets and shifted resonance frequencies.

    Parameters
    ----------
    system_config: dict
        The spin system config document.
    goal_config: dict
        The goal config document.
    pulse: SampledPulse
        The pulse to verify.
    amplitude_scales: list of float, optional
        The factors to multiply the pulse amplitude by.
    frequency_scales: list of float, optional
        The factors to multiply every frame offset by.
    frequency_shifts: list of float, optional
        The shifts, in Hz, to add to every resonance frequency.
    method: PropagationMethod
        The propagation method.
    maximum_spins: int, optional
        Overrides the explicit state size cap.
    out_dir: str, optional
        If given, every sweep is written there as two column plot data.

    Returns
    -------
    dict of str and pandas.DataFrame
        Each sweep, by name, with `scale` and `infidelity` columns.
    """
    system = parse_system_config(system_config)

    settings = OptimizationSettings(method=method)

    if maximum_spins is not None:
        settings.maximum_spins = maximum_spins

    objective, _ = build_objective(system, goal_config, settings)
    objective = objective.without_robustness()

    sweeps = {}

    if amplitude_scales is not None:

        sweeps['amplitude'] = (amplitude_scales,
                               [evaluate_pulse(objective, system, pulse.scaled(scale)) for scale in amplitude_scales])

    if frequency_scales is not None:

        sweeps['frequency'] = (frequency_scales,
                               [evaluate_pulse(objective, scale_frame_offsets(system, scale), pulse)
                                for scale in frequency_scales])

    if frequency_shifts is not None:

        sweeps['shift'] = (frequency_shifts,
                           [evaluate_pulse(objective, shift_frequencies(system, shift), pulse)
                            for shift in frequency_shifts])

    tables = {}

    for name, (values, infidelities) in sweeps.items():

        tables[name] = pd.DataFrame({'scale': values, 'infidelity': infidelities})

        if out_dir is not None:

            os.makedirs(out_dir, exist_ok=True)
            write_sweep_data(os.path.join(out_dir, f'{name}_sweep.dat'), values, infidelities)

    return tables


def cmd_export_shape(params_document, pulse_config, out_path, plot_data_path=None):
    """Samples a set of pulse parameters and writes them as a shape file.

    Returns
    -------
    SampledPulse
        The exported pulse.
    """
    spec, _, _ = parse_pulse_config(pulse_config)
    pulse = sample_pulse(params_from_document(params_document), spec)

    write_shape_file(out_path, pulse)

    if plot_data_path is not None:
        write_pulse_plot_data(plot_data_path, pulse)

    return pulse


def cmd_lattice_gen(rows, cols, coupling_hz, base_frequency_hz, spacing_hz, species_plan=None, out_path=None):
    """Builds the config document of a square lattice.

    Parameters
    ----------
    rows: int
        The number of lattice rows.
    cols: int
        The number of lattice columns.
    coupling_hz: float
        The nearest neighbour coupling in Hz.
    base_frequency_hz: float
        The base frequency of a single channel lattice in Hz.
    spacing_hz: float
        The frequency spacing between consecutive spins in Hz.
    species_plan: list of SpeciesBlock, optional
        Contiguous species blocks.
    out_path: str, optional
        Where to write the document.

    Returns
    -------
    dict
        The spin system config document.
    """
    system = build_square_lattice(rows, cols, coupling_hz, base_frequency_hz, spacing_hz, species_plan)
    document = system_to_config(system)

    if out_path is not None:

        with open(out_path, 'w') as file:
            json.dump(document, file, indent=2)

    return document


def _sweep_values(values):

    if values is None:
        return None

    start, stop, count = float(values[0]), float(values[1]), int(values[2])
    return np.linspace(start, stop, count).tolist()


def _run_optimize(args):

    backend = None if args.workers is None else DaskLocalCluster(number_of_workers=args.workers)
    optimization_config = read_json_document(args.optimization)

    for key, value in [('starts', args.starts), ('method', args.method), ('maximum_spins', args.maximum_spins)]:

        if value is not None:
            optimization_config[key] = value

    if args.schedule is not None:
        optimization_config['schedule'] = args.schedule

    if args.robustness is not None or args.epsilon is not None or args.weights is not None:

        robustness = dict(optimization_config.get('robustness', {}))

        if args.robustness is not None:
            robustness['mode'] = args.robustness
        if args.epsilon is not None:
            robustness['epsilon'] = args.epsilon
        if args.weights is not None:
            robustness['weights'] = args.weights

        optimization_config['robustness'] = robustness

    configs = (read_json_document(args.system), read_json_document(args.goal), read_json_document(args.pulse),
               optimization_config)

    if backend is not None:
        backend.start()

    try:
        record = cmd_optimize(*configs, args.out_dir, args.seed, backend)
    finally:

        if backend is not None:
            backend.stop()

    print(f'plain infidelity: {record.infidelities["plain"]:.8g}')
    print(f'robust infidelity: {record.infidelities["robust"]:.8g}')

    return EXIT_SUCCESS if record.target_reached else EXIT_TARGET_MISSED


def _run_simulate(args):

    methods = [PropagationMethod.Exact, PropagationMethod.Fast] if args.method == 'both' else [args.method]

    report = cmd_simulate(read_json_document(args.system),
                          read_json_document(args.goal),
                          read_json_document(args.params),
                          read_json_document(args.pulse),
                          methods,
                          args.full_system,
                          args.maximum_spins)

    for method, infidelity in report.items():
        print(f'{method} infidelity: {infidelity:.10g}')

    return EXIT_SUCCESS


def _run_verify(args):

    pulse = _load_pulse(None if args.pulse is None else read_json_document(args.pulse), args.params, args.shape)

    tables = cmd_verify(read_json_document(args.system),
                        read_json_document(args.goal),
                        pulse,
                        _sweep_values(args.amplitude_scales),
                        _sweep_values(args.frequency_scales),
                        _sweep_values(args.frequency_shifts),
                        args.method,
                        args.maximum_spins,
                        args.out_dir)

    for name, table in tables.items():
        print(f'{name} sweep:\n{table.to_string(index=False)}')

    return EXIT_SUCCESS


def _run_export_shape(args):

    cmd_export_shape(read_json_document(args.params), read_json_document(args.pulse), args.out, args.plot_data)
    return EXIT_SUCCESS


def _run_lattice_gen(args):

    species_plan = None

    if args.species is not None:
        species_plan = [SpeciesBlock.parse(block) for block in args.species]

    cmd_lattice_gen(args.rows, args.cols, args.coupling, args.base_frequency, args.spacing, species_plan, args.out)
    return EXIT_SUCCESS


def build_parser():
    """Creates the argument parser of the command line interface."""

    parser = argparse.ArgumentParser(prog='pulseshaper',
                                     description='Shaped control pulse synthesis for coupled spin-qubit systems.')

    parser.add_argument('--log-file', default=None, help='Write the log to this file rather than stdout.')

    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    method_choices = [method.value for method in PropagationMethod]

    optimize = subparsers.add_parser('optimize', help='Optimize a pulse.')
    optimize.add_argument('--system', required=True, help='The spin system config.')
    optimize.add_argument('--goal', required=True, help='The goal config.')
    optimize.add_argument('--pulse', required=True, help='The pulse config.')
    optimize.add_argument('--optimization', required=True, help='The optimization config.')
    optimize.add_argument('--out-dir', required=True, help='The directory to write the artifacts to.')
    optimize.add_argument('--seed', type=int, default=None, help='Overrides the seed of the optimization config.')
    optimize.add_argument('--starts', type=int, default=None, help='The number of random starts.')
    optimize.add_argument('--schedule', nargs='+', default=None,
                          help='The annealing time steps, e.g. "5 us" "2.5 us".')
    optimize.add_argument('--method', choices=method_choices, default=None)
    optimize.add_argument('--robustness', choices=[mode.value for mode in RobustnessMode], default=None)
    optimize.add_argument('--epsilon', type=float, default=None, help='The relative calibration error.')
    optimize.add_argument('--weights', type=float, nargs=3, default=None, help='The three robustness weights.')
    optimize.add_argument('--maximum-spins', type=int, default=None, help='The explicit state size cap.')
    optimize.add_argument('--workers', type=int, default=None, help='Run on a local dask cluster of this size.')
    optimize.set_defaults(handler=_run_optimize)

    simulate = subparsers.add_parser('simulate', help='Report the infidelity of a pulse.')
    simulate.add_argument('--system', required=True)
    simulate.add_argument('--goal', required=True)
    simulate.add_argument('--params', required=True)
    simulate.add_argument('--pulse', required=True)
    simulate.add_argument('--method', choices=method_choices + ['both'], default='both')
    simulate.add_argument('--full-system', action='store_true',
                          help='Verify against the goal on the whole system rather than per subgroup.')
    simulate.add_argument('--maximum-spins', type=int, default=None)
    simulate.set_defaults(handler=_run_simulate)

    verify = subparsers.add_parser('verify', help='Sweep the infidelity of a pulse over calibration errors.')
    verify.add_argument('--system', required=True)
    verify.add_argument('--goal', required=True)
    verify.add_argument('--pulse', default=None, help='The pulse config (required with --params).')
    verify.add_argument('--params', default=None)
    verify.add_argument('--shape', default=None, help='Verify an exported shape file instead of parameters.')
    verify.add_argument('--amplitude-scales', nargs=3, default=None, metavar=('START', 'STOP', 'COUNT'))
    verify.add_argument('--frequency-scales', nargs=3, default=None, metavar=('START', 'STOP', 'COUNT'))
    verify.add_argument('--frequency-shifts', nargs=3, default=None, metavar=('START_HZ', 'STOP_HZ', 'COUNT'))
    verify.add_argument('--method', choices=method_choices, default=PropagationMethod.Fast.value)
    verify.add_argument('--maximum-spins', type=int, default=None)
    verify.add_argument('--out-dir', default=None)
    verify.set_defaults(handler=_run_verify)

    export_shape = subparsers.add_parser('export-shape', help='Write the shape file of a set of parameters.')
    export_shape.add_argument('--params', required=True)
    export_shape.add_argument('--pulse', required=True)
    export_shape.add_argument('--out', required=True)
    export_shape.add_argument('--plot-data', default=None, help='Also write the sampled pulse as plot data.')
    export_shape.set_defaults(handler=_run_export_shape)

    lattice_gen = subparsers.add_parser('lattice-gen', help='Write the config of a square lattice.')
    lattice_gen.add_argument('--rows', type=int, required=True)
    lattice_gen.add_argument('--cols', type=int, required=True)
    lattice_gen.add_argument('--coupling', type=float, required=True, help='The coupling in Hz.')
    lattice_gen.add_argument('--base-frequency', type=float, default=0.0, help='The base frequency in Hz.')
    lattice_gen.add_argument('--spacing', type=float, required=True, help='The frequency spacing in Hz.')
    lattice_gen.add_argument('--species', nargs='+', default=None, metavar='LABEL:COUNT:BASE_HZ',
                             help='Contiguous species blocks, in lattice order.')
    lattice_gen.add_argument('--out', required=True)
    lattice_gen.set_defaults(handler=_run_lattice_gen)

    return parser


def main(argv=None):
    """The entry point of the command line interface.

    Returns
    -------
    int
        The exit code.
    """
    parser = build_parser()

    try:
        args = parser.parse_args(argv)

    except SystemExit as e:

        # Usage errors exit with EXIT_ERROR, never EXIT_TARGET_MISSED.
        return EXIT_SUCCESS if e.code in (0, None) else EXIT_ERROR

    setup_timestamp_logging(args.log_file)

    try:
        return args.handler(args)

    except Exception as e:

        logging.error(f'{type(e).__name__}: {e}')
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
