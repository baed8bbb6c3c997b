import json
import logging
import math
import time

from pulseshaper.fidelity import Objective
from pulseshaper.goals import RotationGoal, rotation_goal
from pulseshaper.optimizer import AnnealSchedule, SimplexConfig, optimize_pulse
from pulseshaper.pulses import PulseSpec, params_to_document
from pulseshaper.spins import SpinSystem, Subgroup
from pulseshaper.utils.serialization import TypedJSONEncoder


def two_spin_system():
    """Two spins at ±1 kHz from the frame, coupled by J = 50 Hz."""
    return SpinSystem([-1000.0, 1000.0], [[0.0, 50.0], [50.0, 0.0]], frame_frequencies_hz={'default': 0.0})


def spin_chain(number_of_spins, coupling_hz=50.0, offset_spread_hz=2000.0):
    """A linear chain with nearest neighbour couplings and offsets evenly
    spread over `offset_spread_hz` around the frame."""

    frequencies_hz = [offset_spread_hz * (index / (number_of_spins - 1) - 0.5) for index in range(number_of_spins)]
    couplings_hz = [[coupling_hz if abs(first - second) == 1 else 0.0 for second in range(number_of_spins)]
                    for first in range(number_of_spins)]

    return SpinSystem(frequencies_hz, couplings_hz, frame_frequencies_hz={'default': 0.0})


def all_spin_objective(number_of_spins, robustness=None):
    """Simultaneous π/2 x rotations of every spin of a system."""

    goal = rotation_goal(number_of_spins, RotationGoal(list(range(1, number_of_spins + 1)), 'x', math.pi / 2.0))
    return Objective([(Subgroup(range(number_of_spins)), goal)], robustness)


def default_spec(duration=500.0e-6, max_amplitude_hz=1.0e4):
    return PulseSpec(duration, 2.0 * math.pi * max_amplitude_hz, 0.625e-6)


def run_optimization(name, system, objective, spec, amplitude_terms=7, phase_terms=14, seed=0, starts=3,
                     max_evaluations=4000, target=None, schedule=None, backend=None):
    """Runs (and logs the outcome of) a multi-start optimization, saving
    the run and best parameters as `{name}_run.json` and `{name}_params.json`."""

    schedule = schedule or AnnealSchedule()
    simplex_config = SimplexConfig(max_evaluations=max_evaluations, target=target)

    start_time = time.perf_counter()

    run = optimize_pulse(system, objective, spec, amplitude_terms, phase_terms, schedule, simplex_config,
                         number_of_starts=starts, seed=seed, backend=backend)

    wall_clock = time.perf_counter() - start_time

    logging.info(f'{name}: infidelity {run.best_infidelity:.6g} after {run.total_evaluations} '
                 f'evaluations in {wall_clock:.1f} s.')

    with open(f'{name}_run.json', 'w') as file:
        file.write(json.dumps(run, indent=2, cls=TypedJSONEncoder))

    with open(f'{name}_params.json', 'w') as file:
        json.dump(params_to_document(run.best_params), file, indent=2)

    return run, wall_clock
