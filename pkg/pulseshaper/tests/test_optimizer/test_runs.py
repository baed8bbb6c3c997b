"""
Units tests for pulseshaper.optimizer.runs
"""
import math

import numpy as np
import pytest

from pulseshaper.fidelity import RobustnessMode, evaluate, whole_system_objective
from pulseshaper.goals import RotationGoal, rotation_goal
from pulseshaper.optimizer import AnnealSchedule, OptimizationSettings, SimplexConfig, StopReason, optimize_pulse, \
    random_init, target_reached
from pulseshaper.optimizer.runs import DEFAULT_TARGET, OptimizationRun
from pulseshaper.propagators import DEFAULT_COLUMN_CHUNK, PropagationMethod
from pulseshaper.pulses import PulseSpec, pack
from pulseshaper.spins import SpinSystem
from pulseshaper.utils.exceptions import ConfigurationError


def _single_spin_problem():

    system = SpinSystem([0.0])
    spec = PulseSpec(100.0e-6, 2.0 * math.pi * 1.0e4, 1.0e-6)

    goal = rotation_goal(1, RotationGoal([1], 'x', math.pi / 2.0))
    objective = whole_system_objective(goal, 1)

    return system, objective, spec


def test_random_init():

    spec = PulseSpec(100.0e-6, 2.0 * math.pi * 1.0e4, 1.0e-6)

    first = random_init(3, 2, spec, 7)
    second = random_init(3, 2, spec, 7)
    third = random_init(3, 2, spec, 8)

    assert first == second
    assert first != third

    assert np.all(first.amplitude_terms[:, 0] <= spec.max_amplitude / 3)
    assert np.all(first.phase_terms[:, 2] < 2.0 * math.pi)


def test_single_spin_quarter_turn():

    system, objective, spec = _single_spin_problem()

    schedule = AnnealSchedule([2.0e-6, 1.0e-6])
    simplex_config = SimplexConfig(max_evaluations=2000, target=1.0e-3)

    run = optimize_pulse(system, objective, spec, 2, 2, schedule, simplex_config, number_of_starts=3, seed=1)

    assert run.best_infidelity < 1.0e-3
    assert target_reached(run, simplex_config)

    assert len(run.start_infidelities) == 3
    assert run.best_infidelity == min(run.start_infidelities)

    # The reported infidelity is that of the reported parameters at the finest time step.
    final_spec = spec.with_time_step(1.0e-6)
    assert np.isclose(evaluate(objective, system, run.best_params, final_spec), run.best_infidelity)

    assert [stage.time_step for stage in run.stages] == [2.0e-6, 1.0e-6]


def test_determinism():

    system, objective, spec = _single_spin_problem()

    schedule = AnnealSchedule([2.0e-6, 1.0e-6])
    simplex_config = SimplexConfig(max_evaluations=40)

    first = optimize_pulse(system, objective, spec, 2, 2, schedule, simplex_config, number_of_starts=2, seed=5)
    second = optimize_pulse(system, objective, spec, 2, 2, schedule, simplex_config, number_of_starts=2, seed=5)

    assert first.best_params == second.best_params
    assert first.start_infidelities == second.start_infidelities

    assert first.total_evaluations == second.total_evaluations <= 2 * 2 * 40


def test_warm_start_consistency():

    system, objective, spec = _single_spin_problem()

    schedule = AnnealSchedule([2.0e-6, 1.0e-6, 0.5e-6])
    run = optimize_pulse(system, objective, spec, 2, 2, schedule, SimplexConfig(max_evaluations=100),
                         number_of_starts=2, seed=3)

    assert len(run.stages) == 3

    for previous_stage, stage in zip(run.stages[:-1], run.stages[1:]):
        assert abs(stage.initial_infidelity - previous_stage.best_infidelity) <= 0.05


def test_evaluation_accounting():

    system, objective, spec = _single_spin_problem()

    simplex_config = SimplexConfig(max_evaluations=15, f_tolerance=0.0)
    run = optimize_pulse(system, objective, spec, 1, 1, AnnealSchedule([1.0e-6]), simplex_config,
                         number_of_starts=1, seed=0)

    assert run.evaluations == run.total_evaluations == 15
    assert run.stages[0].stop_reason == StopReason.Evaluations


def test_no_starts():

    system, objective, spec = _single_spin_problem()

    with pytest.raises(ConfigurationError):
        optimize_pulse(system, objective, spec, 2, 2, number_of_starts=0)


def test_schedule_validation():

    with pytest.raises(ConfigurationError):
        AnnealSchedule([1.0e-6, 2.0e-6])

    with pytest.raises(ConfigurationError):
        AnnealSchedule([])

    with pytest.raises(ConfigurationError):
        AnnealSchedule([3.0e-6]).validate_for(100.0e-6)

    schedule = AnnealSchedule.from_document(['5 us', '2.5 us', '1.25 us', '0.625 us'])

    assert np.allclose(schedule.time_steps, [5.0e-6, 2.5e-6, 1.25e-6, 0.625e-6])
    schedule.validate_for(500.0e-6)


def test_settings_document():

    settings = OptimizationSettings.from_document({
        'seed': 4,
        'starts': 2,
        'schedule': ['2 us', '1 us'],
        'robustness': {'mode': 'amplitude', 'epsilon': 0.05},
        'method': 'exact',
        'column_chunk': 64,
        'simplex': {'max_evaluations': 10}
    })

    assert settings.seed == 4
    assert settings.number_of_starts == 2
    assert settings.method == PropagationMethod.Exact
    assert settings.column_chunk == 64
    assert settings.robustness.mode == RobustnessMode.Amplitude

    assert settings.simplex_config.max_evaluations == 10
    assert settings.simplex_config.target == DEFAULT_TARGET

    defaults = OptimizationSettings.from_document({})

    assert defaults.number_of_starts == 3
    assert defaults.column_chunk == DEFAULT_COLUMN_CHUNK
    assert np.allclose(defaults.schedule.time_steps, [5.0e-6, 2.5e-6, 1.25e-6, 0.625e-6])

    with pytest.raises(ConfigurationError):
        OptimizationSettings.from_document({'method': 'magnus'})

    with pytest.raises(ConfigurationError):
        OptimizationSettings.from_document({'column_chunk': 0})


def test_run_serialization():

    system, objective, spec = _single_spin_problem()

    run = optimize_pulse(system, objective, spec, 1, 1, AnnealSchedule([1.0e-6]), SimplexConfig(max_evaluations=10),
                         number_of_starts=1, seed=0)

    parsed = OptimizationRun.parse_json(run.json())

    assert parsed.best_params == run.best_params
    assert parsed.stages == run.stages

    assert np.array_equal(pack(parsed.best_params), pack(run.best_params))
