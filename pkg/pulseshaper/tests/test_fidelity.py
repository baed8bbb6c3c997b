"""
Units tests for pulseshaper.fidelity
"""
import cmath
import math

import numpy as np
import pytest

from pulseshaper.fidelity import Objective, RobustnessMode, RobustnessSettings, evaluate, evaluate_pulse, \
    gate_infidelity, parse_robustness_config, robust_infidelity, subsystem_infidelity, whole_system_objective
from pulseshaper.goals import RotationGoal, rotation_goal
from pulseshaper.propagators import PropagationMethod, total_propagator
from pulseshaper.pulses import FourierParams, PulseSpec, SampledPulse
from pulseshaper.spins import SpinSystem, Subgroup, build_square_lattice, drift_diagonal, restrict_to_subgroup
from pulseshaper.tests.utils import random_spin_system, smooth_random_pulse
from pulseshaper.utils.exceptions import ConfigurationError, DimensionMismatchError

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def _zero_pulse(number_of_steps, time_step=1.0e-6):
    return SampledPulse(np.zeros(number_of_steps), np.zeros(number_of_steps), time_step, 1.0)


def test_gate_infidelity(generator):

    goal = np.linalg.qr(generator.normal(size=(4, 4)) + 1.0j * generator.normal(size=(4, 4)))[0]

    assert gate_infidelity(goal, goal) < 1.0e-12

    for phase in [0.3, math.pi / 2.0, 2.5]:
        assert gate_infidelity(cmath.exp(1.0j * phase) * goal, goal) < 1.0e-12

    assert np.isclose(gate_infidelity(np.eye(2), _SIGMA_X), 1.0)


def test_gate_infidelity_shapes():

    with pytest.raises(DimensionMismatchError):
        gate_infidelity(np.eye(2), np.eye(4))


@pytest.mark.parametrize('infidelities, weights, expected', [
    ((0.1, 0.1, 0.1), (0.3, 0.4, 0.3), 0.1),
    ((0.5, 0.2, 0.7), (0.0, 1.0, 0.0), 0.2),
    ((0.02, 0.0, 0.02), (1.0, 2.0, 1.0), 0.01)
])
def test_robust_infidelity(infidelities, weights, expected):
    assert np.isclose(robust_infidelity(infidelities, weights), expected)


def test_robust_weights():

    with pytest.raises(ConfigurationError):
        robust_infidelity((0.1, 0.1, 0.1), (0.0, 0.0, 0.0))

    with pytest.raises(ConfigurationError):
        RobustnessSettings(RobustnessMode.Amplitude, 0.05, (0.3, -0.4, 0.3))

    with pytest.raises(ConfigurationError):
        RobustnessSettings(RobustnessMode.Amplitude, 1.5)


def test_subsystem_infidelity():

    assert subsystem_infidelity([0.25]) == 0.25
    assert subsystem_infidelity([0.0, 0.0, 0.0]) == 0.0
    assert np.isclose(subsystem_infidelity([0.02, 0.04]), 0.03)

    with pytest.raises(ValueError):
        subsystem_infidelity([])


def test_robustness_members():

    assert RobustnessSettings().members() == [(1.0, 1.0)]

    amplitude = RobustnessSettings(RobustnessMode.Amplitude, 0.05)
    assert np.allclose(amplitude.members(), [(0.95, 1.0), (1.0, 1.0), (1.05, 1.0)])

    frequency = RobustnessSettings('frequency', 0.1)
    assert np.allclose(frequency.members(), [(1.0, 0.9), (1.0, 1.0), (1.0, 1.1)])


def test_parse_robustness():

    settings = parse_robustness_config({'mode': 'amplitude'})

    assert settings.mode == RobustnessMode.Amplitude
    assert settings.epsilon == 0.05
    assert settings.weights == (0.3, 0.4, 0.3)

    assert parse_robustness_config(None).mode == RobustnessMode.Off

    with pytest.raises(ConfigurationError):
        parse_robustness_config({'mode': 'phase'})


def test_objective_validation():

    with pytest.raises(DimensionMismatchError):
        Objective([(Subgroup([0, 1]), np.eye(2))])

    with pytest.raises(ConfigurationError):
        Objective([])

    objective = Objective([(Subgroup([0, 2]), np.eye(4))])

    with pytest.raises(ConfigurationError):
        objective.validate_for(SpinSystem([0.0, 0.0]))


def test_drift_goal(generator):

    system = random_spin_system(2, generator)
    goal = np.diag(np.exp(-1.0j * drift_diagonal(system) * 30.0e-6))

    objective = whole_system_objective(goal, 2)
    assert evaluate_pulse(objective, system, _zero_pulse(30)) < 1.0e-9


def test_zero_pulse_against_rotation():

    goal = rotation_goal(1, RotationGoal([1], 'x', math.pi / 2.0))
    objective = whole_system_objective(goal, 1)

    infidelity = evaluate_pulse(objective, SpinSystem([0.0]), _zero_pulse(10))
    assert np.isclose(infidelity, 1.0 - math.cos(math.pi / 4.0))


@pytest.mark.parametrize('method', [PropagationMethod.Exact, PropagationMethod.Fast])
def test_robust_objective(generator, method):

    system = random_spin_system(2, generator)
    pulse = smooth_random_pulse(generator, duration=20.0e-6)

    goal = rotation_goal(2, RotationGoal([1, 2], 'y', math.pi / 2.0))
    robustness = RobustnessSettings(RobustnessMode.Amplitude, 0.05, (0.3, 0.4, 0.3))

    objective = Objective([(Subgroup([0, 1]), goal)], robustness, method)

    expected = robust_infidelity([gate_infidelity(total_propagator(system, pulse.scaled(scale), method), goal)
                                  for scale in [0.95, 1.0, 1.05]], robustness.weights)

    assert np.isclose(evaluate_pulse(objective, system, pulse), expected)

    plain = gate_infidelity(total_propagator(system, pulse, method), goal)
    assert np.isclose(evaluate_pulse(objective.without_robustness(), system, pulse), plain)


def test_evaluate_ignores_global_phase(generator):

    system = random_spin_system(2, generator)
    pulse = smooth_random_pulse(generator, duration=20.0e-6)

    goal = rotation_goal(2, RotationGoal([1], 'x', math.pi / 2.0))
    reference = evaluate_pulse(whole_system_objective(goal, 2), system, pulse)

    for phase in [0.7, math.pi, -2.0]:

        shifted_objective = whole_system_objective(cmath.exp(1.0j * phase) * goal, 2)
        assert abs(evaluate_pulse(shifted_objective, system, pulse) - reference) < 1.0e-12


@pytest.mark.parametrize('mode', [RobustnessMode.Amplitude, RobustnessMode.Frequency])
def test_zero_error_robustness(generator, mode):

    system = random_spin_system(2, generator)
    pulse = smooth_random_pulse(generator, duration=20.0e-6)

    goal = rotation_goal(2, RotationGoal([1, 2], 'x', math.pi / 2.0))

    plain_objective = Objective([(Subgroup([0, 1]), goal)])
    robust_objective = Objective([(Subgroup([0, 1]), goal)], RobustnessSettings(mode, 0.0))

    plain = evaluate_pulse(plain_objective, system, pulse)
    assert abs(evaluate_pulse(robust_objective, system, pulse) - plain) < 1.0e-12


def test_subsystem_objective(generator):

    system = build_square_lattice(2, 2, 50.0, 0.0, 2000.0)
    pulse = smooth_random_pulse(generator, duration=20.0e-6)

    subgroups = [Subgroup([0, 1]), Subgroup([2, 3]), Subgroup([0, 2])]
    goal = rotation_goal(2, RotationGoal([1], 'x', math.pi / 2.0))

    objective = Objective([(subgroup, goal) for subgroup in subgroups])

    expected = np.mean([gate_infidelity(total_propagator(restrict_to_subgroup(system, subgroup), pulse), goal)
                        for subgroup in subgroups])

    assert np.isclose(evaluate_pulse(objective, system, pulse), expected)


def test_subsystem_objective_avoids_full_space():

    # A 16 spin lattice is beyond the explicit state cap, but its subgroups are not.
    system = build_square_lattice(4, 4, 50.0, 700.0e6, 2000.0)
    objective = Objective([(Subgroup([0, 1, 4, 5]), np.eye(16)), (Subgroup([1, 2]), np.eye(4))])

    expected = []

    for subgroup, _ in objective.goals:

        drift = drift_diagonal(restrict_to_subgroup(system, subgroup))
        expected.append(1.0 - abs(np.mean(np.exp(-1.0j * drift * 5.0e-6))))

    assert np.isclose(evaluate_pulse(objective, system, _zero_pulse(5)), np.mean(expected))


def test_evaluate_samples_params():

    spec = PulseSpec(20.0e-6, 2.0 * math.pi * 1.0e4, 1.0e-6)
    objective = whole_system_objective(np.eye(2), 1)

    # A zero pulse on a zero offset spin is the identity.
    assert evaluate(objective, SpinSystem([0.0]), FourierParams.zeros(2, 2), spec) < 1.0e-12


def test_objective_serialization():

    goal = rotation_goal(1, RotationGoal([1], 'x', math.pi / 2.0))

    objective = Objective([(Subgroup([0]), goal)],
                          RobustnessSettings(RobustnessMode.Frequency, 0.02),
                          PropagationMethod.Exact)

    assert Objective.parse_json(objective.json()) == objective
