import math
import multiprocessing

import pytest

from pulseshaper.backends import ComputeResources, DaskLocalCluster, gather_in_order
from pulseshaper.fidelity import whole_system_objective
from pulseshaper.goals import RotationGoal, rotation_goal
from pulseshaper.optimizer import AnnealSchedule, SimplexConfig, optimize_pulse
from pulseshaper.pulses import PulseSpec
from pulseshaper.spins import SpinSystem


def dummy_function(*args):

    assert len(args) == 2
    return args[0] * args[1]


def test_serial_gather():
    assert gather_in_order(None, dummy_function, [(1, 2), (3, 4), (5, 6)]) == [2, 12, 30]


def test_local_cluster_gather():

    with DaskLocalCluster(number_of_workers=1) as backend:
        results = gather_in_order(backend, dummy_function, [(index, 2) for index in range(8)])

    assert results == [2 * index for index in range(8)]


def test_local_cluster_resources():

    with pytest.raises(ValueError):
        DaskLocalCluster(number_of_workers=multiprocessing.cpu_count() + 1)

    with pytest.raises(AssertionError):
        ComputeResources(number_of_threads=0)


def test_distributed_starts_match_serial():

    system = SpinSystem([0.0])
    spec = PulseSpec(50.0e-6, 2.0 * math.pi * 1.0e4, 1.0e-6)

    objective = whole_system_objective(rotation_goal(1, RotationGoal([1], 'x', math.pi / 2.0)), 1)

    arguments = (system, objective, spec, 1, 1, AnnealSchedule([2.0e-6, 1.0e-6]), SimplexConfig(max_evaluations=30))

    serial_run = optimize_pulse(*arguments, number_of_starts=3, seed=9)

    with DaskLocalCluster(number_of_workers=1) as backend:
        distributed_run = optimize_pulse(*arguments, number_of_starts=3, seed=9, backend=backend)

    assert distributed_run.best_start == serial_run.best_start
    assert distributed_run.best_params == serial_run.best_params
    assert distributed_run.start_infidelities == serial_run.start_infidelities
