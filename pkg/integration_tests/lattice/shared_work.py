"""Times an amplitude robust evaluation of the 4x4 lattice subgroups
against a plain one. The three amplitude scaled propagations are batched
through the same per step passes, so the robust evaluation should cost no
more than 1.8 times the plain one.
"""
import logging
import math
import timeit

import numpy as np

from pulseshaper.fidelity import Objective, RobustnessMode, RobustnessSettings, evaluate_pulse
from pulseshaper.goals import odd_spin_rotation_goal
from pulseshaper.optimizer import random_init
from pulseshaper.pulses import PulseSpec, sample_pulse
from pulseshaper.spins import build_square_lattice, default_tiling
from pulseshaper.utils import setup_timestamp_logging


def main():

    setup_timestamp_logging()

    system = build_square_lattice(4, 4, 50.0, 700.0e6, 2000.0)
    goals = odd_spin_rotation_goal(system, default_tiling(4, 4), math.pi / 2.0)

    plain_objective = Objective(goals)
    robust_objective = Objective(goals, RobustnessSettings(RobustnessMode.Amplitude, 0.05))

    spec = PulseSpec(1.0e-3, 2.0 * math.pi * 2.0e4, 1.25e-6)
    pulse = sample_pulse(random_init(7, 14, spec, 0), spec)

    plain_time = np.min(timeit.repeat(lambda: evaluate_pulse(plain_objective, system, pulse), number=1, repeat=5))
    robust_time = np.min(timeit.repeat(lambda: evaluate_pulse(robust_objective, system, pulse), number=1, repeat=5))

    ratio = robust_time / plain_time
    logging.info(f'Plain evaluation {plain_time:.3f} s, robust evaluation {robust_time:.3f} s (x{ratio:.2f}).')

    if ratio > 1.8:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
