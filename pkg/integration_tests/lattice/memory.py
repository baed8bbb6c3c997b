"""Evaluates the subsystem averaged objective of a 6x6 lattice, which is
far beyond the explicit state limit as a whole, and checks that the peak
resident memory of the process stays below 2 GB.
"""
import logging
import math
import resource

from pulseshaper.fidelity import Objective, evaluate_pulse
from pulseshaper.goals import odd_spin_rotation_goal
from pulseshaper.optimizer import random_init
from pulseshaper.pulses import PulseSpec, sample_pulse
from pulseshaper.spins import build_square_lattice, default_tiling
from pulseshaper.utils import setup_timestamp_logging


def main():

    setup_timestamp_logging()

    system = build_square_lattice(6, 6, 50.0, 700.0e6, 2000.0)
    subgroups = default_tiling(6, 6)

    objective = Objective(odd_spin_rotation_goal(system, subgroups, math.pi / 2.0))

    spec = PulseSpec(1.0e-3, 2.0 * math.pi * 2.0e4, 1.25e-6)
    pulse = sample_pulse(random_init(7, 14, spec, 0), spec)

    infidelity = evaluate_pulse(objective, system, pulse)

    # Linux reports the peak resident set size in kB.
    peak_memory = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0 ** 2

    logging.info(f'{len(subgroups)} subgroups evaluated to {infidelity:.6g} with a peak memory of '
                 f'{peak_memory:.2f} GB.')

    if peak_memory >= 2.0:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
