"""Compares pulses optimized with and without the amplitude robust
objective, at an equal evaluation budget, by their infidelity under a
±5% amplitude mis-calibration. The robust pulse should win for at least
two of the three seeds.
"""
import logging

from integration_tests.utils import all_spin_objective, default_spec, run_optimization, two_spin_system
from pulseshaper.fidelity import RobustnessMode, RobustnessSettings, evaluate_pulse
from pulseshaper.pulses import sample_pulse
from pulseshaper.utils import setup_timestamp_logging


def main():

    setup_timestamp_logging()

    system = two_spin_system()
    spec = default_spec()

    plain_objective = all_spin_objective(2)
    robust_objective = all_spin_objective(2, RobustnessSettings(RobustnessMode.Amplitude, 0.05))

    wins = 0

    for seed in range(3):

        plain_run, _ = run_optimization(f'plain_{seed}', system, plain_objective, spec, seed=seed)
        robust_run, _ = run_optimization(f'robust_{seed}', system, robust_objective, spec, seed=seed)

        plain_pulse = sample_pulse(plain_run.best_params, spec)
        robust_pulse = sample_pulse(robust_run.best_params, spec)

        seed_wins = 0

        for scale in [0.95, 1.05]:

            plain_value = evaluate_pulse(plain_objective, system, plain_pulse.scaled(scale))
            robust_value = evaluate_pulse(plain_objective, system, robust_pulse.scaled(scale))

            logging.info(f'Seed {seed}, amplitude scale {scale}: plain {plain_value:.6g}, '
                         f'robust {robust_value:.6g}')

            if robust_value < plain_value:
                seed_wins += 1

        if seed_wins == 2:
            wins += 1

    logging.info(f'The robust pulse won for {wins} of 3 seeds.')

    if wins < 2:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
