"""Optimizes simultaneous π/2 rotations of two coupled spins with a 63
parameter pulse, which should reach a plain infidelity below 0.01 in
well under ten minutes.
"""
import logging

from integration_tests.utils import all_spin_objective, default_spec, run_optimization, two_spin_system
from pulseshaper.utils import setup_timestamp_logging


def main():

    setup_timestamp_logging()

    run, wall_clock = run_optimization('two_spins', two_spin_system(), all_spin_objective(2), default_spec(),
                                       seed=0, target=1.0e-3)

    for previous_stage, stage in zip(run.stages[:-1], run.stages[1:]):

        # The objective should barely move when a stage is refined onto a finer grid.
        if abs(stage.initial_infidelity - previous_stage.best_infidelity) > 0.05:

            logging.error(f'Refining onto {stage.time_step * 1e6:.4g} us moved the objective from '
                          f'{previous_stage.best_infidelity:.6g} to {stage.initial_infidelity:.6g}.')
            raise SystemExit(1)

    if run.best_infidelity >= 0.01 or wall_clock > 600.0:

        logging.error(f'The two spin synthesis reached {run.best_infidelity:.6g} in {wall_clock:.1f} s.')
        raise SystemExit(1)


if __name__ == "__main__":
    main()
