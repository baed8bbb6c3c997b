"""
Units tests for pulseshaper.records
"""
import os
import tempfile

from pulseshaper.optimizer import AnnealSchedule, StopReason
from pulseshaper.optimizer.runs import StageResult
from pulseshaper.records import RunRecord
from pulseshaper.utils.exceptions import ConfigurationError, PulseShaperException


def _dummy_record():

    record = RunRecord({'system': {'version': 1, 'n_spins': 1, 'frequencies_hz': [0.0]}},
                       seed=3,
                       schedule=AnnealSchedule([2.0e-6, 1.0e-6]))

    record.stages = [
        StageResult(2.0e-6, 0.4, 0.01, [0.4, 0.1, 0.01], StopReason.Tolerance, 0.5),
        StageResult(1.0e-6, 0.011, 0.0009, [0.011, 0.0009], StopReason.Target, 0.3)
    ]

    record.start_infidelities = [0.0009, 0.02]
    record.evaluations = 5

    record.infidelities = {'plain': 0.0009, 'robust': 0.0009}
    record.target = 1.0e-3
    record.target_reached = True

    record.finish()
    return record


def test_record_round_trip():

    record = _dummy_record()

    with tempfile.TemporaryDirectory() as directory:

        file_path = os.path.join(directory, 'run_record.json')
        record.save(file_path)

        recreated = RunRecord.load(file_path)

    assert recreated == record

    assert recreated.schedule == AnnealSchedule([2.0e-6, 1.0e-6])
    assert recreated.stages[1].stop_reason == StopReason.Target
    assert recreated.configs['system']['n_spins'] == 1


def test_record_exceptions():

    record = _dummy_record()
    record.exceptions.append(PulseShaperException.from_exception(ConfigurationError('bad config'), 'out'))

    recreated = RunRecord.parse_json(record.json())

    assert len(recreated.exceptions) == 1
    assert recreated.exceptions[0].message == 'ConfigurationError: bad config'
    assert recreated.exceptions[0].directory == 'out'


def test_record_timestamps():

    record = RunRecord()

    assert record.started is not None
    assert record.finished is None

    record.finish()
    assert record.finished >= record.started
