"""
The run record written alongside the artifacts of every optimization.
"""
import datetime

from pulseshaper.utils.serialization import TypedBaseModel


def utc_timestamp():
    """str: The current UTC time in ISO 8601 form."""
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


class RunRecord(TypedBaseModel):
    """A self contained account of an optimization run: verbatim copies of
    every input config, the seed and schedule it ran with, how each stage
    progressed, the final infidelities and where its artifacts were written.
    """

    def __init__(self, configs=None, seed=None, schedule=None):
        """Constructs a new RunRecord object.

        Parameters
        ----------
        configs: dict of str and dict
            The parsed input config documents, keyed by their role
            (`system`, `goal`, `pulse`, `optimization`).
        seed: int
            The seed all randomness was derived from.
        schedule: AnnealSchedule
            The annealing schedule.
        """

        self.configs = configs or {}
        self.seed = seed
        self.schedule = schedule

        self.stages = []
        self.start_infidelities = []
        self.evaluations = 0

        self.infidelities = {}
        self.target = None
        self.target_reached = False

        self.artifacts = {}
        self.exceptions = []

        self.started = utc_timestamp()
        self.finished = None

    def record_run(self, run):
        """Copies the progress of an `OptimizationRun` into this record."""

        self.stages = run.stages
        self.start_infidelities = run.start_infidelities
        self.evaluations = run.total_evaluations

    def finish(self):
        """Stamps the time the run finished."""
        self.finished = utc_timestamp()

    def save(self, file_path):
        """Writes this record to a JSON file."""

        with open(file_path, 'w') as file:
            file.write(self.json(indent=2))

    @classmethod
    def load(cls, file_path):
        """Reads a record written by `save`."""

        with open(file_path) as file:
            return cls.parse_json(file.read())

    def __getstate__(self):

        return {
            'configs': self.configs,
            'seed': self.seed,
            'schedule': self.schedule,
            'stages': self.stages,
            'start_infidelities': self.start_infidelities,
            'evaluations': self.evaluations,
            'infidelities': self.infidelities,
            'target': self.target,
            'target_reached': self.target_reached,
            'artifacts': self.artifacts,
            'exceptions': self.exceptions,
            'started': self.started,
            'finished': self.finished
        }

    def __setstate__(self, state):

        self.configs = state['configs']
        self.seed = state['seed']
        self.schedule = state['schedule']
        self.stages = state['stages']
        self.start_infidelities = state['start_infidelities']
        self.evaluations = state['evaluations']
        self.infidelities = state['infidelities']
        self.target = state['target']
        self.target_reached = state['target_reached']
        self.artifacts = state['artifacts']
        self.exceptions = state['exceptions']
        self.started = state['started']
        self.finished = state['finished']

    def __eq__(self, other):
        return isinstance(other, RunRecord) and self.__getstate__() == other.__getstate__()

    def __ne__(self, other):
        return not self.__eq__(other)
