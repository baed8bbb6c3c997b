"""
Defines the base API for the pulse shaper task calculation backend.
"""
import logging


class ComputeResources:
    """An object which stores how many threads are available to
    a calculation worker.
    """

    @property
    def number_of_threads(self):
        """int: The number of threads available to a calculation worker."""
        return self._number_of_threads

    def __init__(self, number_of_threads=1):
        """Constructs a new ComputeResources object.

        Parameters
        ----------
        number_of_threads: int
            The number of threads available to a calculation worker.
        """

        self._number_of_threads = number_of_threads
        assert self._number_of_threads > 0

    def __getstate__(self):
        return {'number_of_threads': self.number_of_threads}

    def __setstate__(self, state):
        self._number_of_threads = state['number_of_threads']

    def __eq__(self, other):
        return isinstance(other, ComputeResources) and self.number_of_threads == other.number_of_threads

    def __ne__(self, other):
        return not self.__eq__(other)


class PulseShaperBackend:
    """An abstract base representation of a pulse shaper backend. A backend is
    responsible for distributing independent pieces of work (such as separate
    optimizer starts, or the subgroups of a subsystem averaged objective) over
    the available hardware.

    Notes
    -----
    All backend classes must inherit from this class, and must implement the
    `start`, `stop`, and `submit_task` method.
    """

    def __init__(self, number_of_workers=1, resources_per_worker=None):
        """Constructs a new PulseShaperBackend object.

        Parameters
        ----------
        number_of_workers : int
            The number of workers to run the calculations on. One worker
            can perform a single task (e.g. one optimizer start) at once.
        resources_per_worker: ComputeResources, optional
            The number of resources to request per worker.
        """

        self._number_of_workers = number_of_workers
        self._resources_per_worker = resources_per_worker or ComputeResources()

    def start(self):
        """Start the calculation backend."""
        pass

    def stop(self):
        """Stop the calculation backend."""
        pass

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        self.stop()

    def submit_task(self, function, *args, **kwargs):
        """Submit a task to the compute resources
        managed by this backend.

        Parameters
        ----------
        function: function
            The function to run.

        Returns
        -------
        Future
            Returns a future object which will eventually point to the results
            of the submitted task.
        """
        raise NotImplementedError()


def gather_in_order(backend, function, argument_list):
    """Evaluates `function` once per entry of `argument_list`, either
    in-process or through a backend, and returns the results in the
    order the arguments were given.

    Parameters
    ----------
    backend: PulseShaperBackend, optional
        The backend to distribute the calls over. If None, the calls
        are made serially in the current process.
    function: function
        The function to call.
    argument_list: list of tuple
        The positional arguments of each call.

    Returns
    -------
    list
        The return value of each call.
    """

    if backend is None:
        return [function(*arguments) for arguments in argument_list]

    logging.info(f'Submitting {len(argument_list)} tasks to the {type(backend).__name__} backend.')

    futures = [backend.submit_task(function, *arguments) for arguments in argument_list]
    return [future.result() for future in futures]
