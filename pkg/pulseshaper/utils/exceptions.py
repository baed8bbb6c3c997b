"""
A collection of commonly raised python exceptions.
"""
from pulseshaper.utils.serialization import TypedBaseModel


class PulseShaperException(TypedBaseModel):
    """A json serializable object wrapper containing information about
    a failed calculation, such as an optimization which raised part way
    through a run.
    """

    def __init__(self, directory='', message=''):
        """Constructs a new PulseShaperException object.

        Parameters
        ----------
        directory: str
            The directory in which this exception was raised.
        message:
            Information about the raised exception.
        """

        self.directory = directory
        self.message = message

    @classmethod
    def from_exception(cls, exception, directory=''):
        """Wraps a raised python exception.

        Parameters
        ----------
        exception: Exception
            The exception to wrap.
        directory: str
            The directory in which the exception was raised.

        Returns
        -------
        PulseShaperException
        """
        return cls(directory, f'{type(exception).__name__}: {exception}')

    def __getstate__(self):

        return {
            'directory': self.directory,
            'message': self.message
        }

    def __setstate__(self, state):

        self.directory = state['directory']
        self.message = state['message']

    def __eq__(self, other):
        return (isinstance(other, PulseShaperException) and
                self.directory == other.directory and
                self.message == other.message)

    def __ne__(self, other):
        return not self.__eq__(other)


class ConfigurationError(ValueError):
    """An exception raised when a configuration document is missing
    a field, or contains a value which cannot be interpreted."""


class AsymmetricCouplingError(ConfigurationError):
    """An exception which is raised when a scalar coupling table is
    not symmetric."""

    def __init__(self, first_index, second_index, forward_value, reverse_value):

        super().__init__(f'The coupling table is not symmetric: J[{first_index + 1}][{second_index + 1}] = '
                         f'{forward_value} Hz but J[{second_index + 1}][{first_index + 1}] = {reverse_value} Hz.')


class SystemSizeError(ValueError):
    """An exception which is raised when an operation would need to
    materialize a 2^n state space for more spins than allowed."""

    def __init__(self, number_of_spins, maximum_spins):

        super().__init__(f'A system of {number_of_spins} spins exceeds the explicit state space limit of '
                         f'{maximum_spins} spins. Larger systems must be evaluated through subgroups.')


class ParameterCountError(ValueError):
    """An exception which is raised when a flat parameter vector does
    not have the length required by the number of sine terms."""

    def __init__(self, expected_length, actual_length):

        super().__init__(f'Expected a parameter vector of length {expected_length}, '
                         f'but one of length {actual_length} was provided.')


class DimensionMismatchError(ValueError):
    """An exception which is raised when two operators or a state and an
    operator do not share the same dimension."""


class NonUnitaryError(ValueError):
    """An exception which is raised when a matrix which should be a
    unitary is not one within tolerance."""


class NonFiniteObjectiveError(ArithmeticError, ValueError):
    """An exception which is raised when an objective function returns
    a value which is either infinite or NaN."""

    def __init__(self, value, vertex):

        super().__init__(f'The objective function returned a non-finite value ({value}) '
                         f'at the vertex {list(vertex)}.')
