"""
Units tests for pulseshaper.utils.exceptions
"""
import pytest

from pulseshaper.utils import exceptions


def test_configuration_exceptions():
    """Test the errors raised by malformed documents."""

    with pytest.raises(ValueError):
        raise exceptions.ConfigurationError('dummy_message')

    error = exceptions.AsymmetricCouplingError(0, 2, 50.0, 45.0)

    assert isinstance(error, exceptions.ConfigurationError)
    assert 'J[1][3] = 50.0 Hz' in str(error)


def test_numerical_exceptions():

    assert '14 spins' in str(exceptions.SystemSizeError(16, 14))
    assert 'length 63' in str(exceptions.ParameterCountError(63, 62))

    error = exceptions.NonFiniteObjectiveError(float('nan'), [1.0, 2.0])
    assert isinstance(error, ArithmeticError)


def test_pulse_shaper_exceptions():
    """Test json based exceptions."""

    shaper_exception = exceptions.PulseShaperException(directory='dummy_dir',
                                                       message='dummy_message')

    exception_state = shaper_exception.__getstate__()

    assert len(exception_state) == 2
    assert 'directory' in exception_state and 'message' in exception_state

    recreated_exception = exceptions.PulseShaperException()
    recreated_exception.__setstate__(exception_state)

    assert shaper_exception == recreated_exception

    wrapped_exception = exceptions.PulseShaperException.from_exception(KeyError('seed'), 'out')

    assert wrapped_exception.directory == 'out'
    assert wrapped_exception.message.startswith('KeyError')
