"""
Helpers for turning the unit-bearing values found in configuration
documents into the plain SI floats used by the numerical code.

Values may either be pint strings such as ``"500 us"`` or ``"10 kHz"``,
`pulseshaper.unit.Quantity` objects, or bare numbers which are taken to
already be in SI base units.
"""
import math

import pint

from pulseshaper import unit
from pulseshaper.utils.exceptions import ConfigurationError


def _to_quantity(value, expected_unit):

    if isinstance(value, pint.Quantity):
        return value

    if isinstance(value, str):

        try:
            return unit.Quantity(value)
        except (pint.errors.UndefinedUnitError, pint.errors.DefinitionSyntaxError, ValueError) as e:
            raise ConfigurationError(f'{value} could not be parsed as a quantity: {e}')

    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value) * expected_unit

    raise ConfigurationError(f'{value} ({type(value)}) is not a valid quantity.')


def _convert(value, expected_unit):

    quantity = _to_quantity(value, expected_unit)

    try:
        return float(quantity.to(expected_unit).magnitude)
    except pint.errors.DimensionalityError:
        raise ConfigurationError(f'{value} does not have units compatible with {expected_unit}.')


def to_seconds(value):
    """Converts a time-like value into a float number of seconds.

    Parameters
    ----------
    value: str or float or unit.Quantity
        The value to convert.

    Returns
    -------
    float
    """
    return _convert(value, unit.second)


def to_hertz(value):
    """Converts a frequency-like value into a float number of Hz.

    Parameters
    ----------
    value: str or float or unit.Quantity
        The value to convert.

    Returns
    -------
    float
    """
    return _convert(value, unit.hertz)


def to_angular_frequency(value):
    """Converts a frequency-like value (given in cycles per second) into an
    angular frequency in rad/s.

    Parameters
    ----------
    value: str or float or unit.Quantity
        The value to convert.

    Returns
    -------
    float
    """
    return 2.0 * math.pi * to_hertz(value)
