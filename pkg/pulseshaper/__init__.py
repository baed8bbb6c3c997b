"""
pulseshaper
Shaped control pulse synthesis for coupled spin-qubit systems.
"""

# Set up pint.
from pint import UnitRegistry
unit = UnitRegistry()

__version__ = '0.1.0'
