"""
Helpers for building the random systems, pulses and brute force
operators used throughout the unit tests.
"""
import functools
import math

import numpy as np
from scipy import linalg

from pulseshaper.pulses import FourierParams, PulseSpec, sample_pulse
from pulseshaper.spins import SpinSystem

_SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)


def random_spin_system(number_of_spins, generator, offset_range_hz=2000.0, maximum_coupling_hz=100.0):
    """Creates a single channel system with random offsets and a random,
    fully connected coupling table."""

    frequencies_hz = generator.uniform(-offset_range_hz, offset_range_hz, number_of_spins)

    couplings_hz = np.triu(generator.uniform(5.0, maximum_coupling_hz, (number_of_spins, number_of_spins)), 1)
    couplings_hz = couplings_hz + couplings_hz.T

    return SpinSystem(frequencies_hz, couplings_hz, frame_frequencies_hz={'default': 0.0})


def smooth_random_params(generator, spec, amplitude_terms=2, phase_terms=2):
    """Draws sine series parameters which oscillate at most three times
    over the pulse."""

    maximum_frequency = 6.0 * math.pi / spec.duration

    amplitude_triples = np.column_stack([
        generator.uniform(0.2, 0.5, amplitude_terms) * spec.max_amplitude,
        generator.uniform(0.0, maximum_frequency, amplitude_terms),
        generator.uniform(0.0, 2.0 * math.pi, amplitude_terms)
    ])

    phase_triples = np.column_stack([
        generator.uniform(0.0, 1.0, phase_terms),
        generator.uniform(0.0, maximum_frequency, phase_terms),
        generator.uniform(0.0, 2.0 * math.pi, phase_terms)
    ])

    return FourierParams(amplitude_triples, phase_triples)


def smooth_random_pulse(generator, duration=200.0e-6, max_amplitude=2.0 * math.pi * 5.0e3, time_step=1.0e-6):
    """Samples a smooth random pulse."""

    spec = PulseSpec(duration, max_amplitude, time_step)
    return sample_pulse(smooth_random_params(generator, spec), spec)


def embedded_sigma_z(spin_index, number_of_spins):
    """Builds sigma_z acting on a single spin of a larger system."""

    factors = [_SIGMA_Z if index == spin_index else np.eye(2) for index in range(number_of_spins)]
    return functools.reduce(np.kron, factors, np.eye(1, dtype=complex))


def brute_force_drift(system):
    """Assembles the drift Hamiltonian from explicit Pauli tensor products."""

    number_of_spins = system.number_of_spins
    frames = system.frame_frequencies

    hamiltonian = np.zeros((2 ** number_of_spins, 2 ** number_of_spins), dtype=complex)

    for index in range(number_of_spins):

        offset = system.frequencies[index] - frames[system.species[index]]
        hamiltonian += 0.5 * offset * embedded_sigma_z(index, number_of_spins)

    for first_index, second_index, coupling in system.coupled_pairs():

        hamiltonian += (0.25 * math.pi * coupling *
                        embedded_sigma_z(first_index, number_of_spins) @
                        embedded_sigma_z(second_index, number_of_spins))

    return hamiltonian


def dense_evolution(hamiltonian, duration):
    """exp(-i H t) by dense matrix exponentiation."""
    return linalg.expm(-1.0j * hamiltonian * duration)
