"""
An API for defining coupled spin-1/2 systems, the benchmark lattices built
from them, and the drift Hamiltonians which they give rise to.

Notes
-----
Frequencies are exchanged with the outside world (config documents, the
constructor) in Hz, and are stored internally as angular frequencies in
rad/s. Scalar couplings are kept in Hz throughout.

The computational basis is ordered such that the first spin is the most
significant bit of a basis index, and a zero bit corresponds to the +1
eigenvalue of that spin's sigma_z.
"""
import json
import math

import numpy as np

from pulseshaper.utils.exceptions import AsymmetricCouplingError, ConfigurationError, SystemSizeError
from pulseshaper.utils.serialization import TypedBaseModel

#: The largest number of spins for which a 2^n state space will be materialized.
DEFAULT_MAXIMUM_SPINS = 14

#: The channel label assigned when a system does not declare any species.
DEFAULT_SPECIES = 'default'

SYSTEM_CONFIG_VERSION = 1


def check_explicit_size(number_of_spins, maximum_spins=None):
    """Raises a `SystemSizeError` if a 2^n object should not be
    built for a system of this size.

    Parameters
    ----------
    number_of_spins: int
        The number of spins in the system.
    maximum_spins: int, optional
        The cap to apply. Defaults to `DEFAULT_MAXIMUM_SPINS`.
    """
    maximum_spins = DEFAULT_MAXIMUM_SPINS if maximum_spins is None else maximum_spins

    if number_of_spins > maximum_spins:
        raise SystemSizeError(number_of_spins, maximum_spins)


def basis_spin_projections(number_of_spins):
    """Returns the sigma_z / 2 eigenvalue of every spin in every
    computational basis state.

    Parameters
    ----------
    number_of_spins: int
        The number of spins, q.

    Returns
    -------
    numpy.ndarray, shape=(2**q, q), dtype=float
        Entries of +1/2 (bit 0) or -1/2 (bit 1).
    """
    basis_indices = np.arange(2 ** number_of_spins)
    shifts = np.arange(number_of_spins - 1, -1, -1)

    bits = (basis_indices[:, None] >> shifts[None, :]) & 1
    return 0.5 - bits


class SpinSystem(TypedBaseModel):
    """An immutable description of a liquid-state spin system: the resonance
    frequency of every spin, the isotropic scalar couplings between them, and
    the rotating frame (channel) each spin is observed in.

    Examples
    --------
    A heteronuclear two spin system:

    >>> system = SpinSystem([0.0, 2000.0], [[0.0, 50.0], [50.0, 0.0]])
    >>> system.number_of_spins
    2
    """

    @property
    def number_of_spins(self):
        """int: The number of spins in the system."""
        return len(self._frequencies_hz)

    @property
    def frequencies_hz(self):
        """numpy.ndarray: The resonance frequency of each spin in Hz."""
        return self._frequencies_hz

    @property
    def frequencies(self):
        """numpy.ndarray: The angular resonance frequency of each spin in rad/s."""
        return self._frequencies

    @property
    def couplings(self):
        """numpy.ndarray: The symmetric table of scalar couplings in Hz, with a zero diagonal."""
        return self._couplings

    @property
    def species(self):
        """tuple of str: The channel label of each spin."""
        return self._species

    @property
    def frame_frequencies_hz(self):
        """dict of str and float: The rotating frame frequency of each channel in Hz."""
        return dict(self._frame_frequencies_hz)

    @property
    def frame_frequencies(self):
        """dict of str and float: The angular rotating frame frequency of each channel in rad/s."""
        return {label: 2.0 * math.pi * value for label, value in self._frame_frequencies_hz.items()}

    @property
    def channels(self):
        """list of str: The distinct channel labels, in order of first appearance."""
        return list(dict.fromkeys(self._species))

    def __init__(self, frequencies_hz, couplings_hz=None, species=None, frame_frequencies_hz=None):
        """Constructs a new SpinSystem object.

        Parameters
        ----------
        frequencies_hz: list of float
            The resonance frequency of each spin in Hz.
        couplings_hz: array_like of float, shape=(n, n), optional
            The symmetric scalar coupling table in Hz. If None, the spins
            are uncoupled.
        species: list of str, optional
            The channel label of each spin. If None, all spins share
            a single channel.
        frame_frequencies_hz: dict of str and float, optional
            The rotating frame frequency of each channel in Hz. Channels
            which are not listed have their frame placed at the mean of
            the lowest and highest frequency of the spins in that channel.
        """

        frequencies_hz = np.array(frequencies_hz, dtype=float).reshape(-1)
        number_of_spins = len(frequencies_hz)

        if number_of_spins < 1:
            raise ConfigurationError('A spin system must contain at least one spin.')

        if couplings_hz is None:
            couplings_hz = np.zeros((number_of_spins, number_of_spins))

        couplings_hz = np.array(couplings_hz, dtype=float)

        if couplings_hz.shape != (number_of_spins, number_of_spins):

            raise ConfigurationError(f'The coupling table has shape {couplings_hz.shape} but the system '
                                     f'contains {number_of_spins} spins.')

        if not np.allclose(np.diag(couplings_hz), 0.0):
            raise ConfigurationError('A spin cannot be coupled to itself (the coupling diagonal must be zero).')

        for first_index in range(number_of_spins):
            for second_index in range(first_index + 1, number_of_spins):

                forward_value = couplings_hz[first_index, second_index]
                reverse_value = couplings_hz[second_index, first_index]

                if forward_value != reverse_value:
                    raise AsymmetricCouplingError(first_index, second_index, forward_value, reverse_value)

        if species is None:
            species = [DEFAULT_SPECIES] * number_of_spins

        species = tuple(str(label) for label in species)

        if len(species) != number_of_spins:

            raise ConfigurationError(f'{len(species)} species labels were provided for a '
                                     f'system of {number_of_spins} spins.')

        frame_frequencies_hz = {} if frame_frequencies_hz is None else dict(frame_frequencies_hz)

        for label in frame_frequencies_hz:

            if label not in species:
                raise ConfigurationError(f'A frame frequency was given for the unknown species {label}.')

        for label in dict.fromkeys(species):

            if label in frame_frequencies_hz:

                frame_frequencies_hz[label] = float(frame_frequencies_hz[label])
                continue

            channel_frequencies = frequencies_hz[[index for index, value in enumerate(species) if value == label]]
            frame_frequencies_hz[label] = 0.5 * (channel_frequencies.min() + channel_frequencies.max())

        self._frequencies_hz = frequencies_hz
        self._couplings = couplings_hz
        self._species = species
        self._frame_frequencies_hz = frame_frequencies_hz

        self._freeze()

    def _freeze(self):

        self._frequencies = 2.0 * math.pi * self._frequencies_hz

        self._frequencies_hz.flags.writeable = False
        self._frequencies.flags.writeable = False
        self._couplings.flags.writeable = False

    def coupled_pairs(self):
        """Returns every coupled pair of spins.

        Returns
        -------
        list of tuple of int and int and float
            The (0-based) indices of each coupled pair, with the first index
            smaller than the second, and their coupling in Hz.
        """
        pairs = []

        for first_index in range(self.number_of_spins):
            for second_index in range(first_index + 1, self.number_of_spins):

                if self._couplings[first_index, second_index] == 0.0:
                    continue

                pairs.append((first_index, second_index, float(self._couplings[first_index, second_index])))

        return pairs

    def __getstate__(self):

        return {
            'frequencies_hz': self._frequencies_hz,
            'couplings_hz': self._couplings,
            'species': list(self._species),
            'frame_frequencies_hz': dict(self._frame_frequencies_hz)
        }

    def __setstate__(self, state):

        self._frequencies_hz = np.array(state['frequencies_hz'], dtype=float)
        self._couplings = np.array(state['couplings_hz'], dtype=float)
        self._species = tuple(state['species'])
        self._frame_frequencies_hz = {label: float(value) for label, value in state['frame_frequencies_hz'].items()}

        self._freeze()

    def __eq__(self, other):

        return (isinstance(other, SpinSystem) and
                np.array_equal(self._frequencies_hz, other.frequencies_hz) and
                np.array_equal(self._couplings, other.couplings) and
                self._species == other.species and
                self._frame_frequencies_hz == other.frame_frequencies_hz)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return f'<SpinSystem spins={self.number_of_spins} channels={self.channels}>'


class Subgroup(TypedBaseModel):
    """An ordered selection of distinct spins from a parent `SpinSystem`.

    Indices are stored 0-based.
    """

    @property
    def indices(self):
        """tuple of int: The 0-based indices of the spins in the subgroup."""
        return self._indices

    def __init__(self, indices):
        """Constructs a new Subgroup object.

        Parameters
        ----------
        indices: list of int
            The 0-based indices of the spins in the subgroup.
        """
        self._indices = tuple(int(index) for index in indices)
        self._validate()

    def _validate(self):

        if len(self._indices) == 0:
            raise ConfigurationError('A subgroup must contain at least one spin.')

        if len(set(self._indices)) != len(self._indices):
            raise ConfigurationError(f'The subgroup {self.one_based()} contains repeated spins.')

        if any(index < 0 for index in self._indices):
            raise ConfigurationError(f'The subgroup {self.one_based()} contains an out of range spin.')

    @classmethod
    def from_one_based(cls, indices):
        """Creates a subgroup from 1-based spin numbers, as used
        in config documents."""
        return cls([int(index) - 1 for index in indices])

    def one_based(self):
        """list of int: The 1-based spin numbers of the subgroup."""
        return [index + 1 for index in self._indices]

    def validate_for(self, system):
        """Checks that every index refers to a spin in `system`.

        Parameters
        ----------
        system: SpinSystem
            The parent system.
        """
        for index in self._indices:

            if index >= system.number_of_spins:

                raise ConfigurationError(f'Spin {index + 1} of the subgroup {self.one_based()} is out of range '
                                         f'for a system of {system.number_of_spins} spins.')

    def __len__(self):
        return len(self._indices)

    def __iter__(self):
        return iter(self._indices)

    def __getstate__(self):
        return {'indices': list(self._indices)}

    def __setstate__(self, state):

        self._indices = tuple(state['indices'])
        self._validate()

    def __hash__(self):
        return hash(self._indices)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self._indices == other.indices

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return f'<Subgroup spins={self.one_based()}>'


def _require(document, key):

    if key not in document:
        raise ConfigurationError(f'The spin system document is missing the required `{key}` field.')

    return document[key]


def parse_system_config(document):
    """Creates a `SpinSystem` from a spin system config document.

    The document has the keys ``n_spins``, ``frequencies_hz`` (one entry per
    spin), ``couplings_hz`` (a list of 1-based ``[i, j, J]`` triples), and
    optionally ``species`` (one label per spin) and ``frame_hz`` (a map of
    species label to frame frequency in Hz).

    Parameters
    ----------
    document: str or dict
        The JSON text, or already parsed dictionary, of the document.

    Returns
    -------
    SpinSystem
    """

    if isinstance(document, (str, bytes)):

        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f'The spin system document is not valid JSON: {e}')

    if not isinstance(document, dict):
        raise ConfigurationError('The spin system document must be a JSON object.')

    version = document.get('version', SYSTEM_CONFIG_VERSION)

    if version != SYSTEM_CONFIG_VERSION:
        raise ConfigurationError(f'Unsupported spin system document version {version}.')

    number_of_spins = _require(document, 'n_spins')
    frequencies_hz = _require(document, 'frequencies_hz')

    if not isinstance(number_of_spins, int) or number_of_spins < 1:
        raise ConfigurationError(f'`n_spins` must be a positive integer, not {number_of_spins}.')

    if len(frequencies_hz) != number_of_spins:

        raise ConfigurationError(f'{len(frequencies_hz)} frequencies were provided for '
                                 f'{number_of_spins} spins.')

    couplings_hz = np.zeros((number_of_spins, number_of_spins))
    assigned = set()

    for entry in document.get('couplings_hz', []):

        if len(entry) != 3:
            raise ConfigurationError(f'The coupling entry {entry} is not an [i, j, J] triple.')

        first_index, second_index, value = int(entry[0]) - 1, int(entry[1]) - 1, float(entry[2])

        if not (0 <= first_index < number_of_spins and 0 <= second_index < number_of_spins):
            raise ConfigurationError(f'The coupling entry {entry} refers to a spin which does not exist.')

        if first_index == second_index:
            raise ConfigurationError(f'The coupling entry {entry} couples a spin to itself.')

        if (first_index, second_index) in assigned:
            raise ConfigurationError(f'The coupling entry {entry} lists a pair which was already listed.')

        # A pair may be listed in both orders, but the two values must agree.
        if (second_index, first_index) in assigned:

            reverse_value = couplings_hz[second_index, first_index]

            if reverse_value != value:
                raise AsymmetricCouplingError(first_index, second_index, value, reverse_value)

        couplings_hz[first_index, second_index] = value
        couplings_hz[second_index, first_index] = value

        assigned.add((first_index, second_index))

    return SpinSystem(frequencies_hz,
                      couplings_hz,
                      document.get('species'),
                      document.get('frame_hz'))


def system_to_config(system):
    """Creates the config document which reproduces a `SpinSystem`
    through `parse_system_config`.

    Parameters
    ----------
    system: SpinSystem
        The system to describe.

    Returns
    -------
    dict
        The JSON-serializable config document.
    """
    return {
        'version': SYSTEM_CONFIG_VERSION,
        'n_spins': system.number_of_spins,
        'frequencies_hz': system.frequencies_hz.tolist(),
        'couplings_hz': [[first + 1, second + 1, value] for first, second, value in system.coupled_pairs()],
        'species': list(system.species),
        'frame_hz': system.frame_frequencies_hz
    }


class SpeciesBlock:
    """A contiguous block of lattice spins which belong to the same
    species (and so are observed in the same rotating frame)."""

    def __init__(self, label, number_of_spins, base_frequency_hz):
        """Constructs a new SpeciesBlock object.

        Parameters
        ----------
        label: str
            The species label, e.g. 'H'.
        number_of_spins: int
            The number of consecutive spins in the block.
        base_frequency_hz: float
            The resonance frequency, b_n, of the first spin in the block.
        """
        self.label = label
        self.number_of_spins = number_of_spins
        self.base_frequency_hz = base_frequency_hz

    @classmethod
    def parse(cls, text):
        """Parses a block from its `label:count:base_hz` string form."""

        try:
            label, count, base_frequency = text.split(':')
            return cls(label, int(count), float(base_frequency))

        except ValueError:
            raise ConfigurationError(f'{text} is not a valid species block - expected label:count:base_hz.')


def lattice_edges(rows, cols):
    """Returns the nearest neighbour pairs of a square grid.

    Spins are numbered row major, so that the spin in row `r` and column
    `c` has the (0-based) index `r * cols + c`.

    Returns
    -------
    list of tuple of int and int
    """
    edges = []

    for row in range(rows):
        for col in range(cols):

            index = row * cols + col

            if col + 1 < cols:
                edges.append((index, index + 1))
            if row + 1 < rows:
                edges.append((index, index + cols))

    return edges


def build_square_lattice(rows, cols, coupling_hz, base_frequency_hz, spacing_hz, species_plan=None):
    """Builds a square, two dimensional lattice of spins coupled only
    to their nearest neighbours.

    Within each species block the k-th spin (1-based) resonates at
    `b + s * (k - 1)` Hz, and the block's frame sits at the mean of the
    frequencies of its first and last spin.

    Parameters
    ----------
    rows: int
        The number of lattice rows.
    cols: int
        The number of lattice columns.
    coupling_hz: float
        The scalar coupling, J, between nearest neighbours in Hz.
    base_frequency_hz: float
        The base frequency, b, used when `species_plan` is None.
    spacing_hz: float
        The frequency spacing, s, between consecutive spins in Hz.
    species_plan: list of SpeciesBlock, optional
        Contiguous species blocks, in lattice order. If None a single
        channel covering every spin is used.

    Returns
    -------
    SpinSystem
    """

    if rows < 1 or cols < 1:
        raise ConfigurationError(f'A lattice must have at least one row and column, not {rows}x{cols}.')

    number_of_spins = rows * cols

    if species_plan is None:
        species_plan = [SpeciesBlock(DEFAULT_SPECIES, number_of_spins, base_frequency_hz)]

    if sum(block.number_of_spins for block in species_plan) != number_of_spins:

        raise ConfigurationError(f'The species blocks cover {sum(b.number_of_spins for b in species_plan)} '
                                 f'spins but the lattice contains {number_of_spins}.')

    if len(set(block.label for block in species_plan)) != len(species_plan):
        raise ConfigurationError('Each species may only appear in one contiguous block.')

    frequencies_hz = []
    species = []
    frame_frequencies_hz = {}

    for block in species_plan:

        block_frequencies = [block.base_frequency_hz + spacing_hz * index for index in range(block.number_of_spins)]

        frequencies_hz.extend(block_frequencies)
        species.extend([block.label] * block.number_of_spins)

        frame_frequencies_hz[block.label] = 0.5 * (block_frequencies[0] + block_frequencies[-1])

    couplings_hz = np.zeros((number_of_spins, number_of_spins))

    for first_index, second_index in lattice_edges(rows, cols):

        couplings_hz[first_index, second_index] = coupling_hz
        couplings_hz[second_index, first_index] = coupling_hz

    return SpinSystem(frequencies_hz, couplings_hz, species, frame_frequencies_hz)


def default_tiling(rows, cols):
    """Divides a square lattice into the subgroups used for subsystem
    averaged optimization.

    The lattice is covered by non-overlapping 2x2 blocks (smaller blocks
    along odd edges), and every nearest neighbour coupling which crosses a
    block boundary gets its own two spin subgroup.

    Parameters
    ----------
    rows: int
        The number of lattice rows.
    cols: int
        The number of lattice columns.

    Returns
    -------
    list of Subgroup
    """
    subgroups = []
    block_of_spin = {}

    for block_row in range(0, rows, 2):
        for block_col in range(0, cols, 2):

            indices = [row * cols + col
                       for row in range(block_row, min(block_row + 2, rows))
                       for col in range(block_col, min(block_col + 2, cols))]

            for index in indices:
                block_of_spin[index] = len(subgroups)

            subgroups.append(Subgroup(indices))

    for first_index, second_index in lattice_edges(rows, cols):

        if block_of_spin[first_index] == block_of_spin[second_index]:
            continue

        subgroups.append(Subgroup([first_index, second_index]))

    return subgroups


def restrict_to_subgroup(system, subgroup):
    """Creates the system seen by a subgroup of spins: their frequencies,
    frames and mutual couplings are kept while every coupling to a spin
    outside of the subgroup is dropped.

    Parameters
    ----------
    system: SpinSystem
        The parent system.
    subgroup: Subgroup
        The spins to keep, in the order they should appear.

    Returns
    -------
    SpinSystem
    """
    subgroup.validate_for(system)

    indices = list(subgroup.indices)
    species = [system.species[index] for index in indices]

    parent_frames = system.frame_frequencies_hz
    frame_frequencies_hz = {label: parent_frames[label] for label in dict.fromkeys(species)}

    return SpinSystem(system.frequencies_hz[indices],
                      system.couplings[np.ix_(indices, indices)],
                      species,
                      frame_frequencies_hz)


def frame_offsets(system):
    """Returns the offset of each spin from the rotating frame of its
    channel.

    Parameters
    ----------
    system: SpinSystem
        The system of interest.

    Returns
    -------
    numpy.ndarray
        The offsets, ω_k - ω_R, in rad/s.
    """
    frame_frequencies = system.frame_frequencies
    frames = np.array([frame_frequencies[label] for label in system.species])

    return system.frequencies - frames


def drift_diagonal(system, maximum_spins=None):
    """Returns the diagonal of the drift Hamiltonian, H0 / hbar, in the
    computational basis.

    Each spin contributes its frame offset times its sigma_z / 2 eigenvalue,
    and each coupled pair contributes pi * J * sigma_z sigma_z / 4.

    Parameters
    ----------
    system: SpinSystem
        The system of interest.
    maximum_spins: int, optional
        The explicit state size cap to apply.

    Returns
    -------
    numpy.ndarray, shape=(2**n,), dtype=float
        The diagonal in rad/s.
    """
    check_explicit_size(system.number_of_spins, maximum_spins)

    projections = basis_spin_projections(system.number_of_spins)

    offset_terms = projections @ frame_offsets(system)

    # The double sum visits every pair twice.
    coupling_terms = 0.5 * np.einsum('ik,kl,il->i', projections, np.pi * system.couplings, projections)

    return offset_terms + coupling_terms


def scale_frame_offsets(system, factor):
    """Creates a copy of a system in which every spin's offset from its
    frame has been multiplied by `factor`. Couplings are unchanged.

    Parameters
    ----------
    system: SpinSystem
        The system to scale.
    factor: float
        The scale factor, e.g. 1 + ε.

    Returns
    -------
    SpinSystem
    """
    frames = system.frame_frequencies_hz
    frame_per_spin = np.array([frames[label] for label in system.species])

    frequencies_hz = frame_per_spin + factor * (system.frequencies_hz - frame_per_spin)
    return SpinSystem(frequencies_hz, system.couplings, system.species, frames)


def shift_frequencies(system, shift_hz):
    """Creates a copy of a system in which every spin's resonance frequency
    has been shifted by `shift_hz`, while the frames stay put.

    Parameters
    ----------
    system: SpinSystem
        The system to shift.
    shift_hz: float
        The shift in Hz.

    Returns
    -------
    SpinSystem
    """
    return SpinSystem(system.frequencies_hz + shift_hz,
                      system.couplings,
                      system.species,
                      system.frame_frequencies_hz)
