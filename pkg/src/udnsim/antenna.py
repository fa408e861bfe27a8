"""Antennas: vertical dipole-array element pattern and horizontal beamforming.

Each site carries vertical four-element half-wave dipole arrays. The
per-element gain is the dipole pattern plus a fixed maximum gain; the
vertical array factor applies amplitude tapering and a progressive phase
shift that produces a fixed electrical downtilt:

    G(phi, theta) = G_M + G_H(phi) + G_V(theta) + AF_V(theta),
    G_H(phi)  = 0,
    G_V(theta) = 20 log10( cos((pi/2) sin(theta)) / cos(theta) ),
    AF_V(theta) = 20 log10 | sum_n a(n) e^{j (n-1) (2 pi d_eps (-sin(theta)) + delta)} |,

with theta the depression angle towards the receiver (positive below the
horizon). The excitation is used exactly as configured - no
renormalisation - so the peak array factor is 20 log10(sum a(n)).

Horizontal beamforming uses the LTE rank-1 codebooks (2-Tx: four QPSK
co-phasing entries; 4-Tx: first columns of the sixteen Householder
matrices). Entries are unit-norm, so the total radiated power is
invariant under beam selection, and the achievable array gain factor
|w . h|^2 lies in [0, N].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PATTERN_FLOOR_DB = -40.0  # numerical floor for the dB pattern terms


@dataclass(frozen=True)
class DipoleArrayConfig:
    """Vertical dipole-array parameters (typical optimised configuration)."""

    n_elements_vertical: int = 4
    max_element_gain_dbi: float = 2.15
    spacing_wavelengths: float = 0.6
    excitation: tuple = (0.97, 1.077, 1.077, 0.86)  # normalised element voltages
    phase_increment_rad: float = 1.658
    n_horizontal: int = 1  # beamforming array size: 1, 2 or 4

    def __post_init__(self):
        if len(self.excitation) != self.n_elements_vertical:
            raise ValueError("excitation length must equal n_elements_vertical")
        if self.n_horizontal not in (1, 2, 4):
            raise ValueError("n_horizontal must be 1, 2 or 4")


def element_gain_db(phi_rad, theta_rad, cfg: DipoleArrayConfig = DipoleArrayConfig()):
    """Single-element gain: max gain + horizontal offset (0) + vertical dipole offset."""
    theta = np.asarray(theta_rad, dtype=float)
    cos_t = np.cos(theta)
    num = np.cos(np.pi / 2.0 * np.sin(theta))
    ratio = np.divide(num, cos_t, out=np.zeros_like(cos_t), where=np.abs(cos_t) > 1e-12)
    with np.errstate(divide="ignore"):
        offset = 20.0 * np.log10(np.abs(ratio))
    offset = np.maximum(offset, PATTERN_FLOOR_DB)
    return cfg.max_element_gain_dbi + 0.0 + offset


def vertical_array_factor_db(theta_rad, cfg: DipoleArrayConfig = DipoleArrayConfig()):
    """Vertical array factor in dB for the configured excitation and phasing."""
    theta = np.asarray(theta_rad, dtype=float)
    n = np.arange(cfg.n_elements_vertical).reshape((-1,) + (1,) * theta.ndim)
    a = np.asarray(cfg.excitation, dtype=float).reshape(n.shape)
    phase = n * (2.0 * np.pi * cfg.spacing_wavelengths * (-np.sin(theta)) + cfg.phase_increment_rad)
    total = np.abs(np.sum(a * np.exp(1j * phase), axis=0))
    with np.errstate(divide="ignore"):
        af = 20.0 * np.log10(total)
    return np.maximum(af, PATTERN_FLOOR_DB)


def bs_antenna_gain_db(theta_rad, cfg: DipoleArrayConfig = DipoleArrayConfig()):
    """Combined element + vertical-array gain towards depression angle theta."""
    return element_gain_db(0.0, theta_rad, cfg) + vertical_array_factor_db(theta_rad, cfg)


# ---------------------------------------------------------------------------
# LTE rank-1 codebooks for horizontal beamforming
# ---------------------------------------------------------------------------

# 2-Tx rank-1 entries: [1, q]/sqrt(2) with QPSK co-phasing q.
CODEBOOK_2TX = np.array(
    [[1.0, 1.0], [1.0, -1.0], [1.0, 1.0j], [1.0, -1.0j]], dtype=complex
) / np.sqrt(2.0)

# 4-Tx rank-1 entries: first columns of the Householder matrices
# W_n = I - 2 u_n u_n^H / (u_n^H u_n) built from the sixteen seed vectors.
_SQ2 = np.sqrt(2.0)
_U_VECTORS = np.array(
    [
        [1, -1, -1, -1],
        [1, -1j, 1, 1j],
        [1, 1, -1, 1],
        [1, 1j, 1, -1j],
        [1, (-1 - 1j) / _SQ2, -1j, (1 - 1j) / _SQ2],
        [1, (1 - 1j) / _SQ2, 1j, (-1 - 1j) / _SQ2],
        [1, (1 + 1j) / _SQ2, -1j, (-1 + 1j) / _SQ2],
        [1, (-1 + 1j) / _SQ2, 1j, (1 + 1j) / _SQ2],
        [1, -1, 1, 1],
        [1, -1j, -1, -1j],
        [1, 1, 1, -1],
        [1, 1j, -1, 1j],
        [1, -1, -1, 1],
        [1, -1, 1, -1],
        [1, 1, -1, -1],
        [1, 1, 1, 1],
    ],
    dtype=complex,
)


def _householder_first_columns(u_vectors):
    cols = []
    for u in u_vectors:
        u = u.reshape(-1, 1)
        w = np.eye(4, dtype=complex) - 2.0 * (u @ u.conj().T) / (u.conj().T @ u)
        cols.append(w[:, 0])
    return np.array(cols)


CODEBOOK_4TX = _householder_first_columns(_U_VECTORS)

_CODEBOOKS = {
    1: np.array([[1.0 + 0.0j]]),
    2: CODEBOOK_2TX,
    4: CODEBOOK_4TX,
}


def codebook(n_antennas: int) -> np.ndarray:
    """Rank-1 precoder codebook for 1, 2 or 4 transmit antennas; (entries, n)."""
    try:
        return _CODEBOOKS[n_antennas]
    except KeyError:
        raise ValueError("codebooks exist for 1, 2 or 4 antennas") from None


@dataclass(frozen=True)
class BeamWeights:
    """A selected codebook entry; per-antenna weights share equal magnitude."""

    codebook_index: int
    weights: np.ndarray = field(compare=False)

    @property
    def n_antennas(self) -> int:
        return self.weights.shape[0]


def select_beam(channel: np.ndarray, n_antennas: int) -> BeamWeights:
    """Pick the codebook entry maximising received power |w . h|^2.

    ``channel`` holds per-antenna complex coefficients (or just phase
    factors, which is enough since all entries are unit-norm).
    """
    book = codebook(n_antennas)
    h = np.asarray(channel, dtype=complex).reshape(-1)
    gains = np.abs(book @ h) ** 2
    idx = int(np.argmax(gains))
    return BeamWeights(codebook_index=idx, weights=book[idx])


def select_beams_from_phases(sin_phi: np.ndarray, n_antennas: int, spacing_wavelengths: float = 0.6):
    """Vectorised beam selection from geometry: steering phases per link.

    ``sin_phi`` is sin of the azimuth from array broadside for each link;
    element i of the horizontal array adds phase 2 pi d i sin(phi).
    Returns (codebook indices, beam gain factors |w . h|^2).
    """
    book = codebook(n_antennas)
    h = steering_vectors(sin_phi, n_antennas, spacing_wavelengths)
    gains = np.abs(h @ book.T) ** 2  # (..., entries)
    idx = np.argmax(gains, axis=-1)
    return idx, np.take_along_axis(gains, idx[..., None], axis=-1)[..., 0]


def steering_vectors(sin_phi, n_antennas: int, spacing_wavelengths: float = 0.6):
    """Unit-magnitude per-antenna phase factors for given sin(azimuth)."""
    sin_phi = np.asarray(sin_phi, dtype=float)
    i = np.arange(n_antennas).reshape((1,) * sin_phi.ndim + (-1,))
    return np.exp(1j * 2.0 * np.pi * spacing_wavelengths * i * sin_phi[..., None])


def beam_gain_factor(weights: np.ndarray, sin_phi, spacing_wavelengths: float = 0.6):
    """|w . h|^2 of given weights towards direction(s) sin_phi; in [0, N]."""
    w = np.asarray(weights, dtype=complex)
    h = steering_vectors(sin_phi, w.shape[-1], spacing_wavelengths)
    return np.abs(h @ w) ** 2
