"""Per-resource-block fast fading: distance-dependent Rician channels.

Links short enough to be deterministically line-of-sight (up to 18 m)
fade very little: the Rician K factor there is 32 (~15 dB). Beyond that
the K factor decays exponentially with distance, calibrated so that at
36 m - the far end of the line-of-sight transition - it equals the
LOS/NLOS power ratio implied by the LOS probability model at that
distance. A floor keeps the channel from degenerating numerically; far
links are effectively Rayleigh.

Channel coefficients are normalised to unit mean power:

    h = sqrt(K/(K+1)) e^{j phi} + sqrt(1/(K+1)) (x + j y)/sqrt(2),

with x, y standard normal and phi the deterministic phase of the direct
component, fixed per link for a whole run. Fading is independent across
resource blocks and transmission intervals.

Draws are made from counter-based streams keyed by (seed, interval), so
any interval's channels can be regenerated independently of history.
"""

from __future__ import annotations

import numpy as np

from .propagation import los_probability

K_FULL_LOS = 32.0  # Rician K factor of guaranteed-LOS links (~15 dB)
K_FLOOR = 0.1  # minimum K factor; far links are essentially Rayleigh
FULL_LOS_DISTANCE_M = 18.0  # LOS is certain up to here

# Decay length of K beyond the full-LOS distance, set so that K at 36 m
# equals the LOS-to-NLOS power ratio p/(1-p) of the LOS probability there.
_P36 = float(los_probability(2.0 * FULL_LOS_DISTANCE_M))
_K36 = _P36 / (1.0 - _P36)
K_DECAY_LENGTH_M = FULL_LOS_DISTANCE_M / np.log(K_FULL_LOS / _K36)


def k_factor(d3d_m):
    """Rician K factor (linear) as a function of link distance."""
    d = np.asarray(d3d_m, dtype=float)
    decayed = K_FULL_LOS * np.exp(-(d - FULL_LOS_DISTANCE_M) / K_DECAY_LENGTH_M)
    return np.where(d <= FULL_LOS_DISTANCE_M, K_FULL_LOS, np.maximum(K_FLOOR, decayed))


def los_phases(rng: np.random.Generator, shape) -> np.ndarray:
    """Deterministic direct-path phases, one per link, uniform on [0, 2 pi)."""
    return rng.uniform(0.0, 2.0 * np.pi, size=shape)


def rician_channel(k, los_phase, rng: np.random.Generator) -> np.ndarray:
    """Unit-mean-power Rician coefficients; ``k`` and ``los_phase`` broadcast."""
    k = np.asarray(k, dtype=float)
    phi = np.asarray(los_phase, dtype=float)
    shape = np.broadcast_shapes(k.shape, phi.shape)
    k = np.broadcast_to(k, shape)
    phi = np.broadcast_to(phi, shape)
    direct = np.sqrt(k / (k + 1.0)) * np.exp(1j * phi)
    scatter = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return direct + np.sqrt(1.0 / (k + 1.0)) * scatter


def interval_rng(seed: int, interval: int) -> np.random.Generator:
    """Counter-based stream for one transmission interval of one run."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, interval], dtype=np.uint64)))
