"""Propagation: UMi path gain, smoothed LOS probability, correlated shadowing.

Path gain blends the 3GPP TR 36.814 urban-micro LOS and NLOS losses with
the LOS probability, all in dB domain:

    G_P(d) = P_l(d) * G_Pl(d) + (1 - P_l(d)) * G_Pn(d)

with d the 3D transmitter-receiver distance. The LOS probability

    P_l(d) = min(18/d, 1) * (1 - exp(-d/36)) + exp(-d/36)

equals 1 up to 18 m and has a slope kink there; a cubic Hermite segment
over 18..22 m (within the 14..22 m smoothing window, where the curve is
identically 1 below 18 m) removes the kink while keeping the function
equal to 1 for d <= 18 m and C1 everywhere.

Shadow fading is log-normal with 6 dB standard deviation, spatially
correlated with an exponential autocorrelation exp(-delta/20 m)
(Gudmundson model) and a 0.5 inter-site correlation realised by mixing a
common field with per-site independent fields.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPLINE_WINDOW_M = (14.0, 22.0)  # LOS-probability smoothing window
_SPLINE_KNOT_M = 18.0           # interior knot: below this the curve is 1
_MIN_DISTANCE_M = 0.5           # matches the UE-site exclusion radius


def _raw_los_probability(d_m):
    d = np.maximum(np.asarray(d_m, dtype=float), _MIN_DISTANCE_M)
    decay = np.exp(-d / 36.0)
    return np.minimum(18.0 / d, 1.0) * (1.0 - decay) + decay


# Hermite boundary data at the right edge of the smoothing window, taken
# from the closed form so the spline joins it with matching value/slope.
_D1 = SPLINE_WINDOW_M[1]
_P1 = float(_raw_los_probability(_D1))
_M1 = float(
    -18.0 / _D1 ** 2 * (1.0 - np.exp(-_D1 / 36.0))
    + (18.0 / _D1 - 1.0) * np.exp(-_D1 / 36.0) / 36.0
)


def los_probability(d_m):
    """Smoothed LOS probability; equals 1 for d <= 18 m, C1 everywhere.

    Below the interior knot the closed form is identically 1 (so the
    14..18 m part of the smoothing window needs no correction); the
    18..22 m segment is a monotone cubic Hermite between (18, 1, slope 0)
    and the closed form's value/slope at 22 m.
    """
    scalar = np.isscalar(d_m) or np.ndim(d_m) == 0
    d = np.maximum(np.atleast_1d(np.asarray(d_m, dtype=float)), _MIN_DISTANCE_M)
    out = np.where(d <= _SPLINE_KNOT_M, 1.0, _raw_los_probability(d))
    seg = (d > _SPLINE_KNOT_M) & (d < _D1)
    if np.any(seg):
        t = (d[seg] - _SPLINE_KNOT_M) / (_D1 - _SPLINE_KNOT_M)
        h01 = t * t * (3.0 - 2.0 * t)
        h11 = t * t * (t - 1.0)
        out[seg] = 1.0 + h01 * (_P1 - 1.0) + h11 * (_D1 - _SPLINE_KNOT_M) * _M1
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class PathGainModel:
    """UMi LOS/NLOS loss coefficients: loss = a*log10(d) + b + c*log10(f_GHz)."""

    carrier_ghz: float
    los_coeffs: tuple = (22.0, 28.0, 20.0)
    nlos_coeffs: tuple = (36.7, 22.7, 26.0)
    smoothing_window_m: tuple = SPLINE_WINDOW_M

    def los_loss_db(self, d_m):
        a, b, c = self.los_coeffs
        d = np.maximum(np.asarray(d_m, dtype=float), _MIN_DISTANCE_M)
        return a * np.log10(d) + b + c * np.log10(self.carrier_ghz)

    def nlos_loss_db(self, d_m):
        a, b, c = self.nlos_coeffs
        d = np.maximum(np.asarray(d_m, dtype=float), _MIN_DISTANCE_M)
        return a * np.log10(d) + b + c * np.log10(self.carrier_ghz)


def path_gain_db(d_3d_m, model: PathGainModel):
    """Expected path gain (negative dB): LOS/NLOS blend weighted by P_l."""
    p_los = los_probability(d_3d_m)
    return -(p_los * model.los_loss_db(d_3d_m) + (1.0 - p_los) * model.nlos_loss_db(d_3d_m))


class ShadowField:
    """Spatially correlated log-normal shadowing for one simulation run.

    Each site m sees a Gaussian field G_S,m with ``sigma_db`` standard
    deviation and exp(-delta/decorrelation) spatial autocorrelation.
    Inter-site correlation ``rho`` comes from the common/independent
    split G_S,m = sigma * (sqrt(rho) * Z_common + sqrt(1-rho) * Z_m).

    Fields are sampled exactly at the query positions (Cholesky factor of
    the position covariance), so arbitrarily dense lattices stay cheap:
    the factorisation is over UE positions, not a full region grid.
    """

    def __init__(
        self,
        n_sites: int,
        region_bounds,
        sigma_db: float = 6.0,
        inter_site_correlation: float = 0.5,
        decorrelation_distance_m: float = 20.0,
    ):
        self.n_sites = int(n_sites)
        self.bounds = tuple(float(b) for b in region_bounds)  # (xmin, xmax, ymin, ymax)
        self.sigma_db = float(sigma_db)
        self.rho = float(inter_site_correlation)
        self.decorrelation_distance_m = float(decorrelation_distance_m)

    def _check_positions(self, positions):
        xmin, xmax, ymin, ymax = self.bounds
        x, y = positions[:, 0], positions[:, 1]
        if np.any((x < xmin) | (x > xmax) | (y < ymin) | (y > ymax)):
            raise ValueError("shadow query position outside region plus guard margin")

    def sample_at(self, positions, rng: np.random.Generator) -> np.ndarray:
        """Sample all sites' shadow gains at ``positions``; (n_sites, n_pos) dB."""
        positions = np.asarray(positions, dtype=float)
        self._check_positions(positions)
        n_pos = positions.shape[0]
        if n_pos == 0:
            return np.empty((self.n_sites, 0))
        delta = np.sqrt(
            np.sum((positions[:, None, :] - positions[None, :, :]) ** 2, axis=2)
        )
        cov = np.exp(-delta / self.decorrelation_distance_m)
        cov[np.diag_indices(n_pos)] += 1e-10  # duplicate-position robustness
        chol = np.linalg.cholesky(cov)
        z_common = chol @ rng.standard_normal(n_pos)
        z_sites = (chol @ rng.standard_normal((n_pos, self.n_sites))).T
        return self.sigma_db * (
            np.sqrt(self.rho) * z_common[None, :] + np.sqrt(1.0 - self.rho) * z_sites
        )

    def dump_grid_csv(self, path, rng: np.random.Generator, resolution_m: float = 10.0):
        """Optional visual-inspection dump: one site field on a coarse grid."""
        xmin, xmax, ymin, ymax = self.bounds
        xs = np.arange(xmin, xmax + resolution_m, resolution_m)
        ys = np.arange(ymin, ymax + resolution_m, resolution_m)
        gx, gy = np.meshgrid(xs, ys)
        positions = np.column_stack([gx.ravel(), gy.ravel()])
        values = self.sample_at(positions, rng)[0]
        with open(path, "w") as f:
            f.write("x,y,shadow_db\n")
            for (x, y), v in zip(positions, values):
                f.write(f"{x:.1f},{y:.1f},{v:.4f}\n")
