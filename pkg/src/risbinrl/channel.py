"""IID Ricean channel sampling for the two-hop BS -> RIS -> UE link.

Geometry: the BS is a uniform linear array along the x-axis, the RIS a
rectangular grid on the y-z plane (ceil(sqrt(N)) columns, filled row-major,
so N need not be a perfect square), both with half-wavelength spacing by
default. Free-space pathloss is applied per link from the array centers;
small-scale fading is Ricean around the exact per-element line-of-sight
phases.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

SPEED_OF_LIGHT = 3.0e8


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class Geometry:
    """Node positions (meters) and array sizes; defaults follow the testbed."""
    n: int
    k: int
    bs_pos: tuple = (10.0, 5.0, 2.0)
    ue_pos: tuple = (8.7, 14.4, 1.6)
    ris_pos: tuple = (7.5, 13.0, 2.0)
    spacing: float = None   # element spacing in meters; None -> lambda/2

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ConfigError("need n >= 1 RIS elements and k >= 1 BS antennas")
        for a, b, label in ((self.bs_pos, self.ris_pos, "BS-RIS"),
                            (self.ris_pos, self.ue_pos, "RIS-UE"),
                            (self.bs_pos, self.ue_pos, "BS-UE")):
            if math.dist(a, b) <= 0.0:
                raise ConfigError(f"{label} distance must be positive")


@dataclass(frozen=True)
class ChannelParams:
    carrier_freq: float = 5.0e9
    tx_power: float = field(default=dbm_to_watt(40.0))      # 40 dBm
    noise_power: float = field(default=dbm_to_watt(-100.0))  # -100 dBm
    ricean_kappa: float = field(default=db_to_linear(30.0))  # 30 dB, linear

    def __post_init__(self):
        if self.carrier_freq <= 0 or self.tx_power <= 0 or self.noise_power <= 0:
            raise ConfigError("carrier_freq, tx_power, noise_power must be > 0")
        if self.ricean_kappa < 0:
            raise ConfigError("ricean_kappa must be >= 0")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq

    @property
    def snr_scale(self) -> float:
        """P / sigma^2."""
        return self.tx_power / self.noise_power


@dataclass(frozen=True)
class ChannelRealization:
    """BS->RIS matrix H (N x K) and RIS->UE vector g (N,) for one step."""
    H: np.ndarray
    g: np.ndarray


def pathloss(distance: float, carrier_freq: float) -> float:
    """Free-space amplitude gain lambda / (4 pi d)."""
    if distance <= 0:
        raise ValueError(f"distance must be > 0, got {distance}")
    if carrier_freq <= 0:
        raise ValueError(f"carrier_freq must be > 0, got {carrier_freq}")
    wavelength = SPEED_OF_LIGHT / carrier_freq
    return wavelength / (4.0 * np.pi * distance)


def ris_element_positions(geom: Geometry, wavelength: float) -> np.ndarray:
    """N x 3 grid on the y-z plane centered at ris_pos, row-major fill."""
    spacing = geom.spacing if geom.spacing is not None else wavelength / 2.0
    cols = math.ceil(math.sqrt(geom.n))
    rows = math.ceil(geom.n / cols)
    idx = np.arange(geom.n)
    r, c = idx // cols, idx % cols
    pos = np.tile(np.asarray(geom.ris_pos, dtype=float), (geom.n, 1))
    pos[:, 1] += (c - (cols - 1) / 2.0) * spacing
    pos[:, 2] += (r - (rows - 1) / 2.0) * spacing
    return pos


def bs_antenna_positions(geom: Geometry, wavelength: float) -> np.ndarray:
    """K x 3 uniform linear array along the x-axis centered at bs_pos."""
    spacing = geom.spacing if geom.spacing is not None else wavelength / 2.0
    idx = np.arange(geom.k)
    pos = np.tile(np.asarray(geom.bs_pos, dtype=float), (geom.k, 1))
    pos[:, 0] += (idx - (geom.k - 1) / 2.0) * spacing
    return pos


def los_phase_vector(source_pos, element_positions, wavelength: float) -> np.ndarray:
    """Unit-modulus exp(-j 2 pi d_i / lambda) for exact per-element distances."""
    source = np.asarray(source_pos, dtype=float)
    dists = np.linalg.norm(np.asarray(element_positions, dtype=float) - source,
                           axis=-1)
    return np.exp(-2j * np.pi * dists / wavelength)


def sample_ricean(los: np.ndarray, kappa: float, scale: float,
                  rng: np.random.Generator) -> np.ndarray:
    """scale * (sqrt(k/(k+1)) los + sqrt(1/(k+1)) w), w standard complex normal."""
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0, got {kappa}")
    los = np.asarray(los)
    if np.isinf(kappa):
        return scale * los.copy()
    w = (rng.standard_normal(los.shape) + 1j * rng.standard_normal(los.shape))
    w /= np.sqrt(2.0)
    return scale * (np.sqrt(kappa / (kappa + 1.0)) * los
                    + np.sqrt(1.0 / (kappa + 1.0)) * w)


def sample_channels(geom: Geometry, params: ChannelParams,
                    rng: np.random.Generator) -> ChannelRealization:
    """One fresh IID realization of H (N x K) and g (N,)."""
    lam = params.wavelength
    elems = ris_element_positions(geom, lam)
    antennas = bs_antenna_positions(geom, lam)
    d_bs_ris = math.dist(geom.bs_pos, geom.ris_pos)
    d_ris_ue = math.dist(geom.ris_pos, geom.ue_pos)
    # exact per-(element, antenna) LoS phases; pathloss from array centers
    diffs = elems[:, None, :] - antennas[None, :, :]
    los_h = np.exp(-2j * np.pi * np.linalg.norm(diffs, axis=2) / lam)
    H = sample_ricean(los_h, params.ricean_kappa,
                      pathloss(d_bs_ris, params.carrier_freq), rng)
    los_g = los_phase_vector(geom.ue_pos, elems, lam)
    g = sample_ricean(los_g, params.ricean_kappa,
                      pathloss(d_ris_ue, params.carrier_freq), rng)
    return ChannelRealization(H=H, g=g)
