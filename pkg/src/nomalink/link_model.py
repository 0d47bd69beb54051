"""Geometry, path-loss and power-normalization primitives.

Units at the module boundary: distances in meters, transmit powers in
watts, noise spectral densities in W/Hz.  Everything downstream works
with dimensionless quantities: the average channel gain d**-alpha and
the normalized power P = P_t / N_0.  Channels are deterministic average
gains, no fading.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class PathLoss:
    """Power-law distance attenuation; average channel gain is d**-alpha."""

    alpha: float = 4.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"path-loss exponent must be positive, got {self.alpha}")


@dataclass(frozen=True)
class UserTerminal:
    """A user at a fixed distance from the base station.

    ``tx_power_w`` is the user's own transmit power and only matters on
    the uplink; downlink users may leave it unset.
    """

    id: str
    distance_m: float
    tx_power_w: float | None = None

    def __post_init__(self):
        if self.distance_m <= 0:
            raise ValueError(
                f"user {self.id!r}: distance must be positive, got {self.distance_m}"
            )
        if self.tx_power_w is not None and self.tx_power_w <= 0:
            raise ValueError(
                f"user {self.id!r}: tx power must be positive, got {self.tx_power_w}"
            )


@dataclass(frozen=True)
class PowerBudget:
    """Base-station transmit power budget and receiver noise density."""

    total_power_w: float
    noise_psd_w_per_hz: float

    def __post_init__(self):
        if self.total_power_w <= 0:
            raise ValueError(f"total power must be positive, got {self.total_power_w}")
        if self.noise_psd_w_per_hz <= 0:
            raise ValueError(
                f"noise PSD must be positive, got {self.noise_psd_w_per_hz}"
            )


def avg_channel_gain(distance_m: float, pl: PathLoss) -> float:
    """Average channel gain d**-alpha of a user at ``distance_m``."""
    if distance_m <= 0:
        raise ValueError(f"distance must be positive, got {distance_m}")
    return distance_m ** -pl.alpha


def normalized_power(budget: PowerBudget) -> float:
    """Transmit power normalized by the noise PSD (dimensionless)."""
    return budget.total_power_w / budget.noise_psd_w_per_hz
