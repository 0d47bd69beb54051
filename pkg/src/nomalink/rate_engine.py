"""Spectral-efficiency computation for NOMA clusters under SIC.

Downlink: the base station superimposes all users' signals, giving the
weak-channel users the larger power fractions.  Each receiver decodes
and cancels the stronger (higher-power) signals of weaker-channel users
before decoding its own, so the best-channel user sees no intra-cluster
interference while the worst-channel user hears everyone.

Uplink: the base station decodes in descending received-power order and
cancels as it goes, so the last-decoded (weakest received) user gets an
interference-free channel.

Imperfect cancellation is modeled by a scalar residual: a fraction of
every canceled signal's power survives and adds back into the
interference.  The orthogonal baseline is TDMA with an equal 1/U time
share per user.  All rates are Shannon spectral efficiencies in
bits/s/Hz.
"""

import math
from dataclasses import dataclass
from typing import Sequence

from .link_model import (
    PathLoss,
    PowerBudget,
    UserTerminal,
    avg_channel_gain,
    normalized_power,
)


@dataclass(frozen=True)
class SicModel:
    """Fraction of a canceled signal's power that survives cancellation.

    0 means perfect SIC; 1 means cancellation does nothing.
    """

    residual_fraction: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.residual_fraction <= 1.0:
            raise ValueError(
                f"residual fraction must be in [0, 1], got {self.residual_fraction}"
            )


PERFECT_SIC = SicModel(0.0)


def _check_sorted(users: tuple[UserTerminal, ...]) -> None:
    if not users:
        raise ValueError("cluster must contain at least one user")
    for near, far in zip(users, users[1:]):
        if near.distance_m >= far.distance_m:
            raise ValueError(
                "cluster users must be strictly sorted by ascending distance; "
                f"got {near.distance_m} m before {far.distance_m} m"
            )


@dataclass(frozen=True)
class DlCluster:
    """Downlink cluster: users nearest first, one power fraction each.

    Fractions must sum to 1.  A single-user cluster takes the whole
    budget (fraction 1); with two or more users every fraction is
    strictly inside (0, 1) because they are positive and sum to 1.
    """

    users: tuple[UserTerminal, ...]
    power_fractions: tuple[float, ...]
    budget: PowerBudget
    pl: PathLoss

    def __post_init__(self):
        object.__setattr__(self, "users", tuple(self.users))
        object.__setattr__(self, "power_fractions", tuple(self.power_fractions))
        _check_sorted(self.users)
        if len(self.users) != len(self.power_fractions):
            raise ValueError(
                f"{len(self.users)} users but {len(self.power_fractions)} power fractions"
            )
        for a in self.power_fractions:
            if not 0.0 < a <= 1.0:
                raise ValueError(f"power fractions must be in (0, 1], got {a}")
        if abs(sum(self.power_fractions) - 1.0) > 1e-12:
            raise ValueError(
                f"power fractions must sum to 1, got {sum(self.power_fractions)!r}"
            )


@dataclass(frozen=True)
class UlCluster:
    """Uplink cluster: users nearest first, each with its own tx power."""

    users: tuple[UserTerminal, ...]
    noise_psd_w_per_hz: float
    pl: PathLoss

    def __post_init__(self):
        object.__setattr__(self, "users", tuple(self.users))
        _check_sorted(self.users)
        if self.noise_psd_w_per_hz <= 0:
            raise ValueError(
                f"noise PSD must be positive, got {self.noise_psd_w_per_hz}"
            )
        for u in self.users:
            if u.tx_power_w is None:
                raise ValueError(f"uplink user {u.id!r} has no tx power")


@dataclass(frozen=True)
class UserRates:
    """One user's NOMA and OMA spectral efficiencies (bits/s/Hz)."""

    user_id: str
    distance_m: float
    noma_rate: float
    oma_rate: float
    noma_dominant: bool  # strict: noma_rate > oma_rate


@dataclass(frozen=True)
class RateReport:
    entries: tuple[UserRates, ...]
    noma_sum_rate: float
    oma_sum_rate: float


def dl_noma_rates(cluster: DlCluster, sic: SicModel = PERFECT_SIC) -> list[float]:
    """Per-user downlink NOMA rates, in cluster (nearest-first) order.

    User i cancels the higher-power signals of users farther out; the
    fractions of users nearer in stay as interference, plus a residual
    share of the canceled ones.
    """
    p = normalized_power(cluster.budget)
    beta = sic.residual_fraction
    fractions = cluster.power_fractions
    rates = []
    for i, user in enumerate(cluster.users):
        s = p * avg_channel_gain(user.distance_m, cluster.pl)
        uncancelable = sum(fractions[:i])
        residual = beta * sum(fractions[i + 1 :])
        interference = s * (uncancelable + residual)
        rates.append(math.log2(1.0 + fractions[i] * s / (interference + 1.0)))
    return rates


def ul_noma_rates(cluster: UlCluster, sic: SicModel = PERFECT_SIC) -> list[float]:
    """Per-user uplink NOMA rates, in cluster (nearest-first) order.

    The base station decodes in descending received-power order (ties
    broken by user id): signals not yet decoded interfere in full,
    already-canceled ones only through the residual.
    """
    beta = sic.residual_fraction
    received = [
        u.tx_power_w / cluster.noise_psd_w_per_hz
        * avg_channel_gain(u.distance_m, cluster.pl)
        for u in cluster.users
    ]
    order = sorted(
        range(len(received)), key=lambda i: (-received[i], cluster.users[i].id)
    )
    rates = [0.0] * len(received)
    for pos, i in enumerate(order):
        pending = sum(received[j] for j in order[pos + 1 :])
        canceled = sum(received[j] for j in order[:pos])
        rates[i] = math.log2(1.0 + received[i] / (pending + beta * canceled + 1.0))
    return rates


def oma_rates(
    users: Sequence[UserTerminal], powers: Sequence[float], pl: PathLoss
) -> list[float]:
    """TDMA baseline: each of U users gets a 1/U time slot at ``powers[j]``.

    ``powers`` are normalized (power over noise PSD); the downlink uses
    the full budget for every slot, the uplink each user's own power.
    """
    users = tuple(users)
    powers = tuple(powers)
    if not users:
        raise ValueError("need at least one user")
    if len(users) != len(powers):
        raise ValueError(f"{len(users)} users but {len(powers)} powers")
    share = 1.0 / len(users)
    out = []
    for u, p in zip(users, powers):
        if p <= 0:
            raise ValueError(f"normalized power must be positive, got {p}")
        out.append(share * math.log2(1.0 + p * avg_channel_gain(u.distance_m, pl)))
    return out


def rate_report(
    cluster: DlCluster | UlCluster, sic: SicModel = PERFECT_SIC
) -> RateReport:
    """NOMA vs OMA rates for one cluster, with per-user dominance flags."""
    if isinstance(cluster, DlCluster):
        noma = dl_noma_rates(cluster, sic)
        p = normalized_power(cluster.budget)
        oma = oma_rates(cluster.users, [p] * len(cluster.users), cluster.pl)
    elif isinstance(cluster, UlCluster):
        noma = ul_noma_rates(cluster, sic)
        powers = [u.tx_power_w / cluster.noise_psd_w_per_hz for u in cluster.users]
        oma = oma_rates(cluster.users, powers, cluster.pl)
    else:
        raise TypeError(f"expected DlCluster or UlCluster, got {type(cluster).__name__}")
    entries = tuple(
        UserRates(u.id, u.distance_m, n, o, n > o)
        for u, n, o in zip(cluster.users, noma, oma)
    )
    return RateReport(entries, sum(noma), sum(oma))
