"""Geometric multipath channel between a hybrid access point and wireless devices.

Each device sees L planar paths.  A path contributes a unit-modulus phase term
that depends on the antenna position inside its moving region through the
projection of the position onto the path's direction vector
[sin(elev)*cos(azim), cos(elev)].  The per-path complex amplitudes sit on the
diagonal of a response matrix whose total power follows the distance path loss.
Downlink and uplink use the same geometry; the uplink coefficient is the
conjugate of the downlink one.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .params import path_loss

# Device drop geometry: a disk in front of the access point.
WD_DISK_CENTER = (10.0, 0.0)
WD_DISK_RADIUS = 1.5


@dataclass(frozen=True)
class Position:
    """A point inside a square antenna moving region, meters."""

    x_m: float
    y_m: float

    def as_array(self):
        return np.array([self.x_m, self.y_m])

    @staticmethod
    def from_array(arr):
        return Position(float(arr[0]), float(arr[1]))

    def in_region(self, region_size_m, tol=1e-12):
        half = 0.5 * region_size_m + tol
        return abs(self.x_m) <= half and abs(self.y_m) <= half


def require_in_region(pos, region_size_m, what="position"):
    if not pos.in_region(region_size_m):
        raise ValueError(f"{what} {pos} outside the {region_size_m} m moving region")
    return pos


def _direction_components(elev, azim):
    # [sin(theta)cos(phi), cos(theta)] per path; elev/azim arrays of equal shape.
    return np.sin(elev) * np.cos(azim), np.cos(elev)


@dataclass(frozen=True)
class ChannelRealization:
    """One Monte-Carlo draw of geometry and per-path responses for all devices.

    Arrays are stacked over devices: shape (K, L) unless noted.  Instances are
    immutable; all arrays are marked read-only at construction.
    """

    aod_elev: np.ndarray       # departure elevations, HAP side
    aod_azim: np.ndarray       # departure azimuths, HAP side
    aoa_elev: np.ndarray       # arrival elevations, device side
    aoa_azim: np.ndarray       # arrival azimuths, device side
    path_response: np.ndarray  # complex diagonal of the response matrix
    wd_locations: np.ndarray   # (K, 2) device drop points, meters from the HAP
    distances: np.ndarray      # (K,) link distances, meters
    # Direction components cached for the position-dependent phase terms.
    aod_dir_x: np.ndarray = field(init=False)
    aod_dir_y: np.ndarray = field(init=False)
    aoa_dir_x: np.ndarray = field(init=False)
    aoa_dir_y: np.ndarray = field(init=False)

    def __post_init__(self):
        k, l = self.aod_elev.shape
        for name in ("aod_azim", "aoa_elev", "aoa_azim", "path_response"):
            if getattr(self, name).shape != (k, l):
                raise ValueError(f"{name} must have shape ({k}, {l})")
        if self.wd_locations.shape != (k, 2) or self.distances.shape != (k,):
            raise ValueError("wd_locations/distances inconsistent with angle arrays")
        dx, dy = _direction_components(self.aod_elev, self.aod_azim)
        object.__setattr__(self, "aod_dir_x", np.ascontiguousarray(dx))
        object.__setattr__(self, "aod_dir_y", np.ascontiguousarray(dy))
        dx, dy = _direction_components(self.aoa_elev, self.aoa_azim)
        object.__setattr__(self, "aoa_dir_x", np.ascontiguousarray(dx))
        object.__setattr__(self, "aoa_dir_y", np.ascontiguousarray(dy))
        for name in (
            "aod_elev", "aod_azim", "aoa_elev", "aoa_azim", "path_response",
            "wd_locations", "distances", "aod_dir_x", "aod_dir_y",
            "aoa_dir_x", "aoa_dir_y",
        ):
            getattr(self, name).flags.writeable = False

    @property
    def num_wds(self):
        return self.aod_elev.shape[0]

    @property
    def num_paths(self):
        return self.aod_elev.shape[1]


def draw_wd_locations(rng, num_wds, center=WD_DISK_CENTER, radius=WD_DISK_RADIUS):
    """Drop devices uniformly over a disk via rejection sampling."""
    out = np.empty((num_wds, 2))
    filled = 0
    while filled < num_wds:
        cand = rng.uniform(-radius, radius, size=(num_wds, 2))
        keep = cand[np.hypot(cand[:, 0], cand[:, 1]) <= radius]
        take = min(len(keep), num_wds - filled)
        out[filled:filled + take] = keep[:take]
        filled += take
    return out + np.asarray(center)


def generate_realization(seed, params, wd_locations=None):
    """Draw one channel realization.

    Draw order (fixed for reproducibility): device locations when not supplied,
    then the four angle arrays (departure elev/azim, arrival elev/azim, each
    i.i.d. uniform on [0, pi]), then the complex path responses, circularly
    symmetric Gaussian with per-path variance path_loss(distance)/L.
    """
    rng = np.random.default_rng(seed)
    k, l = params.num_wds, params.num_paths
    if wd_locations is None:
        wd_locations = draw_wd_locations(rng, k)
    else:
        wd_locations = np.asarray(wd_locations, dtype=float)
        if wd_locations.shape != (k, 2):
            raise ValueError(f"wd_locations must have shape ({k}, 2)")
    distances = np.hypot(wd_locations[:, 0], wd_locations[:, 1])
    aod_elev = rng.uniform(0.0, math.pi, size=(k, l))
    aod_azim = rng.uniform(0.0, math.pi, size=(k, l))
    aoa_elev = rng.uniform(0.0, math.pi, size=(k, l))
    aoa_azim = rng.uniform(0.0, math.pi, size=(k, l))
    gains = np.array([path_loss(d, params) for d in distances])
    # CN(0, gain/L): independent real/imag parts with variance gain/(2L).
    scale = np.sqrt(gains / (2.0 * l))[:, None]
    noise = rng.standard_normal((k, l, 2))
    response = scale * (noise[:, :, 0] + 1j * noise[:, :, 1])
    return ChannelRealization(
        aod_elev=aod_elev,
        aod_azim=aod_azim,
        aoa_elev=aoa_elev,
        aoa_azim=aoa_azim,
        path_response=response,
        wd_locations=wd_locations,
        distances=distances,
    )


def _steering(pos, dir_x, dir_y, wavelength):
    phase = (2.0 * math.pi / wavelength) * (pos.x_m * dir_x + pos.y_m * dir_y)
    return np.exp(1j * phase)


def transmit_field_response(pos, realization, wd_index, wavelength):
    """Unit-modulus departure response of a device's paths at a HAP position."""
    return _steering(
        pos, realization.aod_dir_x[wd_index], realization.aod_dir_y[wd_index], wavelength
    )


def receive_field_response(pos, realization, wd_index, wavelength):
    """Unit-modulus arrival response of a device's paths at its own position."""
    return _steering(
        pos, realization.aoa_dir_x[wd_index], realization.aoa_dir_y[wd_index], wavelength
    )


def channel_coefficient(hap_pos, wd_pos, realization, wd_index, wavelength):
    """Downlink coefficient for one device: receive^H diag(response) transmit."""
    g = transmit_field_response(hap_pos, realization, wd_index, wavelength)
    f = receive_field_response(wd_pos, realization, wd_index, wavelength)
    return complex(np.sum(np.conj(f) * realization.path_response[wd_index] * g))


def uplink_coefficient(hap_pos, wd_pos, realization, wd_index, wavelength):
    """Uplink coefficient: conjugate of the downlink one (reciprocity)."""
    return np.conj(channel_coefficient(hap_pos, wd_pos, realization, wd_index, wavelength))
