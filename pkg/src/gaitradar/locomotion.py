"""Walking-pedestrian scatterer synthesis.

A pedestrian is modeled as 17 characteristic body points (head, thorax,
pelvis, and left/right shoulder, elbow, wrist, hip, knee, ankle, toe), each
an ellipsoidal scattering center. Cycle scaling follows the classic global
walking parametrization: with relative velocity RV = v / H_t (H_t = 0.53 h
the hip height), the stride length is 1.346 * sqrt(RV) * H_t and the stance
fraction 0.752 - 0.143 / T_cycle. Limb trajectories are a documented
kinematic approximation on top of that scaling: stance feet are stationary
on the ground, swing feet follow C1 Hermite profiles, knees are placed by
two-segment inverse kinematics, and arms counter-swing sinusoidally. The
approximation is flagged in the output metadata (gait_model tag).

Everything is a pure function of (parameters, seeded generator); identical
seeds give bit-identical trajectories.
"""

from dataclasses import dataclass, field

import numpy as np

from gaitradar.errors import ParameterError

POINT_NAMES = (
    "head",
    "thorax",
    "pelvis",
    "shoulder_l",
    "shoulder_r",
    "elbow_l",
    "elbow_r",
    "wrist_l",
    "wrist_r",
    "hip_l",
    "hip_r",
    "knee_l",
    "knee_r",
    "ankle_l",
    "ankle_r",
    "toe_l",
    "toe_r",
)
NUM_POINTS = len(POINT_NAMES)

GAIT_MODEL_TAG = "hermite-ik-approximation"

# Ellipsoid semi-axes per body point, meters, as (long, transverse, transverse)
# with the long axis along the local segment direction. Only the relative
# ordering of the resulting cross sections matters downstream; override via
# PedestrianParams.ellipsoid_table.
DEFAULT_ELLIPSOIDS = {
    "head": (0.10, 0.10, 0.10),
    "thorax": (0.30, 0.15, 0.15),
    "pelvis": (0.20, 0.13, 0.13),
    "shoulder": (0.12, 0.06, 0.06),
    "elbow": (0.15, 0.05, 0.05),
    "wrist": (0.15, 0.045, 0.045),
    "hip": (0.14, 0.07, 0.07),
    "knee": (0.20, 0.07, 0.07),
    "ankle": (0.20, 0.055, 0.055),
    "toe": (0.10, 0.04, 0.04),
}

# parent point used to orient a segment's long axis; None = vertical
SEGMENT_PARENT = {
    "elbow_l": "shoulder_l",
    "elbow_r": "shoulder_r",
    "wrist_l": "elbow_l",
    "wrist_r": "elbow_r",
    "knee_l": "hip_l",
    "knee_r": "hip_r",
    "ankle_l": "knee_l",
    "ankle_r": "knee_r",
    "toe_l": "ankle_l",
    "toe_r": "ankle_r",
}


@dataclass(frozen=True)
class DistortionParams:
    """Realization-to-realization variability of the synthetic pedestrian."""

    enabled: bool = False
    height_jitter_range_m: tuple = (1.6, 2.0)
    accel_std_mps2: float = 0.008
    direction_std_rad: float = 0.03

    def __post_init__(self):
        lo, hi = self.height_jitter_range_m
        if lo > hi:
            raise ParameterError("height jitter range must have lo <= hi")
        if self.accel_std_mps2 < 0 or self.direction_std_rad < 0:
            raise ParameterError("distortion standard deviations must be >= 0")


@dataclass(frozen=True)
class PedestrianParams:
    height_m: float = 1.8
    speed_mps: float = 1.0
    direction_deg: float = 0.0
    start_position_m: tuple = (100.0, 0.0, 0.0)
    distortion: DistortionParams = field(default_factory=DistortionParams)
    ellipsoid_table: dict = field(default_factory=lambda: dict(DEFAULT_ELLIPSOIDS))

    def __post_init__(self):
        if self.height_m <= 0:
            raise ParameterError("height must be positive")
        if self.speed_mps <= 0:
            raise ParameterError("the gait model is undefined for zero speed")
        object.__setattr__(self, "direction_deg", float(self.direction_deg) % 360.0)


@dataclass
class TrajectoryTensor:
    """Sampled scatterer tracks: positions, velocities, complex reflectivities."""

    timestep_s: float
    positions_m: np.ndarray  # (T, 17, 3)
    velocities_mps: np.ndarray  # (T, 17, 3)
    reflectivities: np.ndarray  # (T, 17) complex
    metadata: dict = field(default_factory=dict)

    @property
    def num_steps(self) -> int:
        return self.positions_m.shape[0]

    def centroid(self) -> np.ndarray:
        return self.positions_m.mean(axis=1)


def rcs_ellipsoid(semi_axes_m, los_direction) -> float:
    """Monostatic ellipsoid cross section, LOS given in the ellipsoid frame.

    sigma = pi a^2 b^2 c^2 / (a^2 lx^2 + b^2 ly^2 + c^2 lz^2)^2 with the c
    axis along the frame's z; reduces to pi r^2 for a sphere.
    """
    a, b, c = (float(v) for v in semi_axes_m)
    if a <= 0 or b <= 0 or c <= 0:
        raise ParameterError("semi-axes must be positive")
    los = np.asarray(los_direction, dtype=float)
    los = los / np.linalg.norm(los)
    denom = a * a * los[0] ** 2 + b * b * los[1] ** 2 + c * c * los[2] ** 2
    return float(np.pi * a * a * b * b * c * c / denom**2)


def _rcs_spheroid_batch(trans: float, long_: float, cos_axis: np.ndarray) -> np.ndarray:
    """Vectorized cross section for a=b spheroids; cos_axis = LOS . long axis."""
    c2 = cos_axis**2
    denom = trans * trans * (1.0 - c2) + long_ * long_ * c2
    return np.pi * trans**4 * long_ * long_ / denom**2


def apply_distortions(base: PedestrianParams, num_steps: int, timestep_s: float, rng):
    """Per-timestep effective (height, speed, heading-radians) streams.

    Height is drawn once per realization; speed is a random walk driven by
    white acceleration; heading is white around the nominal direction.
    Disabled distortion (or zeroed spreads) returns constant streams.
    """
    d = base.distortion
    theta0 = np.radians(base.direction_deg)
    if not d.enabled:
        return (
            np.full(num_steps, base.height_m),
            np.full(num_steps, base.speed_mps),
            np.full(num_steps, theta0),
        )
    lo, hi = d.height_jitter_range_m
    height = np.full(num_steps, float(rng.uniform(lo, hi)))
    accel = rng.normal(0.0, d.accel_std_mps2, size=num_steps)
    speed = base.speed_mps + np.concatenate(([0.0], np.cumsum(accel[:-1] * timestep_s)))
    speed = np.maximum(speed, 1e-3)
    heading = theta0 + rng.normal(0.0, d.direction_std_rad, size=num_steps)
    return height, speed, heading


def gait_scaling(height_m: float, speed_mps: float) -> dict:
    """Global cycle characteristics for a given body height and speed."""
    hip_height = 0.53 * height_m
    rel_velocity = speed_mps / hip_height
    cycle_len = 1.346 * np.sqrt(rel_velocity) * hip_height
    cycle_dur = cycle_len / speed_mps
    stance_frac = float(np.clip(0.752 - 0.143 / cycle_dur, 0.50, 0.80))
    return {
        "hip_height_m": hip_height,
        "relative_velocity": rel_velocity,
        "cycle_length_m": cycle_len,
        "cycle_duration_s": cycle_dur,
        "stance_fraction": stance_frac,
    }


def _hump(x):
    """sin^2 lobe on [0, 1], zero value and slope at both ends."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > 0.0) & (x < 1.0)
    out[inside] = np.sin(np.pi * x[inside]) ** 2
    return out


def _smoothmin(a, b, eps=0.02):
    return 0.5 * (a + b) - 0.5 * np.sqrt((a - b) ** 2 + eps * eps)


def _ankle_profile(phase, scale, height_m):
    """Body-frame ankle (x, z) over one cycle; phase in [0, 1), 0 = heel strike."""
    fs = scale["stance_fraction"]
    lc = scale["cycle_length_m"]
    d0 = 0.5 * lc * fs
    ankle_h = 0.039 * height_m
    toe_off_h = 0.09
    clear_h = 0.05 * np.sqrt(scale["relative_velocity"])

    u = np.asarray(phase, dtype=float) % 1.0
    stance = u < fs
    x = np.empty_like(u)
    z = np.empty_like(u)

    # stance: foot fixed on the ground, pelvis advances at the walking speed
    x[stance] = d0 - lc * u[stance]
    q = (u[stance] - (fs - 0.25)) / 0.25  # heel-off ramp in late stance
    z[stance] = ankle_h + toe_off_h * np.sin(np.pi * np.clip(q, 0.0, 1.0) / 2.0) ** 2

    # swing: Hermite return with ground-speed-matched end slopes
    s = (u[~stance] - fs) / (1.0 - fs)
    m = -(1.0 - fs) / fs  # slope so the foot is world-stationary at both ends
    sigma = s * s * (3.0 - 2.0 * s) + m * (2.0 * s**3 - 3.0 * s**2 + s)
    x[~stance] = -d0 + 2.0 * d0 * sigma
    z[~stance] = (
        ankle_h
        + toe_off_h * np.cos(np.pi * s / 2.0) ** 2
        + clear_h * np.sin(np.pi * s) ** 2
    )
    return x, z


def _leg_chord(height_m, knee_flex_rad):
    l_thigh = 0.245 * height_m
    l_shank = 0.246 * height_m
    return np.sqrt(
        l_thigh**2 + l_shank**2 + 2.0 * l_thigh * l_shank * np.cos(knee_flex_rad)
    )


def _designed_knee_flexion(phase, scale):
    """Target knee flexion (radians): stance bump plus strong swing flexion."""
    fs = scale["stance_fraction"]
    u = np.asarray(phase, dtype=float) % 1.0
    stance_bump = np.radians(12.0) * _hump(u / fs)
    swing_bump = np.radians(55.0) * _hump((u - fs) / (1.0 - fs))
    return stance_bump + swing_bump


def _solve_knee(hip_xz, ankle_xz, l_thigh, l_shank):
    """Two-segment sagittal IK; the knee bows toward +x (anatomical forward)."""
    dx = ankle_xz[0] - hip_xz[0]
    dz = ankle_xz[1] - hip_xz[1]
    d = np.sqrt(dx * dx + dz * dz)
    d = np.minimum(d, (l_thigh + l_shank) * (1.0 - 1e-9))
    d = np.maximum(d, abs(l_thigh - l_shank) + 1e-9)
    t = (l_thigh**2 - l_shank**2 + d * d) / (2.0 * d)
    h = np.sqrt(np.maximum(l_thigh**2 - t * t, 0.0))
    ux, uz = dx / d, dz / d
    # normal with positive x component (dz < 0 always: ankle below hip)
    nx, nz = -uz, ux
    kx = hip_xz[0] + t * ux + h * nx
    kz = hip_xz[1] + t * uz + h * nz
    return kx, kz


def gait_pose(height_m: float, speed_mps: float, phase) -> np.ndarray:
    """Body-frame offsets of the 17 points at the given cycle phase.

    Body frame: x forward, y left, z up, origin on the ground under the mean
    pelvis position. Returns (..., 17, 3); broadcasting over phase arrays.
    """
    scale = gait_scaling(height_m, speed_mps)
    u = np.atleast_1d(np.asarray(phase, dtype=float)) % 1.0
    n = u.shape[0]
    h = height_m
    l_thigh, l_shank = 0.245 * h, 0.246 * h
    w_hip, w_sh = 0.05 * h, 0.129 * h
    l_uarm, l_farm, l_foot = 0.186 * h, 0.146 * h, 0.152 * h

    # feet (left at phase u, right half a cycle later)
    ax_l, az_l = _ankle_profile(u, scale, h)
    ax_r, az_r = _ankle_profile(u + 0.5, scale, h)

    # pelvis height from the leg that currently needs the lower hip
    def hip_need(ax, az, flex):
        chord = _leg_chord(h, flex)
        reach2 = chord**2 - ax**2
        return az + np.sqrt(np.maximum(reach2, 0.01))

    z_pelvis = _smoothmin(
        hip_need(ax_l, az_l, _designed_knee_flexion(u, scale)),
        hip_need(ax_r, az_r, _designed_knee_flexion(u + 0.5, scale)),
    )

    sway = 0.032 * scale["hip_height_m"] * np.sin(2.0 * np.pi * (u - 0.1))
    yaw = -np.radians(5.0) * np.cos(2.0 * np.pi * u)  # left hip leads at u=0
    bob = z_pelvis - scale["hip_height_m"]

    pts = np.zeros((n, NUM_POINTS, 3))

    def put(name, x, y, z):
        pts[:, POINT_NAMES.index(name), 0] = x
        pts[:, POINT_NAMES.index(name), 1] = y
        pts[:, POINT_NAMES.index(name), 2] = z

    put("pelvis", 0.0, sway, z_pelvis)
    put("thorax", 0.0, 0.6 * sway, 0.72 * h + bob)
    put("head", 0.0, 0.3 * sway, 0.93 * h + bob)

    # hips ride on the yawing pelvis
    hx_l, hy_l = -w_hip * np.sin(yaw), w_hip * np.cos(yaw)
    put("hip_l", hx_l, sway + hy_l, z_pelvis)
    put("hip_r", -hx_l, sway - hy_l, z_pelvis)

    for side, sgn, ax, az, hx in (("l", 1.0, ax_l, az_l, hx_l), ("r", -1.0, ax_r, az_r, -hx_l)):
        kx, kz = _solve_knee((hx, z_pelvis), (ax, az), l_thigh, l_shank)
        y_leg = sway + sgn * w_hip
        put(f"knee_{side}", kx, y_leg, kz)
        put(f"ankle_{side}", ax, y_leg, az)
        # foot roughly forward, pitching down during swing
        ph = u if side == "l" else u + 0.5
        fs = scale["stance_fraction"]
        pitch = np.radians(20.0) * _hump(((ph % 1.0) - fs) / (1.0 - fs))
        put(f"toe_{side}", ax + l_foot * np.cos(pitch), y_leg, az - l_foot * np.sin(pitch))

    # arms: counter-swing relative to the same-side leg
    sh_z = 0.818 * h + bob
    a_hip = np.arcsin(np.clip(scale["cycle_length_m"] / (4.0 * (l_thigh + l_shank)), 0.0, 0.95))
    a_arm = 0.6 * a_hip
    sh_yaw = np.radians(4.0) * np.cos(2.0 * np.pi * u)
    for side, sgn in (("l", 1.0), ("r", -1.0)):
        phase_arm = u if side == "l" else u + 0.5
        swing = -a_arm * np.cos(2.0 * np.pi * phase_arm)
        sx, sy = -sgn * w_sh * np.sin(sh_yaw), sgn * w_sh * np.cos(sh_yaw)
        put(f"shoulder_{side}", sx, 0.4 * sway + sy, sh_z)
        ex = sx + l_uarm * np.sin(swing)
        ez = sh_z - l_uarm * np.cos(swing)
        put(f"elbow_{side}", ex, 0.4 * sway + sy, ez)
        bend = swing + np.radians(30.0) + np.radians(15.0) * (1.0 - np.cos(2.0 * np.pi * phase_arm)) / 2.0
        put(f"wrist_{side}", ex + l_farm * np.sin(bend), 0.4 * sway + sy, ez - l_farm * np.cos(bend))

    return pts if np.ndim(phase) else pts[0]


def _reflectivities(params, positions, rng, radar_position=(0.0, 0.0, 0.0)):
    """sqrt(RCS) at the per-step aspect, with one random phase per point."""
    table = params.ellipsoid_table
    phases = np.exp(2j * np.pi * rng.random(NUM_POINTS))
    los = positions - np.asarray(radar_position)[None, None, :]
    los = los / np.linalg.norm(los, axis=2, keepdims=True)

    vertical = np.array([0.0, 0.0, 1.0])
    eta = np.empty(positions.shape[:2], dtype=complex)
    for q, name in enumerate(POINT_NAMES):
        part = name.rsplit("_", 1)[0]
        long_, t1, t2 = table.get(part, table.get(name, DEFAULT_ELLIPSOIDS[part]))
        parent = SEGMENT_PARENT.get(name)
        if parent is None:
            axis = np.broadcast_to(vertical, positions[:, q, :].shape)
        else:
            seg = positions[:, q, :] - positions[:, POINT_NAMES.index(parent), :]
            norm = np.linalg.norm(seg, axis=1, keepdims=True)
            axis = np.where(norm > 1e-12, seg / np.maximum(norm, 1e-12), vertical)
        cos_axis = np.abs(np.sum(los[:, q, :] * axis, axis=1))
        # default parts are spheroids (t1 == t2); fall back to the general
        # formula only if a user override breaks that symmetry
        if abs(t1 - t2) < 1e-12:
            sigma = _rcs_spheroid_batch(t1, long_, np.clip(cos_axis, 0.0, 1.0))
        else:
            sigma = np.array(
                [
                    rcs_ellipsoid((t1, t2, long_), _los_in_frame(l, a))
                    for l, a in zip(los[:, q, :], axis)
                ]
            )
        eta[:, q] = np.sqrt(sigma) * phases[q]
    return eta


def _los_in_frame(los, axis):
    e3 = axis
    helper = np.array([1.0, 0.0, 0.0]) if abs(e3[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(helper, e3)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(e3, e1)
    return np.array([los @ e1, los @ e2, los @ e3])


def synth_walk(
    params: PedestrianParams,
    duration_s: float,
    timestep_s: float,
    rng,
    radar_position_m=(0.0, 0.0, 0.0),
) -> TrajectoryTensor:
    """Synthesize scatterer tracks for a pedestrian walk.

    Reflectivity aspects are evaluated for a monostatic radar at
    radar_position_m. duration_s must cover at least one gait cycle.
    """
    if timestep_s <= 0:
        raise ParameterError("timestep must be positive")
    scale = gait_scaling(params.height_m, params.speed_mps)
    if duration_s < scale["cycle_duration_s"]:
        raise ParameterError("duration must cover at least one gait cycle")

    n = int(round(duration_s / timestep_s))
    height_stream, speed_stream, heading = apply_distortions(params, n, timestep_s, rng)
    height = float(height_stream[0])  # one height per realization
    if params.distortion.enabled:
        scale = gait_scaling(height, params.speed_mps)

    # gait phase and along-track distance integrate the (possibly varying) speed
    dist = np.concatenate(([0.0], np.cumsum(speed_stream[:-1] * timestep_s)))
    phase = dist / scale["cycle_length_m"]

    offsets = gait_pose(height, params.speed_mps, phase)

    cos_h, sin_h = np.cos(heading), np.sin(heading)
    fwd = np.stack([cos_h, sin_h, np.zeros_like(cos_h)], axis=1)
    left = np.stack([-sin_h, cos_h, np.zeros_like(cos_h)], axis=1)
    up = np.array([0.0, 0.0, 1.0])

    base = np.asarray(params.start_position_m, dtype=float)[None, :] + dist[:, None] * fwd
    positions = (
        base[:, None, :]
        + offsets[:, :, 0, None] * fwd[:, None, :]
        + offsets[:, :, 1, None] * left[:, None, :]
        + offsets[:, :, 2, None] * up[None, None, :]
    )

    velocities = np.gradient(positions, timestep_s, axis=0)
    eta = _reflectivities(params, positions, rng, radar_position_m)

    meta = {
        "gait_model": GAIT_MODEL_TAG,
        "height_m": height,
        "speed_mps": params.speed_mps,
        "direction_deg": params.direction_deg,
        "distortion_enabled": params.distortion.enabled,
        **{k: float(v) for k, v in scale.items()},
    }
    return TrajectoryTensor(timestep_s, positions, velocities, eta, meta)
