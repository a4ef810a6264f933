"""File formats: trajectories, slow-time cubes, dictionaries, models, tables.

Formats (all little-endian, documented here and in the README):

  trajectory CSV   header time_s,point,x_m,y_m,z_m,vx_mps,vy_mps,vz_mps,
                   eta_re,eta_im; one row per (timestep, scatterer point).
  cube binary      magic b'GRCUBE01', then uint32 N, uint32 X, float64 pri_s,
                   float64 noise_var, float64 truth_direction_deg, then N*X
                   complex64 values row-major (cells x pulses).
  dictionary       <prefix>.json header {rows, atoms, regularizer, seed,
                   block_labels, basic_directions_deg, schema_version} plus
                   <prefix>.bin float32 atom payload, column-major by atom.
  model JSON       {"model_type": "svr"|"mlp", ...} with flattened weights /
                   support data; see save_model.
  features CSV     direction_deg,block_id,beta_1..beta_C.
  results CSV      direction_deg,snr_db,observation_time_s,config_tag,
                   trial_id,predicted_deg,circ_error_deg.

Floats in CSVs are written with repr (shortest round-trip), which keeps
byte-identical outputs for byte-identical computations.
"""

import json
import struct
from pathlib import Path

import numpy as np

from gaitradar.echo import SlowTimeCube
from gaitradar.errors import ParameterError
from gaitradar.locomotion import POINT_NAMES, TrajectoryTensor
from gaitradar.regress.mlp import MlpModel
from gaitradar.regress.svr import SvrCore, SvrModel
from gaitradar.sparse import Dictionary

CUBE_MAGIC = b"GRCUBE01"
SCHEMA_VERSION = 1


def _fmt(v) -> str:
    return repr(float(v))


# ---------------------------------------------------------------- trajectory


def save_trajectory_csv(path, traj: TrajectoryTensor):
    meta = " ".join(
        f"{k}={traj.metadata[k]!r}"
        for k in ("direction_deg", "height_m", "speed_mps")
        if k in traj.metadata
    )
    lines = [f"# gaitradar-trajectory {meta}".rstrip()]
    lines.append("time_s,point,x_m,y_m,z_m,vx_mps,vy_mps,vz_mps,eta_re,eta_im")
    n_steps, n_pts, _ = traj.positions_m.shape
    for t in range(n_steps):
        ts = _fmt(t * traj.timestep_s)
        for q in range(n_pts):
            p = traj.positions_m[t, q]
            v = traj.velocities_mps[t, q]
            e = traj.reflectivities[t, q]
            name = POINT_NAMES[q] if q < len(POINT_NAMES) else f"p{q}"
            lines.append(
                f"{ts},{name},{_fmt(p[0])},{_fmt(p[1])},{_fmt(p[2])},"
                f"{_fmt(v[0])},{_fmt(v[1])},{_fmt(v[2])},{_fmt(e.real)},{_fmt(e.imag)}"
            )
    Path(path).write_text("\n".join(lines) + "\n")


def load_trajectory_csv(path) -> TrajectoryTensor:
    rows = Path(path).read_text().strip().split("\n")
    meta = {"source": str(path)}
    if rows and rows[0].startswith("#"):
        for token in rows[0].split()[2:]:
            key, _, value = token.partition("=")
            try:
                meta[key] = float(value)
            except ValueError:
                meta[key] = value
        rows = rows[1:]
    header = rows[0].split(",")
    if header[:2] != ["time_s", "point"]:
        raise ParameterError(f"not a trajectory CSV: {path}")
    data = [r.split(",") for r in rows[1:]]
    times = sorted({float(r[0]) for r in data})
    points = list(dict.fromkeys(r[1] for r in data))
    t_index = {v: i for i, v in enumerate(times)}
    q_index = {v: i for i, v in enumerate(points)}
    pos = np.zeros((len(times), len(points), 3))
    vel = np.zeros_like(pos)
    eta = np.zeros((len(times), len(points)), dtype=complex)
    for r in data:
        ti, qi = t_index[float(r[0])], q_index[r[1]]
        pos[ti, qi] = [float(r[2]), float(r[3]), float(r[4])]
        vel[ti, qi] = [float(r[5]), float(r[6]), float(r[7])]
        eta[ti, qi] = float(r[8]) + 1j * float(r[9])
    dt = times[1] - times[0] if len(times) > 1 else 1.0
    return TrajectoryTensor(dt, pos, vel, eta, meta)


# ---------------------------------------------------------------- cube


def save_cube(path, cube: SlowTimeCube):
    n, x = cube.data.shape
    with open(path, "wb") as fh:
        fh.write(CUBE_MAGIC)
        fh.write(struct.pack("<IIddd", n, x, cube.pri_s, cube.noise_var, cube.truth_direction_deg))
        fh.write(np.ascontiguousarray(cube.data.astype(np.complex64)).tobytes())


def load_cube(path) -> SlowTimeCube:
    raw = Path(path).read_bytes()
    if raw[:8] != CUBE_MAGIC:
        raise ParameterError(f"not a cube file: {path}")
    n, x, pri, noise_var, truth = struct.unpack_from("<IIddd", raw, 8)
    data = np.frombuffer(raw, dtype=np.complex64, count=n * x, offset=8 + struct.calcsize("<IIddd"))
    return SlowTimeCube(data.reshape(n, x).astype(complex), pri, noise_var, truth)


# ---------------------------------------------------------------- dictionary


def save_dictionary(prefix, dictionary: Dictionary):
    prefix = Path(prefix)
    header = {
        "schema_version": SCHEMA_VERSION,
        "rows": int(dictionary.num_rows),
        "atoms": int(dictionary.atom_count),
        "regularizer": dictionary.regularizer,
        "seed": dictionary.seed,
        "block_labels": None if dictionary.block_labels is None else [int(v) for v in dictionary.block_labels],
        "basic_directions_deg": None
        if dictionary.basic_directions_deg is None
        else [float(v) for v in dictionary.basic_directions_deg],
    }
    prefix.with_suffix(".json").write_text(json.dumps(header, indent=1))
    payload = np.asfortranarray(dictionary.atoms.astype(np.float32))
    prefix.with_suffix(".bin").write_bytes(payload.tobytes(order="F"))


def load_dictionary(prefix) -> Dictionary:
    prefix = Path(prefix)
    header = json.loads(prefix.with_suffix(".json").read_text())
    rows, atoms = header["rows"], header["atoms"]
    payload = np.frombuffer(prefix.with_suffix(".bin").read_bytes(), dtype=np.float32)
    if payload.size != rows * atoms:
        raise ParameterError("dictionary payload size does not match its header")
    mat = payload.reshape((rows, atoms), order="F").astype(np.float64)
    labels = header.get("block_labels")
    dirs = header.get("basic_directions_deg")
    return Dictionary(
        mat,
        block_labels=None if labels is None else np.asarray(labels, dtype=int),
        basic_directions_deg=None if dirs is None else np.asarray(dirs, dtype=float),
        regularizer=header.get("regularizer", 0.13),
        seed=header.get("seed"),
    )


# ---------------------------------------------------------------- models


def save_model(path, model):
    if isinstance(model, SvrModel):
        doc = {
            "model_type": "svr",
            "schema_version": SCHEMA_VERSION,
            "kernel": model.kernel,
            "gamma": model.gamma,
            "box_c": model.box_c,
            "tube_eps": model.tube_eps,
            "output_mode": model.output_mode,
            "feature_mean": model.feature_mean.tolist(),
            "feature_std": model.feature_std.tolist(),
            "cores": [
                {
                    "support_x": core.support_x.tolist(),
                    "dual_coeffs": core.dual_coeffs.tolist(),
                    "bias": core.bias,
                    "tube_eps": core.tube_eps,
                }
                for core in model.cores
            ],
        }
    elif isinstance(model, MlpModel):
        doc = {
            "model_type": "mlp",
            "schema_version": SCHEMA_VERSION,
            "layer_sizes": model.layer_sizes,
            "output_mode": model.output_mode,
            "feature_mean": model.feature_mean.tolist(),
            "feature_std": model.feature_std.tolist(),
            "target_offset": model.target_offset.tolist(),
            "target_scale": model.target_scale.tolist(),
            "weights": [w.tolist() for w in model.weights],
            "biases": [b.tolist() for b in model.biases],
        }
    else:
        raise ParameterError(f"cannot persist model of type {type(model).__name__}")
    Path(path).write_text(json.dumps(doc))


def load_model(path):
    doc = json.loads(Path(path).read_text())
    if doc["model_type"] == "svr":
        model = SvrModel(
            kernel=doc["kernel"],
            gamma=doc["gamma"],
            box_c=doc["box_c"],
            tube_eps=doc["tube_eps"],
            output_mode=doc["output_mode"],
            feature_mean=np.asarray(doc["feature_mean"]),
            feature_std=np.asarray(doc["feature_std"]),
        )
        for c in doc["cores"]:
            core = SvrCore(model.kernel, model.gamma, model.box_c, c["tube_eps"])
            core.support_x = np.asarray(c["support_x"])
            core.dual_coeffs = np.asarray(c["dual_coeffs"])
            core.bias = c["bias"]
            model.cores.append(core)
        return model
    if doc["model_type"] == "mlp":
        return MlpModel(
            layer_sizes=doc["layer_sizes"],
            weights=[np.asarray(w) for w in doc["weights"]],
            biases=[np.asarray(b) for b in doc["biases"]],
            output_mode=doc["output_mode"],
            feature_mean=np.asarray(doc["feature_mean"]),
            feature_std=np.asarray(doc["feature_std"]),
            target_offset=np.asarray(doc["target_offset"]),
            target_scale=np.asarray(doc["target_scale"]),
        )
    raise ParameterError(f"unknown model type {doc.get('model_type')!r}")


# ---------------------------------------------------------------- tables


def save_features_csv(path, rows):
    """rows: iterable of (direction_deg, block_id, values array)."""
    rows = list(rows)
    if not rows:
        raise ParameterError("no feature rows to write")
    width = len(rows[0][2])
    header = "direction_deg,block_id," + ",".join(f"beta_{i + 1}" for i in range(width))
    lines = [header]
    for direction, block, values in rows:
        lines.append(f"{_fmt(direction)},{int(block)}," + ",".join(_fmt(v) for v in values))
    Path(path).write_text("\n".join(lines) + "\n")


def load_features_csv(path):
    rows = Path(path).read_text().strip().split("\n")
    if not rows[0].startswith("direction_deg,block_id,beta_1"):
        raise ParameterError(f"not a features CSV: {path}")
    directions, blocks, values = [], [], []
    for r in rows[1:]:
        parts = r.split(",")
        directions.append(float(parts[0]))
        blocks.append(int(parts[1]))
        values.append([float(v) for v in parts[2:]])
    return np.asarray(directions), np.asarray(blocks), np.asarray(values)


RESULTS_HEADER = "direction_deg,snr_db,observation_time_s,config_tag,trial_id,predicted_deg,circ_error_deg"


def save_results_csv(path, records):
    lines = [RESULTS_HEADER]
    for r in records:
        snr = "inf" if r["snr_db"] is None or np.isinf(r["snr_db"]) else _fmt(r["snr_db"])
        lines.append(
            f"{_fmt(r['direction_deg'])},{snr},{_fmt(r['observation_time_s'])},"
            f"{r['config_tag']},{int(r['trial_id'])},{_fmt(r['predicted_deg'])},{_fmt(r['circ_error_deg'])}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def save_spectrogram_csv(path, rows):
    lines = ["time_s,freq_hz,power_db"]
    lines.extend(f"{_fmt(t)},{_fmt(f)},{_fmt(p)}" for t, f, p in rows)
    Path(path).write_text("\n".join(lines) + "\n")
