"""End-to-end experiment pipeline and sweeps.

One pipeline run: synthesize walks for the dictionary / regression-training /
test direction sets (disjoint realizations), echo them through one radar
configuration, add noise at the requested SNR, learn per-direction
dictionaries, merge them, extract energy-signature features per observation
block, cross-validate and train the regressor, and score the test blocks.

Randomness is fully derived from config.master_seed through labeled
substreams (see gaitradar.seeding), and results merge in a fixed key order,
so outputs are byte-identical regardless of the worker count
(GAITRADAR_WORKERS, default 1).
"""

import json
import os
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed

from gaitradar.echo import add_noise, synth_slow_time
from gaitradar.errors import ParameterError
from gaitradar.locomotion import DistortionParams, PedestrianParams, synth_walk
from gaitradar.regress import (
    RegressionDataset,
    circular_error,
    crossval_2fold,
    predict,
    prob_within,
    train_mlp,
    train_svr,
)
from gaitradar.scenes import CONFIG_TAGS, PRI_S, build_scene
from gaitradar.seeding import direction_label, substream
from gaitradar.sparse import (
    Dictionary,
    cube_to_frame_matrix,
    energy_signature,
    learn_dictionary,
    merge_dictionaries,
    sparse_code,
)
from gaitradar.spectrogram import spectrogram_rows, stft_spectrogram
from gaitradar.storage import (
    save_dictionary,
    save_features_csv,
    save_model,
    save_results_csv,
    save_spectrogram_csv,
)

# direction sets: training angles are multiples of 10 deg (plus a few x5
# angles shared with the basic sets), test angles sit on the 5-deg offset
# grid, so no test direction is ever trained on; sets are symmetric under
# mirroring and sample the endfire neighborhoods (90/270) more densely
BASIC_12 = (0.0, 30.0, 60.0, 80.0, 90.0, 100.0, 180.0, 210.0, 240.0, 260.0, 270.0, 280.0)
BASIC_8 = (0.0, 35.0, 80.0, 100.0, 180.0, 215.0, 260.0, 280.0)
TRAIN_EXTRA_8 = (20.0, 50.0, 120.0, 150.0, 200.0, 230.0, 300.0, 330.0)
TRAIN_20_DESK = (
    0.0, 10.0, 35.0, 60.0, 80.0, 90.0, 100.0, 120.0, 145.0, 170.0,
    180.0, 190.0, 215.0, 240.0, 260.0, 270.0, 280.0, 300.0, 325.0, 350.0,
)
TEST_36 = tuple(float(v) for v in range(5, 360, 10))

DEFAULT_SVR_GRID = (
    {"kernel": "rbf", "gamma": 0.05, "box_c": 10.0, "tube_eps": 2.0},
    {"kernel": "rbf", "gamma": 0.05, "box_c": 100.0, "tube_eps": 2.0},
    {"kernel": "rbf", "gamma": 0.15, "box_c": 10.0, "tube_eps": 2.0},
    {"kernel": "rbf", "gamma": 0.15, "box_c": 100.0, "tube_eps": 2.0},
    {"kernel": "rbf", "gamma": 0.4, "box_c": 10.0, "tube_eps": 2.0},
    {"kernel": "rbf", "gamma": 0.4, "box_c": 100.0, "tube_eps": 2.0},
    {"kernel": "rbf", "gamma": 1.0, "box_c": 10.0, "tube_eps": 2.0},
    {"kernel": "rbf", "gamma": 1.0, "box_c": 100.0, "tube_eps": 2.0},
    {"kernel": "rbf", "gamma": 2.5, "box_c": 10.0, "tube_eps": 2.0},
    {"kernel": "rbf", "gamma": 2.5, "box_c": 100.0, "tube_eps": 2.0},
)
DEFAULT_MLP_GRID = (
    {"hidden": [32], "learning_rate": 0.05, "epochs": 2000},
    {"hidden": [64], "learning_rate": 0.05, "epochs": 2000},
)


@dataclass
class ExperimentConfig:
    schema_version: int = 1
    config_tag: str = "full3d_8"
    basic_directions_deg: tuple = BASIC_12
    train_directions_deg: tuple = BASIC_12 + TRAIN_EXTRA_8
    test_directions_deg: tuple = TEST_36
    total_time_s: float = 60.0
    observation_time_s: float = 1.0
    # each direction's time budget is split into this many independent walk
    # realizations (fresh reflection phases / distortion draws), so learned
    # features must generalize across realizations rather than memorize one
    realizations_per_direction: int = 4
    snr_db: float = 15.0  # None means noise-free
    frame_len: int = 32
    atoms_per_direction: int = 750
    regularizer: float = 0.13
    overlap_fraction: float = 0.5
    dict_max_iters: int = 25
    dict_tol: float = 1e-4
    coding_gap_tol: float = 1e-8
    regression: str = "svr"
    output_mode: str = "degrees"
    svr_grid: tuple = DEFAULT_SVR_GRID
    mlp_grid: tuple = DEFAULT_MLP_GRID
    pedestrian_height_m: float = 1.8
    pedestrian_speed_mps: float = 1.0
    distortions_enabled: bool = True
    master_seed: int = 0

    def __post_init__(self):
        if self.config_tag not in CONFIG_TAGS:
            raise ParameterError(f"unknown radar configuration {self.config_tag!r}")
        missing = set(self.basic_directions_deg) - set(self.train_directions_deg)
        if missing:
            raise ParameterError(f"training directions must include all basic directions (missing {sorted(missing)})")
        blocks = self.total_time_s / self.observation_time_s
        if abs(blocks - round(blocks)) > 1e-9:
            raise ParameterError("observation time must divide the total time")
        if self.realizations_per_direction < 1:
            raise ParameterError("need at least one realization per direction")
        per_real = round(blocks) / self.realizations_per_direction
        if abs(per_real - round(per_real)) > 1e-9:
            raise ParameterError("realizations must evenly split the observation blocks")

    @property
    def blocks_per_direction(self) -> int:
        return int(round(self.total_time_s / self.observation_time_s))

    @property
    def blocks_per_realization(self) -> int:
        return self.blocks_per_direction // self.realizations_per_direction

    @property
    def realization_time_s(self) -> float:
        return self.total_time_s / self.realizations_per_direction

    @property
    def pulses_per_realization(self) -> int:
        return int(round(self.realization_time_s / PRI_S))

    @property
    def pulses_per_block(self) -> int:
        return int(round(self.observation_time_s / PRI_S))

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1, default=list)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        doc = json.loads(text)
        for key in ("basic_directions_deg", "train_directions_deg", "test_directions_deg"):
            if key in doc:
                doc[key] = tuple(float(v) for v in doc[key])
        for key in ("svr_grid", "mlp_grid"):
            if key in doc:
                doc[key] = tuple(dict(h) for h in doc[key])
        return cls(**doc)


def desk_scale_config(**overrides) -> ExperimentConfig:
    """Reduced-size configuration: 8 basic directions, 20 s per direction.

    The angle-pair output head is enabled by default here because direct
    degree regression folds 359 onto 1 across the wrap and dominates the
    error budget at this training size.
    """
    defaults = dict(
        basic_directions_deg=BASIC_8,
        train_directions_deg=TRAIN_20_DESK,
        total_time_s=20.0,
        realizations_per_direction=10,
        atoms_per_direction=96,
        dict_max_iters=12,
        regularizer=0.8,
        output_mode="angle_pair",
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


def _n_workers() -> int:
    return max(int(os.environ.get("GAITRADAR_WORKERS", "1")), 1)


@dataclass
class PipelineResult:
    config: ExperimentConfig
    records: list
    merged_dictionary: Dictionary
    model: object
    best_hyper: dict
    amplitude_scale: float
    mean_error_deg: float = field(init=False)

    def __post_init__(self):
        errs = [r["circ_error_deg"] for r in self.records]
        self.mean_error_deg = float(np.mean(errs)) if errs else float("nan")

    def errors_by_direction(self) -> dict:
        out = {}
        for r in self.records:
            out.setdefault(r["direction_deg"], []).append(r["circ_error_deg"])
        return {k: np.asarray(v) for k, v in sorted(out.items())}

    def rmse_by_direction(self) -> dict:
        return {k: float(np.sqrt(np.mean(v**2))) for k, v in self.errors_by_direction().items()}

    def mean_rmse_deg(self) -> float:
        per_dir = self.rmse_by_direction()
        return float(np.mean(list(per_dir.values())))

    def prob_within(self, thresholds=(5.0, 10.0, 15.0, 20.0)) -> dict:
        errs = np.asarray([r["circ_error_deg"] for r in self.records])
        return prob_within(errs, thresholds)


def _pedestrian(config: ExperimentConfig, direction: float) -> PedestrianParams:
    return PedestrianParams(
        height_m=config.pedestrian_height_m,
        speed_mps=config.pedestrian_speed_mps,
        direction_deg=direction,
        distortion=DistortionParams(enabled=config.distortions_enabled),
    )


def _cube_key(config: ExperimentConfig, role: str, direction: float, realization: int):
    return (
        "cube",
        config.config_tag,
        role,
        direction_label(direction),
        realization,
        config.pulses_per_realization,
        config.master_seed,
    )


def _clean_cube(config: ExperimentConfig, role: str, direction: float, realization: int):
    """Trajectory and noise-free cube for one (role, direction, realization)."""
    rng = substream(config.master_seed, "traj", role, direction_label(direction), realization)
    traj = synth_walk(_pedestrian(config, direction), config.realization_time_s, PRI_S, rng)
    scene = build_scene(config.config_tag, config.pulses_per_realization)
    return synth_slow_time(scene, traj)


def _all_jobs(config: ExperimentConfig):
    pairs = (
        [("dict", d) for d in config.basic_directions_deg]
        + [("train", d) for d in config.train_directions_deg]
        + [("test", d) for d in config.test_directions_deg]
    )
    return [(role, d, r) for role, d in pairs for r in range(config.realizations_per_direction)]


def _ensure_clean_cubes(config: ExperimentConfig, jobs_list, cache, jobs):
    missing = [
        (role, direction, r)
        for role, direction, r in jobs_list
        if _cube_key(config, role, direction, r) not in cache
    ]
    if missing:
        built = Parallel(n_jobs=jobs)(
            delayed(_clean_cube)(config, role, direction, r) for role, direction, r in missing
        )
        for (role, direction, r), cube in zip(missing, built):
            cache[_cube_key(config, role, direction, r)] = cube


def _noisy_cube(config: ExperimentConfig, role: str, direction: float, realization: int, cache):
    key = _cube_key(config, role, direction, realization)
    if key not in cache:
        cache[key] = _clean_cube(config, role, direction, realization)
    snr = config.snr_db
    snr_label = "inf" if snr is None or np.isinf(snr) else repr(float(snr))
    rng = substream(
        config.master_seed,
        "noise",
        config.config_tag,
        role,
        direction_label(direction),
        realization,
        snr_label,
    )
    return add_noise(cache[key], np.inf if snr is None else snr, rng)


def _learn_direction_dictionary(config: ExperimentConfig, direction: float, cube_blocks, scale: float):
    frames = np.hstack(
        [cube_to_frame_matrix(data * scale, config.frame_len, config.overlap_fraction) for data in cube_blocks]
    )
    rng = substream(config.master_seed, "dictinit", direction_label(direction))
    d, _ = learn_dictionary(
        frames,
        config.atoms_per_direction,
        config.regularizer,
        max_iters=config.dict_max_iters,
        tol=config.dict_tol,
        rng=rng,
        gap_tol=config.coding_gap_tol,
    )
    return d


def _block_features(config: ExperimentConfig, atoms, labels, directions, gram, direction, realization, cube_data, scale):
    """Energy signature of every observation block in one realization."""
    merged = Dictionary(atoms, block_labels=labels, basic_directions_deg=directions, regularizer=config.regularizer)
    x_t = config.pulses_per_block
    rows = []
    for f in range(config.blocks_per_realization):
        block = cube_data[:, f * x_t : (f + 1) * x_t] * scale
        frames = cube_to_frame_matrix(block, config.frame_len, config.overlap_fraction)
        codes = sparse_code(
            merged, frames, config.regularizer, gap_tol=config.coding_gap_tol, precomputed_gram=gram
        )
        sig = energy_signature(codes, merged)
        trial = realization * config.blocks_per_realization + f
        rows.append((direction, trial, sig.values, realization))
    return rows


def run_pipeline(config: ExperimentConfig, cache=None, verbose=False) -> PipelineResult:
    """Execute the full estimation pipeline for one configuration point."""
    cache = cache if cache is not None else {}
    jobs = _n_workers()
    t_start = time.time()

    def log(msg):
        if verbose:
            print(f"[{config.config_tag} +{time.time() - t_start:6.1f}s] {msg}", flush=True)

    jobs_list = _all_jobs(config)
    log(f"synthesizing echoes for {len(jobs_list)} walks")
    _ensure_clean_cubes(config, jobs_list, cache, jobs)

    # dictionary-training cubes fix the global amplitude calibration, so the
    # regularizer acts on a consistent scale across radar configurations
    reals = range(config.realizations_per_direction)
    dict_cubes = {
        (d, r): _noisy_cube(config, "dict", d, r, cache) for d in config.basic_directions_deg for r in reals
    }
    power = float(np.mean([np.mean(np.abs(c.data) ** 2) for c in dict_cubes.values()]))
    if power <= 0:
        raise ParameterError("dictionary training echoes carry no energy")
    scale = 1.0 / np.sqrt(power)

    log(f"learning {len(config.basic_directions_deg)} dictionaries")
    dicts = Parallel(n_jobs=jobs)(
        delayed(_learn_direction_dictionary)(config, d, [dict_cubes[(d, r)].data for r in reals], scale)
        for d in config.basic_directions_deg
    )
    merged = merge_dictionaries(dicts, config.basic_directions_deg)
    gram = np.ascontiguousarray(merged.atoms.T @ merged.atoms)

    log("extracting features")
    feature_jobs = [("train", d, r) for d in config.train_directions_deg for r in reals] + [
        ("test", d, r) for d in config.test_directions_deg for r in reals
    ]
    all_rows = Parallel(n_jobs=jobs)(
        delayed(_block_features)(
            config,
            merged.atoms,
            merged.block_labels,
            merged.basic_directions_deg,
            gram,
            d,
            r,
            _noisy_cube(config, role, d, r, cache).data,
            scale,
        )
        for role, d, r in feature_jobs
    )
    n_train = len(config.train_directions_deg) * config.realizations_per_direction
    train_rows = [row for rows in all_rows[:n_train] for row in rows]
    test_rows = [row for rows in all_rows[n_train:] for row in rows]

    train_data = RegressionDataset(
        np.stack([r[2] for r in train_rows]), np.array([r[0] for r in train_rows]), "regr_train"
    )
    train_groups = np.array([r[3] for r in train_rows])

    log("cross-validating and training the regressor")
    grid = list(config.svr_grid if config.regression == "svr" else config.mlp_grid)
    grid = [dict(h, output_mode=config.output_mode) for h in grid]
    best, _ = crossval_2fold(
        train_data, grid, substream(config.master_seed, "cv"), method=config.regression, groups=train_groups
    )
    train_fn = train_svr if config.regression == "svr" else train_mlp
    model = train_fn(train_data, best, rng=substream(config.master_seed, "fit"))

    preds = predict(model, np.stack([r[2] for r in test_rows]))
    records = []
    for (direction, trial, _, _), pred in zip(test_rows, preds):
        records.append(
            {
                "direction_deg": float(direction),
                "snr_db": config.snr_db,
                "observation_time_s": config.observation_time_s,
                "config_tag": config.config_tag,
                "trial_id": int(trial),
                "predicted_deg": float(pred),
                "circ_error_deg": float(circular_error(direction, pred)),
            }
        )
    records.sort(key=lambda r: (r["direction_deg"], r["trial_id"]))
    result = PipelineResult(config, records, merged, model, best, scale)
    result._train_rows = [(d, t, v) for d, t, v, _ in train_rows]
    result._test_rows = [(d, t, v) for d, t, v, _ in test_rows]
    log(f"mean circular error {result.mean_error_deg:.2f} deg")
    return result


SWEEP_HEADER = "axis,value,config_tag,snr_db,observation_time_s,mean_rmse_deg,mean_error_deg,std_error_deg,p_lt_5,p_lt_10,p_lt_15,p_lt_20"


def sweep(config: ExperimentConfig, axis: str, values, cache=None, verbose=False):
    """Run the pipeline across one swept axis; returns (rows, results)."""
    values = list(values)
    if not values:
        raise ParameterError("sweep grid must be nonempty")
    cache = cache if cache is not None else {}
    rows, results = [], []
    for v in values:
        if axis == "snr":
            cfg = _replace(config, snr_db=None if v in ("inf", None) else float(v))
        elif axis == "observation_time":
            cfg = _replace(config, observation_time_s=float(v))
        elif axis == "radar_config":
            cfg = _replace(config, config_tag=str(v))
        else:
            raise ParameterError(f"unknown sweep axis {axis!r}")
        res = run_pipeline(cfg, cache=cache, verbose=verbose)
        errs = np.asarray([r["circ_error_deg"] for r in res.records])
        pw = res.prob_within()
        rows.append(
            {
                "axis": axis,
                "value": "inf" if v is None else v,
                "config_tag": cfg.config_tag,
                "snr_db": "inf" if cfg.snr_db is None else cfg.snr_db,
                "observation_time_s": cfg.observation_time_s,
                "mean_rmse_deg": res.mean_rmse_deg(),
                "mean_error_deg": float(np.mean(errs)),
                "std_error_deg": float(np.std(errs)),
                "p_lt_5": pw[5.0],
                "p_lt_10": pw[10.0],
                "p_lt_15": pw[15.0],
                "p_lt_20": pw[20.0],
            }
        )
        results.append(res)
    return rows, results


def _replace(config: ExperimentConfig, **kw) -> ExperimentConfig:
    doc = asdict(config)
    doc.update(kw)
    for key in ("basic_directions_deg", "train_directions_deg", "test_directions_deg"):
        doc[key] = tuple(doc[key])
    for key in ("svr_grid", "mlp_grid"):
        doc[key] = tuple(dict(h) for h in doc[key])
    return ExperimentConfig(**doc)


def save_sweep_csv(path, rows):
    def fmt(v):
        if isinstance(v, str):
            return v
        if isinstance(v, float):
            return repr(v)
        return str(v)

    lines = [SWEEP_HEADER]
    for r in rows:
        lines.append(",".join(fmt(r[k]) for k in SWEEP_HEADER.split(",")))
    Path(path).write_text("\n".join(lines) + "\n")


def write_outputs(result: PipelineResult, outdir):
    """Persist results.csv plus artifacts/ for one pipeline run."""
    outdir = Path(outdir)
    art = outdir / "artifacts"
    art.mkdir(parents=True, exist_ok=True)
    save_results_csv(outdir / "results.csv", result.records)
    (outdir / "config.json").write_text(result.config.to_json())
    save_dictionary(art / "merged_dictionary", result.merged_dictionary)
    save_model(art / "model.json", result.model)
    save_features_csv(art / "train_features.csv", result._train_rows)
    save_features_csv(art / "test_features.csv", result._test_rows)
    (art / "calibration.json").write_text(
        json.dumps({"amplitude_scale": result.amplitude_scale, "best_hyper": result.best_hyper})
    )


def export_spectrogram(config: ExperimentConfig, direction: float, path, cell=None, cache=None):
    """Slow-time spectrogram CSV of one direction (sum over cells by default)."""
    cube = _noisy_cube(config, "dict", direction, 0, cache if cache is not None else {})
    sig = cube.data[cell] if cell is not None else cube.data.sum(axis=0)
    times, freqs, power = stft_spectrogram(sig, 1.0 / PRI_S, window_len=config.frame_len, overlap=0.5)
    save_spectrogram_csv(path, spectrogram_rows(times, freqs, power))
    return times, freqs, power
