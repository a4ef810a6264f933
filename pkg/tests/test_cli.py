import json

import numpy as np
import pytest

from gaitradar.cli import main
from gaitradar.storage import load_cube, load_features_csv


def test_walk_writes_trajectory(tmp_path):
    out = tmp_path / "walk.csv"
    main(["walk", "--duration", "2", "--dt", "0.01", "--seed", "1", "--out", str(out)])
    text = out.read_text().splitlines()
    assert text[0].startswith("# gaitradar-trajectory")
    assert text[1].startswith("time_s,point,x_m")
    assert len(text) == 2 + 200 * 17


def test_beampattern_summary(tmp_path):
    csv_path, json_path = tmp_path / "bp.csv", tmp_path / "bp.json"
    main(
        [
            "beampattern",
            "--config",
            "full3d_8",
            "--step",
            "0.02",
            "--out-csv",
            str(csv_path),
            "--out-json",
            str(json_path),
        ]
    )
    summary = json.loads(json_path.read_text())
    assert summary["hpbw_az_deg"] == pytest.approx(0.39, abs=0.05)
    assert summary["hpbw_el_deg"] == pytest.approx(0.6, abs=0.05)
    assert summary["worst_sidelobe_db_in_fov"] < -6.0
    header = csv_path.read_text().splitlines()[0]
    assert header == "azimuth_deg,elevation_deg,gain_db"


def test_simulate_and_feature_chain(tmp_path):
    traj = tmp_path / "walk.csv"
    main(["walk", "--duration", "3", "--dt", "0.001", "--seed", "2", "--direction", "30", "--out", str(traj)])

    cube_path = tmp_path / "cube.bin"
    spec_path = tmp_path / "spec.csv"
    main(
        [
            "simulate",
            "--config",
            "range_2",
            "--traj",
            str(traj),
            "--snr",
            "15",
            "--out",
            str(cube_path),
            "--spectrogram",
            str(spec_path),
        ]
    )
    cube = load_cube(cube_path)
    assert cube.num_cells == 2 and cube.num_pulses == 2976
    assert spec_path.read_text().startswith("time_s,freq_hz,power_db")

    dict_prefix = tmp_path / "dict"
    main(
        [
            "dict-learn",
            "--cubes",
            str(cube_path),
            "--atoms",
            "8",
            "--xi",
            "0.8",
            "--iters",
            "2",
            "--scale",
            "2.0",
            "--out",
            str(dict_prefix),
        ]
    )
    feats = tmp_path / "features.csv"
    main(
        [
            "features",
            "--cubes",
            str(cube_path),
            "--dict",
            str(dict_prefix),
            "--block-len",
            "992",
            "--xi",
            "0.8",
            "--scale",
            "2.0",
            "--out",
            str(feats),
        ]
    )
    directions, blocks, values = load_features_csv(feats)
    assert len(directions) == 3  # 2976 pulses / 992 per block
    assert np.all(directions == 30.0)
    assert values.shape[1] == 1  # one basic direction block


def test_train_and_evaluate_from_features(tmp_path):
    rng = np.random.default_rng(0)
    rows = ["direction_deg,block_id,beta_1,beta_2"]
    for d in (0.0, 90.0, 180.0, 270.0):
        th = np.radians(d)
        for b in range(6):
            v = np.array([np.sin(th), np.cos(th)]) + rng.normal(0, 0.01, 2)
            rows.append(f"{d},{b},{float(v[0])!r},{float(v[1])!r}")
    feats = tmp_path / "f.csv"
    feats.write_text("\n".join(rows) + "\n")

    model_path = tmp_path / "model.json"
    main(["train", "--features", str(feats), "--method", "svr", "--output-mode", "angle_pair", "--out", str(model_path)])
    out = tmp_path / "results.csv"
    main(["evaluate", "--features", str(feats), "--model", str(model_path), "--out", str(out)])
    lines = out.read_text().splitlines()
    assert len(lines) == 25
    errs = [float(l.split(",")[-1]) for l in lines[1:]]
    assert np.mean(errs) < 10.0


def test_run_subcommand_desk_scale_smoke(tmp_path, monkeypatch):
    # a micro config through the CLI run path
    from gaitradar.harness import ExperimentConfig

    cfg = ExperimentConfig(
        basic_directions_deg=(0.0, 180.0),
        train_directions_deg=(0.0, 90.0, 180.0, 270.0),
        test_directions_deg=(45.0,),
        total_time_s=4.0,
        observation_time_s=1.0,
        realizations_per_direction=2,
        atoms_per_direction=8,
        dict_max_iters=2,
        regularizer=0.8,
        svr_grid=({"kernel": "rbf", "gamma": 0.3, "box_c": 50.0, "tube_eps": 2.0},),
        output_mode="angle_pair",
        master_seed=5,
    )
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(cfg.to_json())
    outdir = tmp_path / "out"
    main(["run", "--config-file", str(cfg_path), "--outdir", str(outdir)])
    assert (outdir / "results.csv").exists()
    assert (outdir / "artifacts" / "model.json").exists()


def test_sweep_subcommand_smoke(tmp_path):
    from gaitradar.harness import ExperimentConfig

    cfg = ExperimentConfig(
        basic_directions_deg=(0.0, 180.0),
        train_directions_deg=(0.0, 90.0, 180.0, 270.0),
        test_directions_deg=(45.0,),
        total_time_s=4.0,
        observation_time_s=1.0,
        realizations_per_direction=2,
        atoms_per_direction=8,
        dict_max_iters=2,
        regularizer=0.8,
        svr_grid=({"kernel": "rbf", "gamma": 0.3, "box_c": 50.0, "tube_eps": 2.0},),
        output_mode="angle_pair",
        master_seed=5,
    )
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(cfg.to_json())
    outdir = tmp_path / "sweepout"
    main(
        [
            "sweep",
            "--config-file",
            str(cfg_path),
            "--axis",
            "radar_config",
            "--values",
            "cw_1",
            "range_2",
            "--outdir",
            str(outdir),
        ]
    )
    lines = (outdir / "summary.csv").read_text().splitlines()
    assert len(lines) == 3
    assert (outdir / "results.csv").exists()
