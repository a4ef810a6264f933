"""Command-line interface.

Subcommands: walk, beampattern, simulate, dict-learn, features, train,
evaluate, run, sweep. Worker count for run/sweep comes from the
GAITRADAR_WORKERS environment variable (default 1).
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from gaitradar import harness, storage
from gaitradar.arrays import SphericalPoint, beam_pattern, default_scan_grid, first_null_extent, half_power_beamwidth, worst_lobe_db
from gaitradar.echo import add_noise, synth_slow_time
from gaitradar.locomotion import DistortionParams, PedestrianParams, synth_walk
from gaitradar.regress import RegressionDataset, circular_error, predict, prob_within, train_mlp, train_svr
from gaitradar.regress.crossval import crossval_2fold
from gaitradar.scenes import CONFIG_TAGS, PRI_S, build_scene
from gaitradar.seeding import substream
from gaitradar.sparse import cube_to_frame_matrix, energy_signature, learn_dictionary, merge_dictionaries, sparse_code
from gaitradar.spectrogram import spectrogram_rows, stft_spectrogram


def _cmd_walk(args):
    params = PedestrianParams(
        height_m=args.height,
        speed_mps=args.speed,
        direction_deg=args.direction,
        distortion=DistortionParams(enabled=args.distort),
    )
    traj = synth_walk(params, args.duration, args.dt, np.random.default_rng(args.seed))
    storage.save_trajectory_csv(args.out, traj)
    print(f"wrote {args.out}: {traj.num_steps} steps x {traj.positions_m.shape[1]} points")


def _cmd_beampattern(args):
    scene = build_scene(args.config, 32)
    az, el = default_scan_grid(step_deg=args.step)
    bp = beam_pattern(scene.tx, scene.rx, SphericalPoint(100.0, args.steer_az, args.steer_el), az, el)
    lines = ["azimuth_deg,elevation_deg,gain_db"]
    for i, e in enumerate(bp.elevation_deg):
        for j, a in enumerate(bp.azimuth_deg):
            lines.append(f"{a!r},{e!r},{bp.gain_db[i, j]!r}")
    Path(args.out_csv).write_text("\n".join(lines) + "\n")
    summary = {
        "hpbw_az_deg": half_power_beamwidth(bp, "azimuth"),
        "hpbw_el_deg": half_power_beamwidth(bp, "elevation"),
        "worst_sidelobe_db_in_fov": worst_lobe_db(
            bp, first_null_extent(bp, "azimuth"), first_null_extent(bp, "elevation")
        ),
    }
    Path(args.out_json).write_text(json.dumps(summary, indent=1))
    print(json.dumps(summary, indent=1))


def _cmd_simulate(args):
    traj = storage.load_trajectory_csv(args.traj)
    total_pulses = (traj.num_steps // 32) * 32
    scene = build_scene(args.config, total_pulses)
    cube = synth_slow_time(scene, traj)
    if args.snr is not None:
        cube = add_noise(cube, args.snr, substream(args.seed, "cli-noise"))
    storage.save_cube(args.out, cube)
    print(f"wrote {args.out}: {cube.num_cells} cells x {cube.num_pulses} pulses, noise_var={cube.noise_var:.3e}")
    if args.spectrogram:
        sig = cube.data[args.cell] if args.cell is not None else cube.data.sum(axis=0)
        times, freqs, power = stft_spectrogram(sig, 1.0 / cube.pri_s, window_len=32, overlap=0.5)
        storage.save_spectrogram_csv(args.spectrogram, spectrogram_rows(times, freqs, power))
        print(f"wrote {args.spectrogram}")


def _cmd_dict_learn(args):
    dicts, directions = [], []
    for path in args.cubes:
        cube = storage.load_cube(path)
        frames = cube_to_frame_matrix(cube.data * args.scale, args.frame_len, 0.5)
        d, _ = learn_dictionary(
            frames,
            args.atoms,
            args.xi,
            max_iters=args.iters,
            rng=substream(args.seed, "cli-dict", Path(path).name),
        )
        dicts.append(d)
        directions.append(cube.truth_direction_deg)
        print(f"{path}: direction {cube.truth_direction_deg} deg, objective {d.objective_history[-1]:.4f}")
    merged = merge_dictionaries(dicts, directions)
    storage.save_dictionary(args.out, merged)
    print(f"wrote {args.out}.json/.bin: {merged.atom_count} atoms over {len(dicts)} directions")


def _cmd_features(args):
    merged = storage.load_dictionary(args.dict)
    gram = np.ascontiguousarray(merged.atoms.T @ merged.atoms)
    rows = []
    for path in args.cubes:
        cube = storage.load_cube(path)
        n_blocks = cube.num_pulses // args.block_len
        for f in range(n_blocks):
            block = cube.data[:, f * args.block_len : (f + 1) * args.block_len] * args.scale
            frames = cube_to_frame_matrix(block, args.frame_len, 0.5)
            codes = sparse_code(merged, frames, args.xi, precomputed_gram=gram)
            sig = energy_signature(codes, merged)
            rows.append((cube.truth_direction_deg, f, sig.values))
    storage.save_features_csv(args.out, rows)
    print(f"wrote {args.out}: {len(rows)} blocks")


def _cmd_train(args):
    directions, _, values = storage.load_features_csv(args.features)
    data = RegressionDataset(values, directions, "regr_train")
    if args.method == "svr":
        grid = [dict(h, output_mode=args.output_mode) for h in harness.DEFAULT_SVR_GRID]
    else:
        grid = [dict(h, output_mode=args.output_mode) for h in harness.DEFAULT_MLP_GRID]
    best, cv_err = crossval_2fold(data, grid, substream(args.seed, "cli-cv"), method=args.method)
    train_fn = train_svr if args.method == "svr" else train_mlp
    model = train_fn(data, best, rng=substream(args.seed, "cli-fit"))
    storage.save_model(args.out, model)
    print(f"wrote {args.out}; cv error {cv_err:.2f} deg with {best}")


def _cmd_evaluate(args):
    directions, blocks, values = storage.load_features_csv(args.features)
    model = storage.load_model(args.model)
    preds = predict(model, values)
    errs = circular_error(directions, preds)
    records = [
        {
            "direction_deg": float(d),
            "snr_db": None,
            "observation_time_s": 0.0,
            "config_tag": "file",
            "trial_id": int(b),
            "predicted_deg": float(p),
            "circ_error_deg": float(e),
        }
        for d, b, p, e in zip(directions, blocks, preds, errs)
    ]
    storage.save_results_csv(args.out, records)
    summary = {"mean_error_deg": float(np.mean(errs)), "prob_within": prob_within(errs)}
    print(json.dumps(summary, indent=1))


def _load_config(args) -> harness.ExperimentConfig:
    if args.config_file:
        cfg = harness.ExperimentConfig.from_json(Path(args.config_file).read_text())
    elif args.desk_scale:
        cfg = harness.desk_scale_config()
    else:
        cfg = harness.ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if getattr(args, "radar", None):
        overrides["config_tag"] = args.radar
    if getattr(args, "snr", "unset") != "unset" and args.snr is not None:
        overrides["snr_db"] = args.snr
    return harness._replace(cfg, **overrides) if overrides else cfg


def _cmd_run(args):
    cfg = _load_config(args)
    result = harness.run_pipeline(cfg, verbose=True)
    outdir = Path(args.outdir)
    harness.write_outputs(result, outdir)
    print(f"mean circular error: {result.mean_error_deg:.2f} deg")
    print(f"wrote {outdir}/results.csv and artifacts/")


def _cmd_sweep(args):
    cfg = _load_config(args)
    values = args.values
    if args.axis in ("snr", "observation_time"):
        values = [None if v == "inf" else float(v) for v in values]
    rows, results = harness.sweep(cfg, args.axis, values, verbose=True)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    harness.save_sweep_csv(outdir / "summary.csv", rows)
    all_records = [r for res in results for r in res.records]
    storage.save_results_csv(outdir / "results.csv", all_records)
    print(f"wrote {outdir}/summary.csv ({len(rows)} rows) and results.csv")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaitradar", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("walk", help="synthesize a pedestrian trajectory CSV")
    w.add_argument("--height", type=float, default=1.8)
    w.add_argument("--speed", type=float, default=1.0)
    w.add_argument("--direction", type=float, default=0.0)
    w.add_argument("--duration", type=float, default=20.0)
    w.add_argument("--dt", type=float, default=PRI_S)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--distort", action="store_true")
    w.add_argument("--out", required=True)
    w.set_defaults(func=_cmd_walk)

    b = sub.add_parser("beampattern", help="scan a configuration's beam pattern")
    b.add_argument("--config", choices=CONFIG_TAGS, default="full3d_8")
    b.add_argument("--step", type=float, default=0.01)
    b.add_argument("--steer-az", type=float, default=0.0)
    b.add_argument("--steer-el", type=float, default=0.0)
    b.add_argument("--out-csv", required=True)
    b.add_argument("--out-json", required=True)
    b.set_defaults(func=_cmd_beampattern)

    s = sub.add_parser("simulate", help="synthesize a slow-time cube from a trajectory")
    s.add_argument("--config", choices=CONFIG_TAGS, default="full3d_8")
    s.add_argument("--traj", required=True)
    s.add_argument("--snr", type=float, default=None, help="SNR in dB (omit for noise-free)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.add_argument("--spectrogram", default=None, help="also write a spectrogram CSV here")
    s.add_argument("--cell", type=int, default=None)
    s.set_defaults(func=_cmd_simulate)

    dl = sub.add_parser("dict-learn", help="learn and merge per-direction dictionaries")
    dl.add_argument("--cubes", nargs="+", required=True)
    dl.add_argument("--atoms", type=int, default=48)
    dl.add_argument("--xi", type=float, default=0.13)
    dl.add_argument("--frame-len", type=int, default=32)
    dl.add_argument("--iters", type=int, default=12)
    dl.add_argument("--scale", type=float, default=1.0)
    dl.add_argument("--seed", type=int, default=0)
    dl.add_argument("--out", required=True, help="output path prefix (.json/.bin)")
    dl.set_defaults(func=_cmd_dict_learn)

    fe = sub.add_parser("features", help="energy signatures of cube blocks")
    fe.add_argument("--cubes", nargs="+", required=True)
    fe.add_argument("--dict", required=True)
    fe.add_argument("--block-len", type=int, default=1000)
    fe.add_argument("--frame-len", type=int, default=32)
    fe.add_argument("--xi", type=float, default=0.13)
    fe.add_argument("--scale", type=float, default=1.0)
    fe.add_argument("--out", required=True)
    fe.set_defaults(func=_cmd_features)

    tr = sub.add_parser("train", help="train a direction regressor from features")
    tr.add_argument("--features", required=True)
    tr.add_argument("--method", choices=("svr", "mlp"), default="svr")
    tr.add_argument("--output-mode", choices=("degrees", "angle_pair"), default="degrees")
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--out", required=True)
    tr.set_defaults(func=_cmd_train)

    ev = sub.add_parser("evaluate", help="score a model on a feature file")
    ev.add_argument("--features", required=True)
    ev.add_argument("--model", required=True)
    ev.add_argument("--out", required=True)
    ev.set_defaults(func=_cmd_evaluate)

    rn = sub.add_parser("run", help="run the full pipeline once")
    rn.add_argument("--config-file", default=None)
    rn.add_argument("--desk-scale", action="store_true")
    rn.add_argument("--seed", type=int, default=None)
    rn.add_argument("--radar", choices=CONFIG_TAGS, default=None)
    rn.add_argument("--snr", type=float, default=None)
    rn.add_argument("--outdir", required=True)
    rn.set_defaults(func=_cmd_run)

    sw = sub.add_parser("sweep", help="sweep SNR, observation time, or radar configuration")
    sw.add_argument("--config-file", default=None)
    sw.add_argument("--desk-scale", action="store_true")
    sw.add_argument("--seed", type=int, default=None)
    sw.add_argument("--radar", choices=CONFIG_TAGS, default=None)
    sw.add_argument("--snr", type=float, default=None)
    sw.add_argument("--axis", choices=("snr", "observation_time", "radar_config"), required=True)
    sw.add_argument("--values", nargs="+", required=True)
    sw.add_argument("--outdir", required=True)
    sw.set_defaults(func=_cmd_sweep)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
