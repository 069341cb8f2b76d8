"""Command-line entry point for batch workflows.

Subcommands: augment, train, predict, analyze, network, vehicles,
export-geojson, serve. Exit codes: 0 success, 1 usage error, 2 data
error (unreadable or malformed inputs, vehicles that do not fit).

Every batch command writes a run manifest JSON next to its primary
output: the command, its config, seeds, SHA-256 digests of the inputs,
the output paths, the tool version, and the wall-clock duration. Reruns
with identical inputs and seed produce byte-identical outputs; manifests
differ only in their timestamp and duration fields.

Log verbosity comes from the CROSSCLEAR_LOG environment variable
(debug, info, warning; default warning).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .augment import AugmentConfig, build_dataset, write_dataset
from .errors import CrossClearError
from .geodata import export_layers, load_inventory
from .hangup import (
    analyze_crossing,
    analyze_network,
    parse_results_csv,
    results_to_csv,
    rows_to_summary,
    summary_to_json,
)
from .neural import (
    HybridModel,
    ModelConfig,
    TrainConfig,
    evaluate,
    init_params,
    load_checkpoint,
    predict,
    save_checkpoint,
    train,
)
from .profile import (
    DEFAULT_SPACING_M,
    Profile,
    load_imugps,
    load_paired_samples,
    load_profile,
    stations_from_speed,
    write_profile_csv,
)
from .vehicle import (
    Overhang,
    Scenario,
    VehicleGeometry,
    design_vehicle,
    load_bundled_stats,
    parse_dimension_csv,
    stats_to_csv,
    summarize_dimensions,
)

log = logging.getLogger("crossclear")

DEFAULT_SEED = 20240101
_SCENARIO_CHOICES = [s.value for s in Scenario]


class _Parser(argparse.ArgumentParser):
    # Usage problems exit 1; code 2 is reserved for data errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(path: Path, command: str, config: dict, seeds: dict,
                    inputs, outputs, started: float) -> None:
    doc = {
        "command": command,
        "config": config,
        "seeds": seeds,
        "inputs": {str(p): _sha256(Path(p)) for p in inputs},
        "outputs": [str(p) for p in outputs],
        "version": __version__,
        "started_utc": datetime.fromtimestamp(started, timezone.utc).isoformat(),
        "duration_s": round(time.time() - started, 3),
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _load_inventory_profiles(inventory_path: Path):
    """Inventory records plus their profiles, resolved relative to the file."""
    records = load_inventory(inventory_path)
    profiles = []
    for rec in records:
        if not rec.profile_path:
            continue
        prof = load_profile(inventory_path.parent / rec.profile_path)
        profiles.append((rec.crossing_id, Profile(
            prof.stations, prof.elevations, crossing_id=rec.crossing_id)))
    return records, profiles


def _parse_overhang(text: str | None) -> Overhang | None:
    if text is None:
        return None
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"overhang must be LENGTH:CLEARANCE, got {text!r}")
    return Overhang(float(parts[0]), float(parts[1]))


def _vehicle_from_args(args, stats) -> VehicleGeometry:
    if args.vehicle is not None:
        if args.wheelbase is not None or args.clearance is not None:
            raise ValueError("give either --vehicle or explicit dimensions, not both")
        return design_vehicle(stats, args.vehicle, Scenario(args.scenario))
    if args.wheelbase is None or args.clearance is None:
        raise ValueError("need --vehicle TYPE or both --wheelbase and --clearance")
    return VehicleGeometry(
        wheelbase=args.wheelbase,
        clearance_wheelbase=args.clearance,
        front_overhang=_parse_overhang(args.front_overhang),
        rear_overhang=_parse_overhang(args.rear_overhang),
        label="custom",
    )


# --------------------------------------------------------------------------
# subcommand implementations
# --------------------------------------------------------------------------

def _cmd_augment(args) -> int:
    started = time.time()
    manifest = Path(args.manifest)
    samples = load_paired_samples(manifest)
    cfg = AugmentConfig(noise_fraction=args.noise_fraction,
                        noise_realizations_t1=args.t1,
                        noise_realizations_t2=args.t2,
                        seed=args.seed)
    split = build_dataset(samples, cfg)
    out_dir = Path(args.out)
    write_dataset(split, out_dir)
    log.info("augmented %d originals into %d samples", len(samples), len(split))
    print(f"augmented {len(samples)} originals into {len(split)} samples: "
          f"train {len(split.train)}, test {len(split.test)}, "
          f"validation {len(split.validation)}")
    _write_manifest(out_dir / "run-manifest.json", "augment",
                    config=cfg.__dict__, seeds={"seed": args.seed},
                    inputs=[manifest], outputs=[out_dir], started=started)
    return 0


def _load_split_dir(data_dir: Path):
    from .augment import DatasetSplit
    parts = {}
    for part in ("train", "test", "validation"):
        manifest = data_dir / part / "manifest.csv"
        parts[part] = tuple(load_paired_samples(manifest)) if manifest.exists() else ()
    return DatasetSplit(train=parts["train"], test=parts["test"],
                        validation=parts["validation"], split_seed=0)


def _cmd_train(args) -> int:
    started = time.time()
    data_dir = Path(args.data)
    split = _load_split_dir(data_dir)
    model_config = ModelConfig(d_model=args.d_model, num_heads=args.num_heads,
                               num_blocks=args.num_blocks, ff_width=args.ff_width,
                               lstm_hidden=args.lstm_hidden)
    train_config = TrainConfig(learning_rate=args.learning_rate,
                               epochs=args.epochs, batch_size=args.batch_size,
                               seed=args.seed, optimizer=args.optimizer)
    model = HybridModel(model_config, init_params(model_config, args.seed))
    trained, history = train(model, split, train_config)
    out = Path(args.out)
    save_checkpoint(trained, out)
    history_path = out.with_suffix(out.suffix + ".history.json")
    doc = {"model_config": model_config.__dict__,
           "train_config": train_config.__dict__, "history": history}
    if split.test:
        test_rmse, test_mae = evaluate(trained, split.test, train_config.batch_size)
        doc["test_rmse"] = test_rmse
        doc["test_mae"] = test_mae
    history_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                            encoding="utf-8")
    best = min(h["val_rmse"] for h in history)
    print(f"trained {train_config.epochs} epochs; best validation RMSE {best:.6f} m")
    _write_manifest(out.with_suffix(out.suffix + ".manifest.json"), "train",
                    config={**model_config.__dict__, **train_config.__dict__},
                    seeds={"seed": args.seed},
                    inputs=[p for p in [data_dir / s / "manifest.csv"
                                        for s in ("train", "test", "validation")]
                            if p.exists()],
                    outputs=[out, history_path], started=started)
    return 0


def _cmd_predict(args) -> int:
    started = time.time()
    model = load_checkpoint(args.checkpoint)
    seq = load_imugps(args.imu)
    elevations = predict(model, seq.channels)
    stations = stations_from_speed(seq)
    if stations is None:
        log.warning("speed channel is not usable for distance; "
                    "writing row indices as stations")
        stations = np.arange(len(seq), dtype=np.float64)
    out = Path(args.out)
    out.write_text(write_profile_csv(Profile(stations, elevations,
                                             crossing_id=seq.crossing_id)),
                   encoding="utf-8")
    print(f"predicted {len(seq)}-point profile -> {out}")
    _write_manifest(out.with_suffix(out.suffix + ".manifest.json"), "predict",
                    config={"checkpoint": str(args.checkpoint)}, seeds={},
                    inputs=[Path(args.checkpoint), Path(args.imu)],
                    outputs=[out], started=started)
    return 0


def _cmd_analyze(args) -> int:
    profile = load_profile(args.profile)
    stats = load_bundled_stats()
    vehicle = _vehicle_from_args(args, stats)
    result = analyze_crossing(profile, vehicle, spacing=args.spacing)
    doc = {
        "crossing_id": profile.crossing_id,
        "vehicle_label": vehicle.label,
        "delta_min_m": round(result.delta_min, 6),
        "worst_rear_axle_station_m": round(result.worst_rear_axle_station, 6),
        "worst_interference_station_m": round(result.worst_interference_station, 6),
        "level": result.level,
    }
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for key, value in doc.items():
            print(f"{key}: {value}")
    return 0


def _cmd_vehicles(args) -> int:
    if args.summarize:
        records = parse_dimension_csv(Path(args.summarize).read_text(encoding="utf-8"),
                                      source=str(args.summarize))
        stats = summarize_dimensions(records)
    else:
        stats = load_bundled_stats()
    text = stats_to_csv(stats)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(stats.types)} vehicle types -> {args.out}")
    else:
        print(text, end="")
    return 0


def _cmd_network(args) -> int:
    started = time.time()
    inventory_path = Path(args.inventory)
    records, crossings = _load_inventory_profiles(inventory_path)
    if not crossings:
        raise CrossClearError(f"no profiles referenced by {inventory_path}")
    stats = load_bundled_stats()
    if args.types == "all":
        types = stats.types
    else:
        types = [t.strip() for t in args.types.split(",") if t.strip()]
    summary = analyze_network(crossings, stats, Scenario(args.scenario), types,
                              spacing=args.spacing, jobs=args.jobs)
    out = Path(args.out)
    out.write_text(results_to_csv(summary.rows), encoding="utf-8")
    summary_path = Path(args.summary) if args.summary else out.with_suffix(".summary.json")
    summary_path.write_text(summary_to_json(summary), encoding="utf-8")
    for crossing_id, vehicle_type, message in summary.errors:
        log.warning("skipped %s x %s: %s", crossing_id, vehicle_type, message)
    print(f"analyzed {len(summary.worst_level_by_crossing)} crossings x "
          f"{len(types)} vehicle types -> {out}")
    _write_manifest(out.with_suffix(out.suffix + ".manifest.json"), "network",
                    config={"scenario": args.scenario, "types": types,
                            "spacing": args.spacing},
                    seeds={"seed": args.seed},
                    inputs=[inventory_path] + [inventory_path.parent / r.profile_path
                                               for r in records if r.profile_path],
                    outputs=[out, summary_path], started=started)
    return 0


def _cmd_export_geojson(args) -> int:
    started = time.time()
    inventory = load_inventory(args.inventory)
    rows = parse_results_csv(Path(args.results).read_text(encoding="utf-8"),
                             source=str(args.results))
    summary = rows_to_summary(rows)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    for name, text in export_layers(inventory, summary).items():
        path = out_dir / f"{name}.geojson"
        path.write_text(text, encoding="utf-8")
        outputs.append(path)
    print(f"wrote {len(outputs)} GeoJSON layers -> {out_dir}")
    _write_manifest(out_dir / "run-manifest.json", "export-geojson",
                    config={}, seeds={},
                    inputs=[Path(args.inventory), Path(args.results)],
                    outputs=outputs, started=started)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(inventory_path=args.inventory, checkpoint_path=args.checkpoint,
                     spacing=args.spacing)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="crossclear",
                     description="Hang-up risk analysis for grade crossings")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    p = sub.add_parser("augment", help="expand a paired-sample corpus")
    p.add_argument("--manifest", required=True, help="paired-sample manifest CSV")
    p.add_argument("--out", required=True, help="output dataset directory")
    p.add_argument("--noise-fraction", type=float, default=0.04)
    p.add_argument("--t1", type=int, default=42,
                   help="noise realizations per original (technique 1)")
    p.add_argument("--t2", type=int, default=21,
                   help="noisy copies split even/odd (technique 2)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("train", help="fit the profile model on a dataset directory")
    p.add_argument("--data", required=True, help="directory written by augment")
    p.add_argument("--out", required=True, help="checkpoint path")
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--learning-rate", type=float, default=1e-3)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--optimizer", choices=["adam", "sgd"], default="adam")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--d-model", type=int, default=32)
    p.add_argument("--num-heads", type=int, default=4)
    p.add_argument("--num-blocks", type=int, default=1)
    p.add_argument("--ff-width", type=int, default=64)
    p.add_argument("--lstm-hidden", type=int, default=32)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="reconstruct a profile from an IMU-GPS CSV")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--imu", required=True)
    p.add_argument("--out", required=True, help="output profile CSV")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("analyze", help="hang-up analysis of one profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--vehicle", help="bundled vehicle type, e.g. low_boy")
    p.add_argument("--scenario", choices=_SCENARIO_CHOICES, default="worst")
    p.add_argument("--wheelbase", type=float, help="custom wheelbase (m)")
    p.add_argument("--clearance", type=float, help="custom wheelbase clearance (m)")
    p.add_argument("--front-overhang", metavar="LENGTH:CLEARANCE")
    p.add_argument("--rear-overhang", metavar="LENGTH:CLEARANCE")
    p.add_argument("--spacing", type=float, default=DEFAULT_SPACING_M)
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("vehicles", help="print bundled stats or summarize raw CSV")
    p.add_argument("--list", action="store_true", help="print the bundled statistics")
    p.add_argument("--summarize", metavar="RAW_CSV",
                   help="aggregate a raw measurement CSV instead")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=_cmd_vehicles)

    p = sub.add_parser("network", help="batch analysis over an inventory")
    p.add_argument("--inventory", required=True)
    p.add_argument("--scenario", choices=_SCENARIO_CHOICES, required=True)
    p.add_argument("--types", default="all",
                   help='comma-separated type slugs, or "all"')
    p.add_argument("--out", required=True, help="results CSV path")
    p.add_argument("--summary", help="summary JSON path (default: alongside --out)")
    p.add_argument("--spacing", type=float, default=DEFAULT_SPACING_M)
    p.add_argument("--jobs", type=int, default=1, help="worker threads")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_network)

    p = sub.add_parser("export-geojson", help="render results as GeoJSON layers")
    p.add_argument("--inventory", required=True)
    p.add_argument("--results", required=True, help="results CSV from network")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_export_geojson)

    p = sub.add_parser("serve", help="start the HTTP analysis service")
    p.add_argument("--inventory", required=True)
    p.add_argument("--checkpoint", help="model checkpoint for /api/predict")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--spacing", type=float, default=DEFAULT_SPACING_M)
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=getattr(logging, os.environ.get("CROSSCLEAR_LOG", "WARNING").upper(),
                      logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "func", None) is None:
        parser.print_help(sys.stderr)
        return 1
    try:
        return args.func(args)
    except (CrossClearError, OSError, ValueError, KeyError) as exc:
        # KeyError str() is the quoted key; its args[0] is the message.
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"crossclear: error: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
