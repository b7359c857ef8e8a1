"""Pipeline driver: reproducible runs over a shared JSON config.

Every command reads the same config file (all keys optional, schema
checked), writes artifacts into a run directory, and stamps each artifact
with the sha256 of the resolved config, so identical config + seed yields
byte-identical outputs. Exit codes: 0 success, 2 missing input artifact
(named on stderr), 3 config schema violation.

Run directory layout:

    runs/<id>/
      config.json          resolved config + hash (ingest)
      dataset.json         session index for the run (ingest)
      clusters.json        per-k scan + chosen assignment (cluster)
      checkpoint.json      model weights (train)
      training_log.jsonl   per-epoch loss (train)
      traces/<sid>.<variant>.csv      reconstructions (reconstruct)
      regions/<sid>.<source>.json     region sets (detect / sample)
      report.csv, report.json         metrics (evaluate)
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

try:
    import jsonschema
except ImportError:  # pragma: no cover
    jsonschema = None

from . import clustering, metrics, samplers, synth
from .inflection import (InflectionConfig, detect_regions, detection_indices,
                         read_regions_json, write_regions_json)
from .interpolate import interpolate
from .losses import Cutpoints, bce_prob, oce_probs
from .model import (NetworkConfig, load_checkpoint, reconstruct, save_checkpoint,
                    train, train_regression, write_training_log)
from .sessions import load_dataset, write_dataset
from .trace import (AnnotationTrace, normalize_session, read_trace_csv,
                    write_trace_csv, zero_baseline)

__all__ = ["main", "CONFIG_SCHEMA", "RunConfig"]

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "sample_rate_hz": {"type": ["number", "string"]},
        "cutpoints": {"type": "array", "items": {"type": "number"},
                      "minItems": 2, "maxItems": 2},
        "pairing": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "gap": {"type": "integer", "minimum": 1},
                "eps": {"type": "number", "minimum": 0},
                "balance": {"type": "boolean"},
            },
        },
        "network": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "encoder_layers": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                "latent_dim": {"type": "integer", "minimum": 1},
                "film_hidden": {"type": "integer", "minimum": 1},
                "aux_classes": {"type": "integer", "minimum": 2},
                "use_film": {"type": "boolean"},
                "use_aux": {"type": "boolean"},
                "seed": {"type": "integer", "minimum": 0},
                "optimizer": {"enum": ["sgd", "adam"]},
                "learning_rate": {"type": "number", "exclusiveMinimum": 0},
                "batch_size": {"type": "integer", "minimum": 1},
                "epochs": {"type": "integer", "minimum": 1},
                "alpha": {"type": "number", "minimum": 0},
            },
        },
        "inflection": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "half_window_s": {"type": "number", "exclusiveMinimum": 0},
                "gradient_threshold": {"type": ["number", "null"]},
            },
        },
        "clustering": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "k": {"type": ["integer", "null"], "minimum": 2},
                "k_range": {"type": "array", "items": {"type": "integer", "minimum": 2},
                            "minItems": 2, "maxItems": 2},
                "resample_len": {"type": "integer", "minimum": 2},
                "window": {"type": ["integer", "null"], "minimum": 0},
            },
        },
        "sampling": {
            "type": "object", "additionalProperties": False,
            "properties": {"event_feature": {"type": "string"}},
        },
        "synth": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["world", "flat", "monotone", "archetypes"]},
                "n_train": {"type": "integer", "minimum": 1},
                "n_test": {"type": "integer", "minimum": 0},
                "duration_s": {"type": "number", "exclusiveMinimum": 0},
                "n_per": {"type": "integer", "minimum": 1},
                "noise": {"type": "number", "minimum": 0},
            },
        },
    },
}

_DEFAULTS = {
    "seed": 0,
    "sample_rate_hz": 4,
    "cutpoints": [-1.0, 1.0],
    "pairing": {"gap": 4, "eps": 0.0, "balance": False},
    "network": {},
    "inflection": {"half_window_s": 2.5, "gradient_threshold": None},
    "clustering": {"k": None, "k_range": [2, 7], "resample_len": 128, "window": None},
    "sampling": {"event_feature": "score"},
    "synth": {"kind": "world", "n_train": 60, "n_test": 20, "duration_s": 120.0,
              "n_per": 20, "noise": 0.05},
}


def _fail_missing(name: str) -> "SystemExit":
    print(f"missing artifact: {name}", file=sys.stderr)
    return SystemExit(2)


def _fail_schema(message: str) -> "SystemExit":
    print(f"config schema violation: {message}", file=sys.stderr)
    return SystemExit(3)


@dataclass
class RunConfig:
    """Resolved configuration shared by every command."""

    raw: dict
    config_hash: str

    @property
    def seed(self) -> int:
        return self.raw["seed"]

    @property
    def rate(self) -> Fraction:
        return Fraction(str(self.raw["sample_rate_hz"]))

    @property
    def cuts(self) -> Cutpoints:
        c0, c1 = self.raw["cutpoints"]
        return Cutpoints(c0, c1)

    @property
    def network(self) -> NetworkConfig:
        merged = dict(self.raw["network"])
        merged.setdefault("seed", self.seed)
        return NetworkConfig.from_dict(merged)

    @property
    def inflection(self) -> InflectionConfig:
        inf = self.raw["inflection"]
        return InflectionConfig(inf["half_window_s"], inf["gradient_threshold"])

    @property
    def dtw_params(self) -> clustering.DtwParams:
        return clustering.DtwParams(self.raw["clustering"]["window"])


def load_config(path: str | None, seed_override: int | None = None) -> RunConfig:
    data = {}
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise _fail_missing(str(path))
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as err:
            raise _fail_schema(f"config is not valid JSON: {err}")
    if jsonschema is not None:
        try:
            jsonschema.validate(data, CONFIG_SCHEMA)
        except jsonschema.ValidationError as err:
            raise _fail_schema(err.message)
    resolved = {}
    for key, default in _DEFAULTS.items():
        if isinstance(default, dict):
            merged = dict(default)
            merged.update(data.get(key, {}))
            resolved[key] = merged
        else:
            resolved[key] = data.get(key, default)
    if seed_override is not None:
        resolved["seed"] = seed_override
    canonical = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(canonical.encode()).hexdigest()
    return RunConfig(resolved, digest)


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _run_sessions(run: Path, cfg: RunConfig, split: str | None):
    index = run / "dataset.json"
    if not index.exists():
        raise _fail_missing("dataset.json")
    meta = json.loads(index.read_text())
    source = Path(meta["source"])
    if not source.exists():
        raise _fail_missing(str(source))
    sessions, splits = load_dataset(source)
    if split and split != "all":
        sessions = [s for s in sessions if splits[s.session_id] == split]
    return sessions, splits


def _gt_sessions(sessions):
    out = [s for s in sessions if s.gt is not None]
    if not out:
        raise _fail_missing("ground-truth traces")
    return out


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_synth(args, cfg: RunConfig) -> int:
    out = Path(args.out)
    params = cfg.raw["synth"]
    kind = args.kind or params["kind"]
    seed = cfg.seed
    if kind == "archetypes":
        traces, _labels = synth.make_archetype_corpus(
            n_per=params["n_per"], noise=params["noise"], seed=seed, rate_hz=cfg.rate)
        from .sessions import Session
        sessions = [
            Session(f"a{n:03d}", cfg.rate, np.zeros((len(tr), 0)), (), np.zeros(0), (), tr)
            for n, tr in enumerate(traces)
        ]
        splits = {s.session_id: "train" for s in sessions}
    else:
        maker = {"world": synth.make_world, "flat": synth.make_flat_world,
                 "monotone": synth.make_monotone_world}[kind]
        world = maker(n_train=params["n_train"], n_test=params["n_test"],
                      duration_s=params["duration_s"], rate_hz=cfg.rate, seed=seed)
        sessions, splits = world.all_sessions, world.splits()
    index = write_dataset(sessions, splits, out,
                          header_comment=f"config_hash: {cfg.config_hash}")
    print(f"wrote {len(sessions)} sessions to {index}")
    return 0


def cmd_ingest(args, cfg: RunConfig) -> int:
    data_index = Path(args.data)
    if data_index.is_dir():
        data_index = data_index / "dataset.json"
    if not data_index.exists():
        raise _fail_missing(str(data_index))
    sessions, splits = load_dataset(data_index)
    run = Path(args.run)
    run.mkdir(parents=True, exist_ok=True)
    _write_json(run / "config.json",
                {"config": cfg.raw, "config_hash": cfg.config_hash})
    _write_json(run / "dataset.json", {
        "config_hash": cfg.config_hash,
        "source": str(data_index.resolve()),
        "sessions": [
            {
                "session_id": s.session_id,
                "split": splits[s.session_id],
                "n_frames": s.n_frames,
                "d_f": s.features.shape[1],
                "has_gt": s.gt is not None,
            }
            for s in sessions
        ],
    })
    print(f"ingested {len(sessions)} sessions into {run}")
    return 0


def cmd_cluster(args, cfg: RunConfig) -> int:
    run = Path(args.run)
    sessions, _ = _run_sessions(run, cfg, "train")
    gt_sessions = _gt_sessions(sessions)
    traces = [s.gt for s in gt_sessions]
    ccfg = cfg.raw["clustering"]
    scores = clustering.scan_k(traces, tuple(ccfg["k_range"]), cfg.dtw_params,
                               cfg.seed, ccfg["resample_len"])
    if ccfg["k"] is not None:
        chosen = next((s.assignment for s in scores if s.k == ccfg["k"]), None)
        if chosen is None:
            chosen = clustering.cluster(traces, ccfg["k"], cfg.dtw_params,
                                        cfg.seed, ccfg["resample_len"])
    else:
        best = max(scores, key=lambda s: (s.score, -s.k))
        chosen = best.assignment
    report = clustering.cluster_report(scores, chosen, cfg.config_hash)
    report["session_ids"] = [s.session_id for s in gt_sessions]
    _write_json(run / "clusters.json", report)
    print(f"selected k={chosen.k} (silhouette {chosen.silhouette:.3f}, "
          f"entropy {chosen.entropy:.3f})")
    return 0


def _aux_labels_from_run(run: Path, sessions) -> dict[str, int]:
    clusters_path = run / "clusters.json"
    if not clusters_path.exists():
        raise _fail_missing("clusters.json")
    report = json.loads(clusters_path.read_text())
    labels = dict(zip(report["session_ids"], report["labels"]))
    missing = [s.session_id for s in sessions if s.session_id not in labels]
    if missing:
        raise _fail_missing(f"cluster labels for sessions {missing}")
    return labels


def cmd_train(args, cfg: RunConfig) -> int:
    run = Path(args.run)
    sessions, _ = _run_sessions(run, cfg, "train")
    gt_sessions = _gt_sessions(sessions)
    net = cfg.network
    aux = _aux_labels_from_run(run, gt_sessions) if net.use_aux else None
    pairing = cfg.raw["pairing"]
    if args.regression:
        result = train_regression(gt_sessions, net, aux_labels=aux)
        ckpt, log = "checkpoint_regression.json", "training_log_regression.jsonl"
    else:
        result = train(gt_sessions, net, cuts=cfg.cuts, gap=pairing["gap"],
                       eps=pairing["eps"], balance=pairing["balance"], aux_labels=aux)
        ckpt, log = "checkpoint.json", "training_log.jsonl"
    save_checkpoint(run / ckpt, result.weights, result.config,
                    extra={"config_hash": cfg.config_hash,
                           "d_f": result.d_f, "d_b": result.d_b})
    write_training_log(run / log, result.history, cfg.config_hash)
    print(f"trained {len(result.history)} epochs, "
          f"final loss {result.history[-1]['loss']:.6f}")
    return 0


def _variant_names(regression: bool) -> tuple[str, str]:
    if regression:
        return "checkpoint_regression.json", "regression"
    return "checkpoint.json", "model"


def cmd_reconstruct(args, cfg: RunConfig) -> int:
    run = Path(args.run)
    ckpt_name, variant = _variant_names(args.regression)
    ckpt = run / ckpt_name
    if not ckpt.exists():
        raise _fail_missing(ckpt_name)
    weights, net, _meta = load_checkpoint(ckpt)
    sessions, _ = _run_sessions(run, cfg, args.split)
    out_dir = run / "traces"
    out_dir.mkdir(exist_ok=True)
    for sess in sessions:
        trace = reconstruct(sess, weights, net)
        write_trace_csv(trace, out_dir / f"{sess.session_id}.{variant}.csv",
                        header_comment=f"config_hash: {cfg.config_hash}")
    print(f"reconstructed {len(sessions)} sessions ({variant})")
    return 0


def cmd_detect(args, cfg: RunConfig) -> int:
    # Detection reads traces in the session convention: min-max normalized
    # to [0, 1], so extrema are unchanged and the slope-change threshold is
    # in fraction-of-range units rather than whatever scale a model emits.
    run = Path(args.run)
    sessions, _ = _run_sessions(run, cfg, args.split)
    regions_dir = run / "regions"
    regions_dir.mkdir(exist_ok=True)
    icfg = cfg.inflection
    count = 0
    for sess in sessions:
        if args.gt:
            if sess.gt is None:
                raise _fail_missing(f"GT trace for session {sess.session_id}")
            regions = detect_regions(normalize_session(sess.gt), icfg, source="gt")
            write_regions_json(regions, cfg.rate,
                               regions_dir / f"{sess.session_id}.gt.json",
                               cfg.config_hash)
        else:
            trace_path = run / "traces" / f"{sess.session_id}.{args.variant}.csv"
            if not trace_path.exists():
                raise _fail_missing(f"traces/{sess.session_id}.{args.variant}.csv")
            trace = read_trace_csv(trace_path, cfg.rate)
            regions = detect_regions(normalize_session(trace), icfg,
                                     source=args.variant)
            write_regions_json(regions, cfg.rate,
                               regions_dir / f"{sess.session_id}.{args.variant}.json",
                               cfg.config_hash)
        count += 1
    print(f"detected regions for {count} sessions")
    return 0


def _gt_mean_count(sessions, icfg: InflectionConfig) -> float:
    counts = [detection_indices(normalize_session(s.gt), icfg).size
              for s in sessions]
    return float(np.mean(counts))


def cmd_sample(args, cfg: RunConfig) -> int:
    run = Path(args.run)
    sessions, _ = _run_sessions(run, cfg, args.split)
    gt_sessions = _gt_sessions(sessions)
    regions_dir = run / "regions"
    regions_dir.mkdir(exist_ok=True)
    icfg = cfg.inflection
    mean_count = _gt_mean_count(gt_sessions, icfg)
    for n, sess in enumerate(sessions):
        if args.method == "random":
            regions = samplers.random_regions(sess.n_frames, mean_count, cfg.rate,
                                              seed=cfg.seed + n, config=icfg)
        elif args.method == "uniform":
            regions = samplers.uniform_regions(sess.n_frames, mean_count, cfg.rate,
                                               config=icfg)
        else:
            regions = samplers.rule_based_regions(
                sess, cfg.raw["sampling"]["event_feature"], config=icfg)
        write_regions_json(regions, cfg.rate,
                           regions_dir / f"{sess.session_id}.{args.method}.json",
                           cfg.config_hash)
    print(f"sampled {args.method} regions for {len(sessions)} sessions "
          f"(target count {mean_count:.2f})")
    return 0


def cmd_interpolate(args, cfg: RunConfig) -> int:
    collected_path = Path(args.collected)
    if not collected_path.exists():
        raise _fail_missing(str(collected_path))
    data = json.loads(collected_path.read_text())
    rate = Fraction(str(data.get("sample_rate_hz", cfg.raw["sample_rate_hz"])))
    from .trace import TimeInterval
    regions = [TimeInterval.from_seconds(r["start_s"], r["end_s"], rate)
               for r in data["regions"]]
    pairs = []
    for iv, samples in zip(regions, data["traces"]):
        rel = zero_baseline(AnnotationTrace(samples, rate))
        pairs.append((iv, rel.values))
    values = interpolate(data["total_len"], pairs)
    write_trace_csv(AnnotationTrace(values, rate), args.out,
                    header_comment=f"config_hash: {cfg.config_hash}")
    print(f"interpolated {data['total_len']} samples -> {args.out}")
    return 0


def cmd_evaluate(args, cfg: RunConfig) -> int:
    run = Path(args.run)
    sessions, _ = _run_sessions(run, cfg, args.split)
    gt_sessions = _gt_sessions(sessions)
    regions_dir = run / "regions"
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    rows = []
    per_method_tes: dict[str, list[float]] = {m: [] for m in methods}
    gt_tes = []
    temporal: dict[str, list] = {m: [] for m in methods}
    trace_rows = []
    for sess in gt_sessions:
        gt_path = regions_dir / f"{sess.session_id}.gt.json"
        if not gt_path.exists():
            raise _fail_missing(f"regions/{sess.session_id}.gt.json")
        gt_regions = read_regions_json(gt_path, cfg.rate)
        total = sess.n_frames
        te_gt = metrics.time_efficiency(gt_regions, total)
        gt_tes.append(te_gt)
        for method in methods:
            path = regions_dir / f"{sess.session_id}.{method}.json"
            if not path.exists():
                raise _fail_missing(f"regions/{sess.session_id}.{method}.json")
            pred = read_regions_json(path, cfg.rate)
            f1 = metrics.region_f1(gt_regions, pred, total)
            te = metrics.time_efficiency(pred, total)
            per_method_tes[method].append(te)
            temporal[method].append((sess.session_id, pred, total))
            rows.append({"session_id": sess.session_id, "method": method,
                         "f1": f1, "te": te, "te_gt": te_gt})
        for variant in ("model", "regression"):
            if variant not in methods:
                continue
            trace_path = run / "traces" / f"{sess.session_id}.{variant}.csv"
            if trace_path.exists():
                recon = read_trace_csv(trace_path, cfg.rate)
                trace_rows.append({
                    "session_id": sess.session_id, "method": variant,
                    "ccc": metrics.ccc(sess.gt, recon),
                    "spearman": metrics.spearman_rho(sess.gt, recon),
                    "dtw_similarity": metrics.dtw_similarity(sess.gt, recon),
                })
    aggregate = {}
    for method in methods:
        f1s = [r["f1"] for r in rows if r["method"] == method]
        aggregate[method] = {
            "mean_f1": float(np.mean(f1s)),
            "sd_f1": float(np.std(f1s)),
            "mean_te": float(np.mean(per_method_tes[method])),
            "delta_te": metrics.delta_te(gt_tes, per_method_tes[method]),
            "temporal": {
                k: v for k, v in metrics.temporal_characteristics(
                    temporal[method], cfg.rate)["aggregate"].items()
            },
        }
    report = {"config_hash": cfg.config_hash, "rows": rows,
              "trace_metrics": trace_rows, "aggregate": aggregate,
              "gt_mean_te": float(np.mean(gt_tes))}
    _write_json(run / "report.json", report)
    lines = [f"# config_hash: {cfg.config_hash}", "session_id,method,f1,te,te_gt"]
    for r in rows:
        lines.append(f"{r['session_id']},{r['method']},{r['f1']!r},{r['te']!r},{r['te_gt']!r}")
    (run / "report.csv").write_text("\n".join(lines) + "\n")
    for method in methods:
        agg = aggregate[method]
        print(f"{method}: F1 {agg['mean_f1']:.3f} +/- {agg['sd_f1']:.3f}, "
              f"dTE {agg['delta_te']:.3f}")
    return 0


def cmd_curves(args, cfg: RunConfig) -> int:
    if args.cuts:
        c0, c1 = (float(v) for v in args.cuts.split(","))
        cuts = Cutpoints(c0, c1)
    else:
        cuts = cfg.cuts
    grid = np.linspace(args.lo, args.hi, args.num)
    p0, p1, p2 = oce_probs(grid, cuts)
    bce = bce_prob(grid)
    lines = [f"# config_hash: {cfg.config_hash}", "p_ij,P0,P1,P2,bce"]
    for row in zip(grid, p0, p1, p2, bce):
        lines.append(",".join(repr(float(v)) for v in row))
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"wrote probability curves for cuts ({cuts.c0}, {cuts.c1}) to {args.out}")
    return 0


def cmd_serve(args, cfg: RunConfig) -> int:
    import uvicorn
    from .service import ServiceSession, SessionStore, create_app
    run = Path(args.run)
    sessions, _ = _run_sessions(run, cfg, args.split)
    store = SessionStore()
    for sess in sessions:
        regions_path = run / "regions" / f"{sess.session_id}.{args.variant}.json"
        if not regions_path.exists():
            raise _fail_missing(f"regions/{sess.session_id}.{args.variant}.json")
        regions = [r.interval for r in read_regions_json(regions_path, cfg.rate)]
        store.add(ServiceSession(sess.session_id, cfg.rate, sess.n_frames,
                                 args.condition, regions))
    app = create_app(store, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordaffect",
        description="ordinal affect modeling: train, detect regions, evaluate")
    parser.add_argument("--config", help="run config JSON (defaults apply when omitted)")
    parser.add_argument("--seed", type=int, help="override the config seed")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--kind", choices=["world", "flat", "monotone", "archetypes"])
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", help="index a dataset into a run directory")
    p.add_argument("--data", required=True, help="dataset directory or index file")
    p.add_argument("--run", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("cluster", help="trend-cluster the training GT traces")
    p.add_argument("--run", required=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("train", help="fit the ordinal model (or MSE baseline)")
    p.add_argument("--run", required=True)
    p.add_argument("--regression", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("reconstruct", help="write per-session utility traces")
    p.add_argument("--run", required=True)
    p.add_argument("--split", default="test", choices=["train", "test", "all"])
    p.add_argument("--regression", action="store_true")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("detect", help="detect inflection regions on traces")
    p.add_argument("--run", required=True)
    p.add_argument("--split", default="test", choices=["train", "test", "all"])
    p.add_argument("--variant", default="model", choices=["model", "regression"])
    p.add_argument("--gt", action="store_true",
                   help="detect on ground-truth traces instead of reconstructions")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("sample", help="baseline region samplers")
    p.add_argument("method", choices=["random", "uniform", "rule"])
    p.add_argument("--run", required=True)
    p.add_argument("--split", default="test", choices=["train", "test", "all"])
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("interpolate", help="assemble a trace from region traces")
    p.add_argument("--collected", required=True,
                   help="JSON with total_len, regions, traces")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("evaluate", help="score methods against GT regions")
    p.add_argument("--run", required=True)
    p.add_argument("--split", default="test", choices=["train", "test", "all"])
    p.add_argument("--methods", default="model,random,uniform")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("curves", help="emit class-probability curves as CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--cuts", help="c0,c1 (defaults to config cutpoints)")
    p.add_argument("--lo", type=float, default=-6.0)
    p.add_argument("--hi", type=float, default=6.0)
    p.add_argument("--num", type=int, default=121)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("serve", help="start the annotation session service")
    p.add_argument("--run", required=True)
    p.add_argument("--split", default="test", choices=["train", "test", "all"])
    p.add_argument("--variant", default="model", choices=["model", "regression"])
    p.add_argument("--condition", default="prefab_preview",
                   choices=["full", "prefab_no_preview", "prefab_preview"])
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui", default="frontend/dist")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args.seed)
        return args.func(args, cfg)
    except SystemExit:
        raise
    except FileNotFoundError as err:
        raise _fail_missing(str(err.filename or err))


if __name__ == "__main__":
    sys.exit(main())
