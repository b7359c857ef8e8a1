"""Session containers and on-disk dataset layout.

A session is one recorded play-through: a matrix of per-frame log features,
a biography vector describing the player, and (for training data) a ground
truth affect trace aligned to the frames.

On disk a dataset is a directory with a `dataset.json` index:

    {"sample_rate_hz": 4,
     "sessions": [{"session_id": "s0", "frames": "s0.frames.csv",
                   "biography": "s0.bio.json", "gt": "s0.gt.csv",
                   "split": "train"}, ...]}

Frame files are CSV with header `t_s,<name>,...`; biography files are flat
JSON maps whose values are numbers or lists of numbers (one-hot fields),
vectorized in file key order. Paths are relative to the index file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, LengthMismatch
from .trace import AnnotationTrace, read_trace_csv, write_trace_csv

__all__ = [
    "Session",
    "read_frames_csv",
    "write_frames_csv",
    "read_biography_json",
    "write_biography_json",
    "load_dataset",
    "write_dataset",
]


@dataclass(eq=False)
class Session:
    """One play-through: log features, player biography, optional GT trace."""

    session_id: str
    sample_rate_hz: Fraction
    features: np.ndarray
    feature_names: tuple[str, ...]
    biography: np.ndarray
    biography_names: tuple[str, ...] = ()
    gt: AnnotationTrace | None = None

    def __post_init__(self):
        self.sample_rate_hz = Fraction(self.sample_rate_hz)
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.features.ndim != 2:
            raise DimensionMismatch(f"features must be 2-d, got {self.features.shape}")
        if len(self.feature_names) != self.features.shape[1]:
            raise DimensionMismatch(
                f"{len(self.feature_names)} names for {self.features.shape[1]} features")
        self.biography = np.asarray(self.biography, dtype=np.float64).ravel()
        if self.gt is not None and len(self.gt) != self.n_frames:
            raise LengthMismatch(
                f"GT trace has {len(self.gt)} samples, session has {self.n_frames} frames")

    @property
    def n_frames(self) -> int:
        return self.features.shape[0]

    def feature_column(self, name: str) -> np.ndarray:
        if name not in self.feature_names:
            from .errors import UnknownFeature
            raise UnknownFeature(name)
        return self.features[:, self.feature_names.index(name)]


def write_frames_csv(path, features, feature_names, rate_hz,
                     header_comment: str | None = None) -> None:
    rate = Fraction(rate_hz)
    features = np.asarray(features, dtype=np.float64)
    lines = []
    if header_comment:
        lines.append(f"# {header_comment}")
    lines.append(",".join(["t_s"] + list(feature_names)))
    for idx, row in enumerate(features):
        t = idx / rate
        lines.append(",".join([repr(float(t))] + [repr(float(v)) for v in row]))
    Path(path).write_text("\n".join(lines) + "\n")


def read_frames_csv(path) -> tuple[tuple[str, ...], np.ndarray]:
    """Return (feature_names, (T, d_f) matrix); the t_s column is dropped."""
    rows = []
    names = None
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if names is None:
            cols = line.split(",")
            if cols[0] != "t_s":
                raise ValueError(f"frames CSV must start with t_s column, got {cols[0]!r}")
            names = tuple(cols[1:])
            continue
        rows.append([float(v) for v in line.split(",")[1:]])
    if names is None:
        raise ValueError(f"empty frames CSV: {path}")
    mat = np.asarray(rows, dtype=np.float64).reshape(len(rows), len(names))
    return names, mat


def write_biography_json(path, names, values) -> None:
    payload = {str(n): float(v) for n, v in zip(names, values)}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def read_biography_json(path) -> tuple[tuple[str, ...], np.ndarray]:
    """Vectorize a flat biography map in file key order.

    Scalar values contribute one slot; list values (one-hot fields) are
    flattened with `name[k]` slot names.
    """
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValueError(f"biography must be a JSON object: {path}")
    names: list[str] = []
    values: list[float] = []
    for key, val in data.items():
        if isinstance(val, (list, tuple)):
            for k, item in enumerate(val):
                names.append(f"{key}[{k}]")
                values.append(float(item))
        elif isinstance(val, bool) or isinstance(val, (int, float)):
            names.append(key)
            values.append(float(val))
        else:
            raise ValueError(f"biography field {key!r} is not numeric")
    return tuple(names), np.asarray(values, dtype=np.float64)


def load_dataset(index_path) -> tuple[list[Session], dict[str, str]]:
    """Load every session listed in a dataset index.

    Returns the sessions and a session_id -> split map ("train" when the
    index does not say).
    """
    index_path = Path(index_path)
    index = json.loads(index_path.read_text())
    base = index_path.parent
    rate = Fraction(str(index.get("sample_rate_hz", 4)))
    sessions: list[Session] = []
    splits: dict[str, str] = {}
    for entry in index["sessions"]:
        sid = entry["session_id"]
        if entry.get("frames"):
            feature_names, features = read_frames_csv(base / entry["frames"])
        else:
            feature_names, features = (), np.zeros((0, 0))
        if entry.get("biography"):
            bio_names, bio = read_biography_json(base / entry["biography"])
        else:
            bio_names, bio = (), np.zeros(0)
        gt = None
        if entry.get("gt"):
            gt = read_trace_csv(base / entry["gt"], rate)
        if features.size == 0 and gt is not None:
            # GT-only session (trace corpora); mirror the trace length so
            # alignment checks hold downstream.
            features = np.zeros((len(gt), 0))
            feature_names = ()
        sessions.append(Session(sid, rate, features, feature_names, bio, bio_names, gt))
        splits[sid] = entry.get("split", "train")
    return sessions, splits


def write_dataset(sessions, splits, out_dir, header_comment: str | None = None) -> Path:
    """Write sessions plus a dataset.json index into out_dir; returns index path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    rate = None
    for sess in sessions:
        rate = sess.sample_rate_hz if rate is None else rate
        if sess.sample_rate_hz != rate:
            raise ValueError("all sessions in one dataset must share a sample rate")
        entry: dict = {"session_id": sess.session_id}
        if sess.features.shape[1] > 0:
            fname = f"{sess.session_id}.frames.csv"
            write_frames_csv(out / fname, sess.features, sess.feature_names,
                             rate, header_comment)
            entry["frames"] = fname
        if sess.biography.size > 0:
            bname = f"{sess.session_id}.bio.json"
            write_biography_json(out / bname, sess.biography_names, sess.biography)
            entry["biography"] = bname
        if sess.gt is not None:
            gname = f"{sess.session_id}.gt.csv"
            write_trace_csv(sess.gt, out / gname, header_comment)
            entry["gt"] = gname
        entry["split"] = splits.get(sess.session_id, "train")
        entries.append(entry)
    index = {"sample_rate_hz": str(rate if rate is not None else Fraction(4)),
             "sessions": entries}
    index_path = out / "dataset.json"
    index_path.write_text(json.dumps(index, indent=2, sort_keys=True) + "\n")
    return index_path
