"""File formats: label files, parameter dumps, CSV helpers."""

from __future__ import annotations

import numpy as np

from .worker import ModelParams


def write_labels(labels: np.ndarray, path, original_ids: np.ndarray | None = None) -> None:
    """One 'node_id<TAB>label' line per node; labels in 1..K."""
    labels = np.asarray(labels)
    ids = original_ids if original_ids is not None else np.arange(labels.size)
    with open(path, "w", encoding="utf-8") as fh:
        for i, lab in zip(np.asarray(ids).tolist(), labels.tolist()):
            fh.write(f"{i}\t{lab}\n")


def read_labels(path) -> tuple[np.ndarray, np.ndarray]:
    """Returns (node_ids, labels) in file order."""
    ids, labs = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            a, b = line.split()
            ids.append(int(a))
            labs.append(int(b))
    return np.asarray(ids, dtype=np.int64), np.asarray(labs, dtype=np.int64)


def write_params(params: ModelParams, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"mode {params.mode}\nK {params.K}\n")
        fh.write("pi " + " ".join(repr(x) for x in params.pi.tolist()) + "\n")
        mat = params.lam if params.mode == "sbm" else params.psi
        name = "lambda" if params.mode == "sbm" else "psi"
        for row in mat:
            fh.write(f"{name} " + " ".join(repr(x) for x in row.tolist()) + "\n")
