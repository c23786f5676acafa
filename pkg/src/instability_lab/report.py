"""Corpus reports: a delimited summary plus one rendered figure per entry.

Figures are illustrative only (floats are confined to this module); every
exact value still flows through the JSON envelopes.  Weight states get their
projected hull with the minimum-norm point, splitting types their HN polygon,
binary forms their root-multiplicity profile.
"""

from __future__ import annotations

import csv
import json
import math
import os
from typing import List, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import InputError
from . import binary_forms, bundle_calc, kempf_torus
from .field_tower import parse_tower


def _hull_order(points: List[tuple]) -> List[tuple]:
    # sort by angle around the centroid; fine for the convex position sets we draw
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return sorted(points, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def _plot_kempf(entry: dict, path: str) -> str:
    n = int(entry["n"])
    weights = entry["weights"]
    if isinstance(weights, str):
        weights = json.loads(weights)
    state = kempf_torus.State.of([tuple(int(x) for x in w) for w in weights], n)
    if n not in (2, 3):
        raise InputError("weight-hull figures support n = 2 or 3")
    projected = state.projected()
    if n == 2:
        basis = [(1 / math.sqrt(2), -1 / math.sqrt(2))]
    else:
        basis = [
            (1 / math.sqrt(2), -1 / math.sqrt(2), 0.0),
            (1 / math.sqrt(6), 1 / math.sqrt(6), -2 / math.sqrt(6)),
        ]

    def embed(vec) -> tuple:
        coords = [sum(float(x) * b for x, b in zip(vec, bb)) for bb in basis]
        return (coords[0], coords[1] if len(coords) > 1 else 0.0)

    pts = [embed(w) for w in projected]
    q, _ = kempf_torus.nearest_point_with_certificate(state)
    qx, qy = embed(q)

    fig, ax = plt.subplots(figsize=(5, 5))
    if len(pts) >= 3:
        ring = _hull_order(pts)
        xs = [p[0] for p in ring] + [ring[0][0]]
        ys = [p[1] for p in ring] + [ring[0][1]]
        ax.fill(xs, ys, alpha=0.15, color="tab:blue")
        ax.plot(xs, ys, color="tab:blue", lw=1)
    elif len(pts) == 2:
        ax.plot([pts[0][0], pts[1][0]], [pts[0][1], pts[1][1]], color="tab:blue", lw=1)
    ax.scatter([p[0] for p in pts], [p[1] for p in pts], color="tab:blue", zorder=3,
               label="projected weights")
    ax.scatter([0], [0], marker="+", s=90, color="black", label="origin")
    ax.scatter([qx], [qy], marker="*", s=140, color="tab:red", zorder=4,
               label="min-norm point")
    ax.set_title(f"weight hull, n={n}")
    ax.set_aspect("equal")
    ax.legend(fontsize=8)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return "weight hull rendered"


def _plot_bundle(entry: dict, path: str) -> str:
    degs = entry["degrees"]
    if isinstance(degs, str):
        degs = [int(x) for x in degs.split(",") if x.strip()]
    st = bundle_calc.SplittingType.of(int(d) for d in degs)
    xs, ys = [0], [0]
    for d in st.degrees:
        xs.append(xs[-1] + 1)
        ys.append(ys[-1] + d)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(xs, ys, marker="o", color="tab:green")
    ax.set_xlabel("rank")
    ax.set_ylabel("degree")
    ax.set_title(f"HN polygon of {st}, instability {st.instability_degree()}")
    ax.grid(alpha=0.3)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return "HN polygon rendered"


def _plot_binary_form(entry: dict, path: str) -> str:
    p = int(entry["p"])
    raw = entry["coeffs"]
    if isinstance(raw, str):
        texts = [c.strip() for c in raw.split(",")]
    else:
        texts = [str(c) for c in raw]
    coeffs = list(reversed([parse_tower(t, p) for t in texts]))
    form = binary_forms.BinaryForm(p, coeffs)
    d = max(i for i, c in enumerate(form.coeffs) if not c.is_zero)
    classes = []
    if d >= 1:
        classes.extend(binary_forms.multiplicity_profile(form.dehomogenized()))
    if form.N - d >= 1:
        classes.append(binary_forms.RootClass(binary_forms.AT_INFINITY, form.N - d, 0))
    labels, mults = [], []
    for rc in classes:
        if rc.at_infinity:
            labels.append("[1:0]")
        else:
            label = rc.sep_part.to_text()
            if rc.insep_exp:
                label += f" (e={rc.insep_exp})"
            labels.append(label)
        mults.append(rc.mult)
    fig, ax = plt.subplots(figsize=(max(4, len(labels) * 1.4), 4))
    ax.bar(range(len(mults)), mults, color="tab:purple", alpha=0.8)
    ax.axhline(form.N / 2, color="tab:red", ls="--", lw=1, label="N/2")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("multiplicity")
    ax.set_title(f"root multiplicities, N={form.N}, p={p}")
    ax.legend(fontsize=8)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return "multiplicity profile rendered"


_FIGURES = {
    "kempf": _plot_kempf,
    "bundle": _plot_bundle,
    "binary-form": _plot_binary_form,
}


def render_report(corpus_path: str, out_dir: str, figure_format: str = "png") -> dict:
    """Process a JSON-lines corpus into out_dir/summary.csv plus figures.

    Returns a small summary dict (row and figure counts); per-line failures
    are isolated into the CSV's status column.
    """
    from .cli import _batch_worker  # shares the per-line dispatch and isolation

    try:
        with open(corpus_path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise InputError(f"cannot read {corpus_path}: {exc}") from exc
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "summary.csv")
    figures = 0
    rows = 0
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "subcommand", "status", "figure", "result"])
        for idx, line in enumerate(lines):
            text = line.strip()
            if not text:
                continue
            rows += 1
            envelope = _batch_worker(line)
            status = envelope["status"]
            sub = envelope.get("subcommand", "?")
            figure_name = ""
            if status == "ok" and sub in _FIGURES:
                try:
                    entry = json.loads(text)
                    figure_name = f"fig_{idx:04d}_{sub.replace('-', '_')}.{figure_format}"
                    _FIGURES[sub](entry, os.path.join(out_dir, figure_name))
                    figures += 1
                except InputError:
                    figure_name = ""
            body = envelope.get("result", envelope.get("error"))
            writer.writerow([idx, sub, status, figure_name,
                             json.dumps(body, sort_keys=True)])
    return {"rows": rows, "figures": figures, "csv": csv_path, "out_dir": out_dir}
