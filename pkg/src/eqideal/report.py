"""Report rendering: figures plus delimited and JSON summaries.

Everything is written into one directory: a CSV of the headline numbers, the
JSON payloads of the presentation and (single-target) degree data, a drawing
of the wedge graph, the fold-schedule size profile, and a degree-membership
chart.  Layouts are deterministic so repeated runs produce identical files.
"""

from __future__ import annotations

import csv
import json
import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import FancyArrowPatch

from .degrees import degree_set, min_degree
from .folding import fold
from .ideal import Problem, build_G, depends, normal_generators, parity_class
from .words import WordError


def _draw_graph(graph, ax, title: str) -> None:
    """Circular layout; parallel edges are separated by arc curvature."""
    V = graph.num_vertices
    pos = {}
    for v in range(V):
        angle = 2 * math.pi * v / max(V, 1)
        pos[v] = (math.cos(angle), math.sin(angle))
    ax.set_title(title)
    ax.set_aspect("equal")
    ax.axis("off")
    seen: dict[tuple[int, int], int] = {}
    for eid, edge in enumerate(graph.edges):
        key = (min(edge.source, edge.target), max(edge.source, edge.target))
        bend = seen.get(key, 0)
        seen[key] = bend + 1
        rad = 0.15 + 0.25 * bend if edge.source != edge.target else 0.0
        src, dst = pos[edge.source], pos[edge.target]
        if edge.source == edge.target:
            # small self-loop drawn as a circle next to the vertex
            cx, cy = src[0] * 1.25, src[1] * 1.25
            loop = plt.Circle((cx, cy), 0.12, fill=False, color="C0")
            ax.add_patch(loop)
            ax.annotate(chr(ord("a") + edge.label - 1), (cx, cy + 0.18),
                        ha="center", fontsize=8)
            continue
        patch = FancyArrowPatch(
            src, dst, connectionstyle="arc3,rad=%.2f" % rad,
            arrowstyle="-|>", mutation_scale=12, color="C0", lw=1.0,
            shrinkA=8, shrinkB=8,
        )
        ax.add_patch(patch)
        mx, my = (src[0] + dst[0]) / 2, (src[1] + dst[1]) / 2
        off = 0.12 * (bend + 1)
        ax.annotate(chr(ord("a") + edge.label - 1), (mx, my + off),
                    ha="center", fontsize=8)
    for v in range(V):
        x, y = pos[v]
        marker = "s" if v == graph.basepoint else "o"
        ax.plot([x], [y], marker=marker, markersize=10,
                color="C3" if v == graph.basepoint else "C2")
        ax.annotate(str(v), (x, y), ha="center", va="center", fontsize=7, color="white")
    ax.set_xlim(-1.6, 1.6)
    ax.set_ylim(-1.6, 1.6)


def render_report(problem: Problem, out_dir: str, *, cap_len: int = 16, jobs: int = 1,
                  relative_ambient: bool = True) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    written: list[str] = []

    pres = normal_generators(problem)
    dep = depends(problem)
    rows: list[tuple[str, str]] = [
        ("ambient_rank", str(problem.n)),
        ("subgroup_generators", "; ".join(str(w) for w in problem.h_generators)),
        ("targets", "; ".join(str(w) for w in problem.g_values)),
        ("depends", str(dep).lower()),
        ("rank_H", str(pres.rank_h)),
        ("rank_Hg", str(pres.rank_hg)),
        ("wedge_edges", str(pres.edge_count)),
        ("h_basis", "; ".join(str(w) for w in pres.h_basis)),
        ("generators", "; ".join(str(w) for w in pres.generators)),
    ]
    if pres.generators:
        rows.append(("parity", parity_class(pres)))

    path = os.path.join(out_dir, "presentation.json")
    with open(path, "w") as fh:
        json.dump(pres.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(path)

    descriptor = None
    if pres.generators and problem.m == 1:
        d_min, witness = min_degree(problem, pres, relative_ambient=relative_ambient)
        descriptor = degree_set(problem, pres, relative_ambient=relative_ambient)
        rows.extend(
            [
                ("d_min", str(d_min)),
                ("witness", str(witness)),
                ("degree_case", descriptor.case),
                ("degree_base", descriptor.base),
                ("exceptional", "; ".join(str(x) for x in sorted(descriptor.exceptional))),
                ("verified_up_to", str(descriptor.verified_up_to)),
            ]
        )
        path = os.path.join(out_dir, "degrees.json")
        with open(path, "w") as fh:
            json.dump(
                {
                    "d_min": d_min,
                    "witness": str(witness),
                    "degree_set": descriptor.to_json_dict(),
                },
                fh,
                indent=2,
                sort_keys=True,
            )
            fh.write("\n")
        written.append(path)

    path = os.path.join(out_dir, "summary.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["key", "value"])
        writer.writerows(rows)
    written.append(path)

    # figures: the wedge (when constructible), the fold profile, the degrees
    try:
        wedge = build_G(problem)
    except WordError:
        wedge = None
    if wedge is not None:
        fig, ax = plt.subplots(figsize=(5, 5))
        _draw_graph(wedge.graph, ax, "wedge of subgroup graph and target petals")
        path = os.path.join(out_dir, "wedge.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

        trace = fold(wedge.graph)
        stages = range(len(trace.steps) + 1)
        verts, edges = [], []
        for s in stages:
            g, _, _ = trace.graph_at(s)
            verts.append(g.num_vertices)
            edges.append(len(g.edges))
        fig, ax = plt.subplots(figsize=(6, 3.5))
        ax.plot(list(stages), verts, marker="o", label="vertices")
        ax.plot(list(stages), edges, marker="s", label="edges")
        ax.axvline(trace.k, color="C3", ls="--", lw=1,
                   label="rank-preserving boundary")
        ax.set_xlabel("fold stage")
        ax.set_ylabel("count")
        ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        path = os.path.join(out_dir, "fold.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    if descriptor is not None:
        upper = descriptor.verified_up_to + 2
        ds = list(range(1, upper + 1))
        member = [1 if descriptor.contains(d) else 0 for d in ds]
        fig, ax = plt.subplots(figsize=(6, 2.8))
        colors = ["C0" if m else "C7" for m in member]
        ax.bar(ds, member, color=colors)
        ax.set_xticks(ds)
        ax.set_yticks([0, 1])
        ax.set_yticklabels(["absent", "present"])
        ax.set_xlabel("degree")
        ax.set_title("degree set (beyond %d by the closure lemma)" % descriptor.verified_up_to)
        fig.tight_layout()
        path = os.path.join(out_dir, "degrees.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    return written
