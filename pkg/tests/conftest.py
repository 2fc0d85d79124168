"""Shared fixtures: tiny graph files and G11-shaped instances."""

import os
from pathlib import Path

import numpy as np
import pytest

from mfanneal.model import WeightedGraph

FIXTURES = Path(__file__).parent / "fixtures"


def toroidal_pm1_graph(rows, cols, seed):
    """Toroidal grid with random +-1 edge weights.

    Shape twin of the 800-node benchmark graphs: every vertex has degree 4,
    so a rows x cols torus has exactly 2 * rows * cols edges.
    """
    rng = np.random.default_rng(seed)
    n = rows * cols
    edges = []
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            for dr, dc in ((0, 1), (1, 0)):
                v = ((r + dr) % rows) * cols + (c + dc) % cols
                w = 1.0 if rng.random() < 0.5 else -1.0
                edges.append((min(u, v), max(u, v), w))
    return WeightedGraph.from_edges(n, edges)


def graph_to_gset_text(g):
    lines = [f"{g.n_vertices} {g.n_edges}"]
    lines += [f"{u + 1} {v + 1} {w:g}" for u, v, w in zip(g.u, g.v, g.w)]
    return "\n".join(lines) + "\n"


@pytest.fixture
def triangle_gset_path():
    return str(FIXTURES / "triangle.gset")


def find_gset_file(name):
    """Locate a real G-set benchmark file, if the user provided one.

    Searched locations: $GSET_DIR/<name> and data/gset/<name> relative to the
    repository root. Returns None when absent.
    """
    candidates = []
    env_dir = os.environ.get("GSET_DIR")
    if env_dir:
        candidates.append(Path(env_dir) / name)
    candidates.append(Path(__file__).resolve().parent.parent / "data" / "gset" / name)
    for path in candidates:
        if path.is_file():
            return path
    return None
