"""Deterministic 2-D force-directed layout.

Velocity-integrated simulation with the standard trio of forces: pairwise
many-body repulsion, spring forces pulling each edge toward a target
length, and a weak centering pull toward the origin. Every force is scaled
by a temperature alpha that decays geometrically, and the simulation stops
once alpha drops below alpha_min or the iteration budget runs out.

Determinism is a hard requirement: nodes are ordered by sorted id, initial
positions come from a seeded phyllotaxis spiral, and the only randomness —
the jitter that separates coincident nodes — is a pure hash of
(seed, node ids). Identical inputs give bitwise-identical results.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace

import numpy as np

from .graph import GraphEdge, GraphNode

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
INITIAL_RADIUS_STEP = 10.0
COINCIDENCE_EPS = 1e-6


class InvalidGraph(ValueError):
    """Duplicate node ids or an edge referencing a missing node."""


@dataclass(frozen=True)
class LayoutParams:
    seed: int = 42
    repulsion_strength: float = -30.0
    link_distance: float = 60.0
    centering_strength: float = 0.1
    velocity_decay: float = 0.6
    alpha_start: float = 1.0
    alpha_min: float = 0.001
    alpha_decay: float = 0.0228
    max_iterations: int = 300

    def __post_init__(self) -> None:
        if self.repulsion_strength >= 0:
            raise ValueError("repulsion_strength must be negative")
        if self.link_distance <= 0:
            raise ValueError("link_distance must be positive")
        if not 0 < self.centering_strength <= 1:
            raise ValueError("centering_strength must be in (0, 1]")
        if not 0 < self.velocity_decay < 1:
            raise ValueError("velocity_decay must be in (0, 1)")
        if not 0 < self.alpha_decay < 1:
            raise ValueError("alpha_decay must be in (0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


@dataclass(frozen=True)
class LayoutState:
    """One simulation snapshot; topology arrays are shared, never mutated."""

    ids: tuple[str, ...]
    positions: np.ndarray  # (n, 2)
    velocities: np.ndarray  # (n, 2)
    alpha: float
    iterations: int
    converged: bool
    edge_src: np.ndarray  # (m,) indices into ids
    edge_dst: np.ndarray
    link_strength: np.ndarray  # (m,)
    link_bias: np.ndarray  # (m,)


@dataclass(frozen=True)
class LayoutResult:
    positions: dict[str, tuple[float, float]]
    iterations: int
    final_alpha: float


def _hash_floats(*parts: str, count: int) -> list[float]:
    """Deterministic floats in [0, 1) from a string key, platform-stable."""
    digest = hashlib.blake2b("\x1f".join(parts).encode("utf-8"), digest_size=8 * count).digest()
    return [
        int.from_bytes(digest[8 * i : 8 * (i + 1)], "big") / 2**64
        for i in range(count)
    ]


def _pair_jitter(seed: int, id_a: str, id_b: str) -> tuple[float, float]:
    """Sub-micro displacement separating two coincident nodes."""
    lo, hi = sorted((id_a, id_b))
    u, v = _hash_floats(str(seed), lo, hi, count=2)
    angle = 2.0 * math.pi * u
    magnitude = COINCIDENCE_EPS * (0.5 + 0.5 * v)
    return magnitude * math.cos(angle), magnitude * math.sin(angle)


def initialize(
    nodes: list[GraphNode], edges: list[GraphEdge], params: LayoutParams
) -> LayoutState:
    """Validate the graph and place nodes on a seeded phyllotaxis spiral.

    The first node sits exactly at the origin; the i-th sits at radius
    10*sqrt(i) along a golden-angle spiral rotated by a seed-derived
    offset, so different seeds give different (but reproducible) layouts.
    """
    ids = sorted(node.id for node in nodes)
    if len(set(ids)) != len(ids):
        raise InvalidGraph("duplicate node ids")
    index = {node_id: i for i, node_id in enumerate(ids)}
    for edge in edges:
        if edge.source not in index or edge.target not in index:
            raise InvalidGraph(f"edge {edge.source}->{edge.target} references a missing node")

    n = len(ids)
    (rotation_unit,) = _hash_floats(str(params.seed), "rotation", count=1)
    rotation = 2.0 * math.pi * rotation_unit
    positions = np.zeros((n, 2), dtype=np.float64)
    for i in range(n):
        radius = INITIAL_RADIUS_STEP * math.sqrt(i)
        angle = i * GOLDEN_ANGLE + rotation
        positions[i, 0] = radius * math.cos(angle)
        positions[i, 1] = radius * math.sin(angle)

    edge_src = np.array([index[e.source] for e in edges], dtype=np.intp)
    edge_dst = np.array([index[e.target] for e in edges], dtype=np.intp)
    degree = np.zeros(n, dtype=np.float64)
    for i in range(len(edges)):
        degree[edge_src[i]] += 1.0
        degree[edge_dst[i]] += 1.0
    if len(edges):
        src_deg = degree[edge_src]
        dst_deg = degree[edge_dst]
        link_strength = 1.0 / np.minimum(src_deg, dst_deg)
        link_bias = src_deg / (src_deg + dst_deg)
    else:
        link_strength = np.zeros(0, dtype=np.float64)
        link_bias = np.zeros(0, dtype=np.float64)

    return LayoutState(
        ids=tuple(ids),
        positions=positions,
        velocities=np.zeros((n, 2), dtype=np.float64),
        alpha=params.alpha_start,
        iterations=0,
        converged=False,
        edge_src=edge_src,
        edge_dst=edge_dst,
        link_strength=link_strength,
        link_bias=link_bias,
    )


def _apply_link_force(state: LayoutState, pos, vel, alpha: float, params: LayoutParams) -> None:
    if len(state.edge_src) == 0:
        return
    projected = pos + vel
    delta = projected[state.edge_dst] - projected[state.edge_src]
    dist = np.sqrt((delta**2).sum(axis=1))
    for k in np.nonzero(dist < COINCIDENCE_EPS)[0]:
        jx, jy = _pair_jitter(
            params.seed, state.ids[state.edge_src[k]], state.ids[state.edge_dst[k]]
        )
        delta[k] = (jx, jy)
        dist[k] = math.hypot(jx, jy)
    scale = (dist - params.link_distance) / dist * alpha * state.link_strength
    force = delta * scale[:, None]
    np.subtract.at(vel, state.edge_dst, force * state.link_bias[:, None])
    np.add.at(vel, state.edge_src, force * (1.0 - state.link_bias)[:, None])


def _apply_repulsion(state: LayoutState, pos, vel, alpha: float, params: LayoutParams) -> None:
    n = pos.shape[0]
    if n < 2:
        return
    delta = pos[None, :, :] - pos[:, None, :]  # delta[i, j] = pos[j] - pos[i]
    dist_sq = (delta**2).sum(axis=2)
    coincident = np.argwhere(np.triu(dist_sq < COINCIDENCE_EPS**2, k=1))
    for i, j in coincident:
        jx, jy = _pair_jitter(params.seed, state.ids[i], state.ids[j])
        delta[i, j] = (jx, jy)
        delta[j, i] = (-jx, -jy)
        dist_sq[i, j] = dist_sq[j, i] = jx * jx + jy * jy
    # Soften sub-unit distances the same way the classic simulations do,
    # so near-coincident nodes repel strongly but finitely.
    weight = np.where(dist_sq < 1.0, np.sqrt(dist_sq), dist_sq)
    np.fill_diagonal(weight, np.inf)
    w = params.repulsion_strength * alpha / weight
    vel += (delta * w[:, :, None]).sum(axis=1)


def layout_step(state: LayoutState, params: LayoutParams) -> LayoutState:
    """Advance the simulation one iteration; a converged state passes through."""
    if state.alpha < params.alpha_min:
        return replace(state, converged=True)
    alpha = state.alpha + (0.0 - state.alpha) * params.alpha_decay
    pos = state.positions.copy()
    vel = state.velocities.copy()
    _apply_link_force(state, pos, vel, alpha, params)
    _apply_repulsion(state, pos, vel, alpha, params)
    vel += (0.0 - pos) * (params.centering_strength * alpha)
    vel *= params.velocity_decay
    pos += vel
    if not np.isfinite(pos).all():
        raise FloatingPointError("non-finite coordinates during layout")
    return replace(
        state,
        positions=pos,
        velocities=vel,
        alpha=alpha,
        iterations=state.iterations + 1,
    )


def layout(
    nodes: list[GraphNode], edges: list[GraphEdge], params: LayoutParams | None = None
) -> LayoutResult:
    """Run the full simulation and return final node positions.

    Deterministic for a fixed (graph, params): repeated runs produce
    bitwise-identical coordinates.
    """
    params = params or LayoutParams()
    state = initialize(nodes, edges, params)
    if not state.ids:
        return LayoutResult({}, 0, params.alpha_start)
    while state.iterations < params.max_iterations and not state.converged:
        state = layout_step(state, params)
    return LayoutResult(
        positions={
            node_id: (float(state.positions[i, 0]), float(state.positions[i, 1]))
            for i, node_id in enumerate(state.ids)
        },
        iterations=state.iterations,
        final_alpha=state.alpha,
    )
