"""
Contour Construction

From an m-odd configuration I with even boundary:

    I'  = I plus every odd vertex with no neighbour in I
    R   = component of (odd vertices of I' and their neighbours) containing U_m
    gamma = edges uv with u in R, v outside R, v joined to Z^2 \\ U_n avoiding R
    Gamma = the cycle on gamma built square by square in the dual lattice

Dual vertices (edge midpoints) are stored in doubled coordinates, so the edge
(x, y)-(x, y+1) is the point (2x, 2y+1). Gamma edges change both doubled
coordinates by +-1.
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Iterable, List, Set, Tuple

import networkx as nx

from ..errors import ContourError, InvariantViolation
from ..lattice import Vertex
from ..walkcount import TaxiWalk
from .box_config import BoxConfig, box, in_box, is_even, neighbors, ring

logger = logging.getLogger(__name__)

Edge = Tuple[Vertex, Vertex]  # (u in R, v outside R)
DualPoint = Tuple[int, int]


def midpoint(edge: Edge) -> DualPoint:
    (ux, uy), (vx, vy) = edge
    return ux + vx, uy + vy


@dataclass(frozen=True)
class Contour:
    config: BoxConfig
    augmented: BoxConfig
    region: FrozenSet[Vertex]  # R
    gamma: FrozenSet[Edge]
    graph: nx.Graph  # Gamma on midpoints of gamma
    cycle: Tuple[DualPoint, ...]
    interior: FrozenSet[Vertex]  # W, vertex interior of Gamma

    @property
    def length(self) -> int:
        return len(self.gamma)


def augment(config: BoxConfig) -> BoxConfig:
    """
    I' = I together with each odd vertex that has no neighbour in I.

    Raises:
        ContourError: if I is not independent with even boundary, or not m-odd
    """
    config.validate()
    if not config.is_m_odd():
        raise ContourError("Configuration is not m-odd")
    added = {
        v for v in box(config.n)
        if not is_even(v) and v not in config.occupied and not any(config.contains(w) for w in neighbors(v))
    }
    return config.with_occupied(config.occupied | added)


def _region(augmented: BoxConfig) -> Set[Vertex]:
    odd = [v for v in augmented.occupied if not is_even(v)]
    grown = set(odd)
    for v in odd:
        grown.update(neighbors(v))
    start = Vertex(0, 0)
    if start not in grown:
        raise ContourError("The origin is not in (I^O)^+; the configuration is not m-odd")
    component = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in neighbors(v):
            if w in grown and w not in component:
                component.add(w)
                queue.append(w)
    missing = [v for v in box(augmented.m) if v not in component]
    if missing:
        raise ContourError(f"U_{augmented.m} is not inside one component of (I^O)^+ ({len(missing)} vertices outside)")
    return component


def exterior_fill(n: int, blocked_vertex=None, blocked_edge=None) -> Set[Vertex]:
    """
    Vertices of U_(n+1) joined to Z^2 \\ U_n, flood-filling from the outer ring
    without entering blocked vertices or crossing blocked edges.
    """
    seen = {v for v in ring(n + 1)}
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in neighbors(v):
            if w in seen or not in_box(w, n + 1):
                continue
            if blocked_vertex is not None and w in blocked_vertex:
                continue
            if blocked_edge is not None and (v, w) in blocked_edge:
                continue
            seen.add(w)
            queue.append(w)
    return seen


def _gamma_graph(region: Set[Vertex], gamma: Iterable[Edge]) -> nx.Graph:
    graph = nx.Graph()
    for u, v in gamma:
        graph.add_node(midpoint((u, v)))
        dx, dy = v.x - u.x, v.y - u.y
        for px, py in ((-dy, dx), (dy, -dx)):
            s = Vertex(v.x + px, v.y + py)
            t = Vertex(u.x + px, u.y + py)
            if s in region:
                graph.add_edge(midpoint((u, v)), midpoint((v, s)))
            else:
                graph.add_edge(midpoint((u, v)), midpoint((t, u)))
    return graph


def polygon_interior(cycle: Tuple[DualPoint, ...], n: int) -> FrozenSet[Vertex]:
    """Lattice points of U_(n+1) enclosed by the closed dual polygon (even-odd rule)."""
    edges = list(zip(cycle, cycle[1:] + cycle[:1]))
    inside = set()
    for v in box(n + 1):
        px, py = 2 * v.x, 2 * v.y
        crossings = 0
        for (x1, y1), (x2, y2) in edges:
            if (y1 > py) != (y2 > py):
                # slope is +-1 in doubled coordinates
                x_at = x1 + (py - y1) * (x2 - x1) // (y2 - y1)
                if x_at > px:
                    crossings += 1
        if crossings % 2:
            inside.add(v)
    return frozenset(inside)


def build_contour(config: BoxConfig) -> Contour:
    """
    Contour Gamma of an m-odd configuration.

    Raises:
        ContourError: if the configuration is invalid or U_m is not inside R
        InvariantViolation: if Gamma is not a single cycle on gamma
    """
    augmented = augment(config)
    region = _region(augmented)
    reachable = exterior_fill(config.n, blocked_vertex=region)
    gamma = frozenset(
        (u, v) for u in region for v in neighbors(u)
        if v not in region and v in reachable
    )
    graph = _gamma_graph(region, gamma)

    nodes = {midpoint(e) for e in gamma}
    if set(graph.nodes) != nodes:
        raise InvariantViolation("Gamma has vertices outside gamma")
    degrees = {d for _, d in graph.degree()}
    if degrees != {2}:
        raise InvariantViolation(f"Gamma is not 2-regular (degrees {sorted(degrees)})")
    if not nx.is_connected(graph):
        raise InvariantViolation(f"Gamma has {nx.number_connected_components(graph)} components")

    cycle = tuple(_cut_open(graph))
    contour = Contour(
        config=config,
        augmented=augmented,
        region=frozenset(region),
        gamma=gamma,
        graph=graph,
        cycle=cycle,
        interior=polygon_interior(cycle, config.n),
    )
    logger.debug(f"Contour of length {contour.length} around {len(region)} region vertices")
    return contour


def interior_from_gamma(gamma: Iterable[Edge], n: int) -> FrozenSet[Vertex]:
    """W recovered from gamma alone: U_(n+1) minus what the ring reaches without crossing gamma."""
    return _interior_behind(frozenset(gamma), n)


@lru_cache(maxsize=4096)
def _interior_behind(gamma: FrozenSet[Edge], n: int) -> FrozenSet[Vertex]:
    blocked = set()
    for u, v in gamma:
        blocked.add((u, v))
        blocked.add((v, u))
    outside = exterior_fill(n, blocked_edge=blocked)
    return frozenset(v for v in box(n + 1) if v not in outside)


def vee_apex(graph: nx.Graph) -> Tuple[DualPoint, DualPoint, DualPoint]:
    """(left arm, apex, right arm) of the lowest vee of Gamma."""
    apex = min(graph.nodes, key=lambda p: (p[1], p[0]))
    arms = sorted(graph.neighbors(apex))
    left, right = arms
    if apex[0] % 2 or left[1] != apex[1] + 1 or right[1] != apex[1] + 1:
        raise InvariantViolation(f"Lowest dual vertex {apex} is not the apex of a vee")
    return left, apex, right


def _cut_open(graph: nx.Graph) -> List[DualPoint]:
    """Gamma as a path from the vee apex through its right arm to its left arm."""
    left, apex, right = vee_apex(graph)
    path = [apex, right]
    while path[-1] != left:
        step = [w for w in graph.neighbors(path[-1]) if w != path[-2]]
        if not step or len(path) > graph.number_of_nodes():
            raise InvariantViolation("Gamma does not close up through the vee")
        path.append(step[0])
    return path


def contour_to_taxi_walk(contour: Contour) -> TaxiWalk:
    """
    Remove the edge from the left arm to the apex and carry the rest of Gamma
    to a taxi walk of length |Gamma| - 1 starting at the origin with an east step.

    Raises:
        InvariantViolation: if the image is not a taxi walk
    """
    path = list(contour.cycle)
    ax, ay = path[0]
    vertices = [Vertex(((x - ax) + (y - ay)) // 2, ((x - ax) - (y - ay)) // 2) for x, y in path]
    try:
        walk = TaxiWalk.from_vertices(vertices)
    except Exception as e:
        raise InvariantViolation(f"Cut-open contour is not a taxi walk: {e}") from e
    if walk.length != contour.length - 1:
        raise InvariantViolation("Cut-open contour has the wrong length")
    return walk


def turn_runs(cycle: Tuple[DualPoint, ...]) -> List[Tuple[int, int]]:
    """
    Straight runs of Gamma between turns, as (run length, turn sign) where the
    sign (+1 left, -1 right) is that of the turn ending the run.
    """
    steps = [(b[0] - a[0], b[1] - a[1]) for a, b in zip(cycle, cycle[1:] + cycle[:1])]
    turns = [i for i in range(len(steps)) if steps[i] != steps[i - 1]]
    runs = []
    for k, i in enumerate(turns):
        j = turns[(k + 1) % len(turns)]
        length = (j - i) % len(steps) or len(steps)
        (ax, ay), (bx, by) = steps[j - 1], steps[j]
        runs.append((length, 1 if ax * by - ay * bx > 0 else -1))
    return runs


def turn_pattern_violations(contour: Contour) -> List[str]:
    """
    Gamma never turns twice in a row, and two turns separated by an odd
    straight run have the same sense (opposite senses after an even run).
    """
    runs = turn_runs(contour.cycle)
    problems = []
    for k, (length, sign) in enumerate(runs):
        if length < 2:
            problems.append(f"two consecutive turns at run {k}")
        previous_sign = runs[k - 1][1]
        if (length % 2 == 1) != (sign == previous_sign):
            problems.append(f"run {k} of length {length} breaks the turn-sense parity")
    return problems


def square_rule_violations(contour: Contour) -> List[str]:
    """No side of a unit square is adjacent in Gamma to both sides perpendicular to it."""
    problems = []
    for p in contour.graph.nodes:
        a, b = sorted(contour.graph.neighbors(p))
        vertical = p[0] % 2 == 0
        if (vertical and a[0] == b[0]) or (not vertical and a[1] == b[1]):
            problems.append(f"dual vertex {p} touches two opposite sides of one square")
    return problems


def edge_parity_violations(contour: Contour) -> List[str]:
    """Every gamma edge runs from an even vertex outside I to an odd vertex outside I'."""
    problems = []
    for u, v in contour.gamma:
        if not is_even(u) or contour.config.contains(u):
            problems.append(f"inner end {tuple(u)} is not an empty even vertex")
        if is_even(v) or contour.augmented.contains(v):
            problems.append(f"outer end {tuple(v)} is not an odd vertex outside I'")
    return problems


def interior_violations(contour: Contour) -> List[str]:
    """Inner ends of gamma lie inside Gamma, outer ends outside."""
    return [
        f"edge {tuple(u)}-{tuple(v)} does not cross Gamma from inside to outside"
        for u, v in contour.gamma
        if u not in contour.interior or v in contour.interior
    ]
