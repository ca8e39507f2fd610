"""
Fixed communication structures used as comparison points for the learned
hierarchy.
"""
import networkx as nx
import numpy as np

from ..exceptions import ConfigError
from ..util.general import neighbor_matrix
from .structure import (Topology, FULLY_CONNECTED, STAR, NEIGHBORING, TREE,
                        NONE, BASELINE_KINDS, as_positions)


def _neighbor_graph(ids, pos, radius):
    g = nx.Graph()
    g.add_nodes_from(ids)
    if len(ids) > 1:
        nbr, _ = neighbor_matrix(np.stack([pos[i] for i in ids]), radius)
        rows, cols = np.nonzero(np.triu(nbr, 1))
        g.add_edges_from((ids[r], ids[c]) for r, c in zip(rows, cols))
    return g


def _components(g):
    """
    Connected components, ordered by their lowest id
    """
    comps = [tuple(sorted(c)) for c in nx.connected_components(g)]
    return tuple(sorted(comps, key=lambda c: c[0]))


def build_baseline(kind, positions, radius=None):
    """
    Build one of the non-learned structures. Every agent is low-level except
    the star hub.

    Parameters
    ----------
    kind : str
        'fully-connected', 'star', 'neighboring', 'tree' or 'none'
    positions : dict | np.ndarray
        agent id -> (2,) position of every live agent
    radius : float
        neighbourhood radius (required by 'neighboring' and 'tree')

    Returns
    -------
    topology : Topology
    """
    if kind not in BASELINE_KINDS:
        raise ConfigError('unknown baseline topology %r' % kind)
    pos = as_positions(positions)
    ids = sorted(pos)
    agents = frozenset(ids)
    if kind in [NEIGHBORING, TREE] and (radius is None or radius <= 0):
        raise ConfigError('%s topology needs a positive radius' % kind)

    if kind == NONE:
        return Topology(low_level=agents, kind=NONE,
                        groups=tuple((i,) for i in ids))

    if kind == FULLY_CONNECTED:
        edges = {(i, j) for i in ids for j in ids if i != j}
        return Topology(low_level=agents, edges=frozenset(edges),
                        kind=FULLY_CONNECTED,
                        groups=(tuple(ids),) if ids else ())

    if kind == STAR:
        if not ids:
            return Topology(kind=STAR)
        hub = ids[0]
        edges = set()
        for i in ids[1:]:
            edges.add((i, hub))
            edges.add((hub, i))
        return Topology(high_level=frozenset([hub]),
                        low_level=agents - {hub}, edges=frozenset(edges),
                        kind=STAR, groups=(tuple(ids),))

    g = _neighbor_graph(ids, pos, radius)
    groups = _components(g)
    edges = set(g.to_directed().edges())
    if kind == TREE:
        # consecutive groups talk through their lowest-id members
        for a, b in zip(groups[:-1], groups[1:]):
            edges.add((a[0], b[0]))
            edges.add((b[0], a[0]))
    return Topology(low_level=agents, edges=frozenset(edges), kind=kind,
                    groups=groups)
