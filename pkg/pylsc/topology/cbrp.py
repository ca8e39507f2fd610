"""
Cluster based routing: every step the agents re-elect leaders from their
communication weights and wire the two-level topology. The distributed
protocol is simulated in synchronous rounds over the neighbour matrix.
"""
import logging
import numpy as np

from ..exceptions import ConvergenceError
from ..util.general import neighbor_matrix
from .structure import (Topology, WeightAssignment, ClusterConfig,
                        HIERARCHICAL, WEIGHT_LEVELS, as_positions)

logger = logging.getLogger(__name__)

HIGH, LOW, UNDECIDED = 0, 1, 2


def fixed_weights(agents, level):
    """
    Assign the same communication weight to every agent

    Parameters
    ----------
    agents : iterable
        agent ids
    level : int
        weight in {0,1,2}

    Returns
    -------
    weights : WeightAssignment
    """
    assert level in WEIGHT_LEVELS
    return WeightAssignment({int(i): int(level) for i in agents})


def _priority(weights, ids):
    # larger weight first, then the lower id
    return [(int(weights[i]), -int(i)) for i in ids]


def _maintain(prev, ids, w, nbr):
    """
    Leaders demote themselves when a neighbouring leader carries a strictly
    larger weight; followers left without a neighbouring leader become
    undecided. Every leader is judged against the leaders present at the
    start of the phase.
    """
    index = {a: k for k, a in enumerate(ids)}
    status = np.full(len(ids), LOW, dtype=np.int64)
    was_high = np.zeros(len(ids), dtype=bool)
    for i in prev.high_level:
        if i in index:
            was_high[index[i]] = True
    for k in np.flatnonzero(was_high):
        rivals = nbr[k] & was_high
        if not np.any(w[rivals] > w[k]):
            status[k] = HIGH
    high = status == HIGH
    for k in range(len(ids)):
        if status[k] == LOW and not np.any(nbr[k] & high):
            status[k] = UNDECIDED
    return status


def _elect(status, key, nbr, cfg):
    """
    Synchronous election rounds. Per round: undecided agents hearing a
    leader join as followers, the rest count one more silent round, and
    those whose priority beats every undecided neighbour after enough silent
    rounds promote themselves. rounds_cap bounds the run of consecutive
    rounds in which no agent changes status.

    Returns
    -------
    status : np.ndarray
    rounds : int
    """
    waited = np.zeros(len(status), dtype=np.int64)
    rounds = 0
    stalled = 0
    while np.any(status == UNDECIDED):
        if stalled >= cfg.rounds_cap:
            raise ConvergenceError(
                'leader election made no progress for %d rounds '
                '(%d agents undecided)'
                % (cfg.rounds_cap, int(np.sum(status == UNDECIDED)))
            )
        rounds += 1
        before = status.copy()
        high = status == HIGH
        undecided = status == UNDECIDED
        for k in np.flatnonzero(undecided):
            if np.any(nbr[k] & high):
                status[k] = LOW
        undecided = status == UNDECIDED
        waited[undecided] += 1
        promote = []
        for k in np.flatnonzero(undecided & (waited >= cfg.max_wait_rounds)):
            rivals = nbr[k] & undecided
            if all(key[k] > key[j] for j in np.flatnonzero(rivals)):
                promote.append(k)
        status[promote] = HIGH
        stalled = 0 if np.any(status != before) else stalled + 1
    return status, rounds


def _link(ids, status, dist, nbr):
    """
    Followers attach to the nearest leader in range (ties to the lower id);
    leaders are fully connected among themselves.

    Returns
    -------
    edges : set
    groups : tuple
    """
    leaders = [k for k in range(len(ids)) if status[k] == HIGH]
    followers = {k: [] for k in leaders}
    edges = set()
    for k in range(len(ids)):
        if status[k] == HIGH:
            continue
        near = [j for j in leaders if nbr[k, j]]
        if not near:
            continue
        j = min(near, key=lambda j: (dist[k, j], ids[j]))
        followers[j].append(k)
        edges.add((ids[k], ids[j]))
        edges.add((ids[j], ids[k]))
    for a in leaders:
        for b in leaders:
            if a != b:
                edges.add((ids[a], ids[b]))
    groups = tuple(
        (ids[j],) + tuple(sorted(ids[k] for k in followers[j]))
        for j in sorted(leaders, key=lambda j: ids[j])
    )
    return edges, groups


def cbrp(prev, weights, positions, cfg=None):
    """
    Run one step of the protocol: maintenance of the previous structure,
    election of new leaders, link generation.

    Parameters
    ----------
    prev : Topology
        structure of the previous step (Topology.empty() at episode start);
        ids absent from 'positions' are ignored, new ids start low-level
    weights : WeightAssignment | dict
        communication weight of every live agent
    positions : dict | np.ndarray
        agent id -> (2,) position of every live agent
    cfg : ClusterConfig

    Returns
    -------
    topology : Topology
        hierarchical topology; no leader has a neighbouring leader of
        strictly larger weight
    """
    if cfg is None:
        cfg = ClusterConfig()
    cfg.validate()
    if prev is None:
        prev = Topology.empty()
    pos = as_positions(positions)
    ids = sorted(pos)
    if not ids:
        return Topology(kind=HIERARCHICAL)
    for i in ids:
        assert weights[i] in WEIGHT_LEVELS, 'agent %d has no weight' % i

    nbr, dist = neighbor_matrix(np.stack([pos[i] for i in ids]), cfg.radius)
    w = np.array([weights[i] for i in ids], dtype=np.int64)
    key = _priority(weights, ids)
    status = _maintain(prev, ids, w, nbr)
    status, rounds = _elect(status, key, nbr, cfg)
    edges, groups = _link(ids, status, dist, nbr)
    logger.debug('cbrp: %d agents, %d leaders after %d election rounds',
                 len(ids), len(groups), rounds)
    return Topology(
        high_level=frozenset(ids[k] for k in range(len(ids))
                             if status[k] == HIGH),
        low_level=frozenset(ids[k] for k in range(len(ids))
                            if status[k] != HIGH),
        edges=frozenset(edges),
        kind=HIERARCHICAL,
        groups=groups
    )
