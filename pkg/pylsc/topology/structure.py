"""
Communication structure types: the topology (leader/follower partition plus
directed edges), communication weights, protocol configuration and the cost
report.
"""
from dataclasses import dataclass, field
from typing import Tuple
import networkx as nx
import numpy as np

from ..exceptions import ConfigError
from ..parameters import Parameters
from ..util.general import neighbor_matrix

__all__ = ['HIERARCHICAL', 'FULLY_CONNECTED', 'STAR', 'NEIGHBORING', 'TREE',
           'NONE', 'KINDS', 'BASELINE_KINDS', 'WEIGHT_LEVELS', 'ClusterConfig',
           'WeightAssignment', 'Topology', 'CostReport', 'check_topology',
           'as_positions']

HIERARCHICAL = 'hierarchical'
FULLY_CONNECTED = 'fully-connected'
STAR = 'star'
NEIGHBORING = 'neighboring'
TREE = 'tree'
NONE = 'none'
KINDS = (HIERARCHICAL, FULLY_CONNECTED, STAR, NEIGHBORING, TREE, NONE)
BASELINE_KINDS = (FULLY_CONNECTED, STAR, NEIGHBORING, TREE, NONE)
WEIGHT_LEVELS = (0, 1, 2)

PM = Parameters()


@dataclass
class ClusterConfig:
    """
    Parameters
    ----------
    radius : float
        cluster radius d; agents strictly closer are neighbours
    max_wait_rounds : int
        rounds an undecided agent listens before it may claim leadership
    rounds_cap : int
        consecutive election rounds without a status change after which
        the protocol is declared stuck
    """
    radius: float = PM.spread_radius
    max_wait_rounds: int = PM.max_wait_rounds
    rounds_cap: int = PM.rounds_cap

    def validate(self):
        if self.radius <= 0:
            raise ConfigError('cluster radius must be positive')
        if self.max_wait_rounds < 0:
            raise ConfigError('max_wait_rounds must be non-negative')
        if self.rounds_cap < 2 * self.max_wait_rounds:
            raise ConfigError('rounds_cap must be at least 2*max_wait_rounds')
        return self


@dataclass(frozen=True)
class WeightAssignment:
    """
    Communication weight in {0,1,2} for every live agent
    """
    weights: dict = field(default_factory=dict)

    def __post_init__(self):
        for i, w in self.weights.items():
            assert w in WEIGHT_LEVELS, 'weight %r of agent %d' % (w, i)

    def __getitem__(self, agent):
        return self.weights[agent]

    def __len__(self):
        return len(self.weights)


@dataclass(frozen=True)
class Topology:
    """
    Parameters
    ----------
    high_level : frozenset
        leader ids
    low_level : frozenset
        follower ids (every other live agent)
    edges : frozenset
        directed (source, target) pairs
    kind : str
        one of KINDS
    groups : tuple
        group structure: for hierarchical topologies one tuple per leader,
        leader first then its followers; for the baselines the
        communication groups in chaining order
    """
    high_level: frozenset = frozenset()
    low_level: frozenset = frozenset()
    edges: frozenset = frozenset()
    kind: str = HIERARCHICAL
    groups: Tuple[tuple, ...] = ()

    @classmethod
    def empty(cls, agents=()):
        """
        Episode-start structure: everybody low-level, nobody connected
        """
        return cls(low_level=frozenset(agents))

    @property
    def agents(self):
        return tuple(sorted(self.high_level | self.low_level))

    def leader_of(self):
        """
        Returns
        -------
        leaders : dict
            follower id -> leader id
        """
        return {i: j for (i, j) in self.edges
                if i in self.low_level and j in self.high_level}

    def to_graph(self):
        g = nx.DiGraph()
        for i in self.agents:
            g.add_node(i, level='high' if i in self.high_level else 'low')
        g.add_edges_from(sorted(self.edges))
        return g

    def edge_records(self):
        """
        Edge list as text lines 'source target'
        """
        return ['%d %d' % e for e in sorted(self.edges)]


@dataclass(frozen=True)
class CostReport:
    """
    Communication cost of one full message pass

    Parameters
    ----------
    n_msg : int
        messages exchanged
    n_step : int
        sequential communication phases
    n_bandwidth : int
        max over agents of messages sent plus received
    k : int
        number of groups
    b : int
        size of the largest group
    """
    n_msg: int
    n_step: int
    n_bandwidth: int
    k: int
    b: int

    def as_row(self, tick, kind):
        return [tick, kind, self.n_msg, self.n_step, self.n_bandwidth,
                self.k, self.b]


def check_topology(topology, positions=None, weights=None, radius=None):
    """
    Assert the structural invariants of a topology. Positions, weights and
    radius enable the geometric checks (coverage and sparsity) for
    hierarchical topologies.

    Parameters
    ----------
    topology : Topology
    positions : dict
        agent id -> (2,) position
    weights : WeightAssignment | dict
    radius : float

    Returns
    -------
    ok : bool
        True (failures raise AssertionError)
    """
    high, low = topology.high_level, topology.low_level
    assert not (high & low), 'agents on both levels: %s' % sorted(high & low)
    live = high | low
    if positions is not None:
        assert live == set(positions), 'partition does not cover live agents'
    for i, j in topology.edges:
        assert i in live and j in live, 'edge %d->%d leaves live set' % (i, j)
        assert i != j, 'self edge on %d' % i
    if topology.kind != HIERARCHICAL or positions is None or radius is None:
        return True

    ids = sorted(positions)
    nbr, _ = neighbor_matrix([positions[i] for i in ids], radius)
    index = {a: k for k, a in enumerate(ids)}
    leader_of = topology.leader_of()
    for i in low:
        near = [j for j in high if nbr[index[i], index[j]]]
        if near:
            assert i in leader_of, 'agent %d has no leader edge' % i
    if weights is not None:
        for i in high:
            for j in high:
                if i != j and nbr[index[i], index[j]]:
                    assert not weights[j] > weights[i], \
                        'leader %d dominated by leader %d' % (i, j)
    return True


def as_positions(positions):
    """
    Normalise positions to a dict of float arrays
    """
    if isinstance(positions, dict):
        return {int(i): np.asarray(p, dtype=np.float64)
                for i, p in positions.items()}
    positions = np.asarray(positions, dtype=np.float64).reshape(-1, 2)
    return {i: positions[i] for i in range(len(positions))}
