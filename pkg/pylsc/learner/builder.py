"""
Per-step topology construction for every communication variant.
"""
from ..exceptions import ConfigError
from ..topology import (Topology, ClusterConfig, cbrp, build_baseline,
                        fixed_weights, BASELINE_KINDS, NONE)

LSC = 'lsc'
LSC_FIX = 'lsc-fix'
RUN_KINDS = (LSC, LSC_FIX) + BASELINE_KINDS


class TopologyBuilder(object):
    """
    Parameters
    ----------
    kind : str
        one of RUN_KINDS
    cluster : ClusterConfig
        protocol parameters; the radius also serves the neighbouring and
        tree structures
    fixed_level : int
        weight of every agent for 'lsc-fix'
    """
    def __init__(self, kind, cluster=None, fixed_level=2):
        if kind not in RUN_KINDS:
            raise ConfigError('unknown topology kind %r (choose from %s)'
                              % (kind, ', '.join(RUN_KINDS)))
        self.kind = kind
        self.cluster = (cluster or ClusterConfig()).validate()
        self.fixed_level = fixed_level

    @property
    def hierarchical(self):
        return self.kind in [LSC, LSC_FIX]

    @property
    def learns_weights(self):
        return self.kind == LSC

    def fixed(self, ids):
        return fixed_weights(ids, self.fixed_level).weights

    def build(self, prev, weights, positions):
        """
        Parameters
        ----------
        prev : Topology
            previous step's structure (used by the hierarchical kinds)
        weights : dict
            agent id -> weight (used by the hierarchical kinds)
        positions : dict
            agent id -> (2,) position of every live agent

        Returns
        -------
        topology : Topology
        """
        if self.hierarchical:
            if self.kind == LSC_FIX:
                weights = self.fixed(positions.keys())
            return cbrp(prev if prev is not None else Topology.empty(),
                        weights, positions, self.cluster)
        return build_baseline(self.kind, positions, self.cluster.radius)

    def none(self, positions):
        return build_baseline(NONE, positions)
