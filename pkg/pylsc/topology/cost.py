"""
Message accounting for one full communication pass.
"""
from collections import Counter

from .structure import CostReport, TREE


def account_cost(topology):
    """
    Count the messages one communication pass sends under the topology.

    For hierarchical structures every edge carries exactly one message of
    one phase: follower->leader edges in the upward phase, leader->leader
    edges in the sharing phase and leader->follower edges in the downward
    phase. Leaders' self updates are local and free. Baselines send one
    message per edge; only the tree runs its groups in sequence.

    Parameters
    ----------
    topology : Topology

    Returns
    -------
    report : CostReport
    """
    traffic = Counter()
    for i, j in topology.edges:
        traffic[i] += 1
        traffic[j] += 1
    groups = topology.groups
    return CostReport(
        n_msg=len(topology.edges),
        n_step=len(groups) if topology.kind == TREE else 1,
        n_bandwidth=max(traffic.values()) if traffic else 0,
        k=len(groups),
        b=max((len(g) for g in groups), default=0)
    )
