"""
Node and edge records of the hierarchical message pass.
"""
from dataclasses import dataclass, replace
from typing import Optional, Tuple
import numpy as np
import torch

UP = 'up'
INTER = 'inter'
DOWN = 'down'
PHASES = (UP, INTER, DOWN)


@dataclass
class NodeFeatures:
    """
    Parameters
    ----------
    ids : tuple
        agent id of every row of 'embed'
    embed : torch.Tensor
        (n,hidden) local embeddings, one row per live agent
    leaders : tuple
        leader ids, in the row order of 'cluster' and 'global_'
    cluster : torch.Tensor
        (k,hidden) cluster perception of every leader
    global_ : torch.Tensor
        (k,hidden) global perception of every leader
    """
    ids: Tuple[int, ...]
    embed: torch.Tensor
    leaders: Tuple[int, ...] = ()
    cluster: Optional[torch.Tensor] = None
    global_: Optional[torch.Tensor] = None

    def __post_init__(self):
        assert self.embed.shape[0] == len(self.ids)

    @property
    def index(self):
        return {i: r for r, i in enumerate(self.ids)}

    @property
    def leader_index(self):
        return {i: r for r, i in enumerate(self.leaders)}

    def rows(self, agents):
        index = self.index
        return torch.as_tensor([index[i] for i in agents], dtype=torch.long)

    def replace(self, **changes):
        return replace(self, **changes)

    def records(self):
        """
        Text records 'agent role values...' for inspection dumps
        """
        lines = []
        for r, i in enumerate(self.ids):
            lines.append(_record(i, 'embed', self.embed[r]))
        for r, i in enumerate(self.leaders):
            if self.cluster is not None:
                lines.append(_record(i, 'cluster', self.cluster[r]))
            if self.global_ is not None:
                lines.append(_record(i, 'global', self.global_[r]))
        return lines


@dataclass
class EdgeMessage:
    """
    One message of one phase

    Parameters
    ----------
    source : int
    target : int
    payload : np.ndarray
        (msg_dim,) message values
    phase : str
        'up', 'inter' or 'down'
    """
    source: int
    target: int
    payload: np.ndarray
    phase: str

    def __post_init__(self):
        assert self.phase in PHASES

    def record(self):
        return '%s %d %d %s' % (self.phase, self.source, self.target,
                                ' '.join('%.6g' % v for v in self.payload))


def _record(agent, role, values):
    values = values.detach().cpu().numpy()
    return '%d %s %s' % (agent, role, ' '.join('%.6g' % v for v in values))
