"""
Common interface of the learning agents driven by the training harness.
"""
from abc import ABCMeta, abstractmethod
from collections import OrderedDict
from dataclasses import dataclass, field

from ..exceptions import (CheckpointError, ActionSpaceMismatchError,
                          ShapeError)
from ..topology import Topology
from .losses import update_targets

ONLINE = 'online/'
TARGET = 'target/'


@dataclass
class ActResult:
    """
    Parameters
    ----------
    actions : dict
        agent id -> action index
    weights : dict
        agent id -> communication weight (0 for variants without weights)
    topology : Topology
        structure the actions were computed under
    prev_high : frozenset
        leaders of the previous step
    """
    actions: dict
    weights: dict
    topology: Topology
    prev_high: frozenset = field(default_factory=frozenset)


class QAgent(metaclass=ABCMeta):
    """
    Parameters
    ----------
    n_actions : int
        size of the action space
    cfg : LearnerConfig
    """
    kind = None

    def __init__(self, n_actions, cfg):
        self.n_actions = n_actions
        self.cfg = cfg.validate()
        self.prev = Topology.empty()

    def begin_episode(self, ids):
        self.prev = Topology.empty(ids)

    @abstractmethod
    def act(self, observations, ids, positions, epsilon, rng):
        """
        Parameters
        ----------
        observations : np.ndarray
            (n,obs_dim) observations of the live learners
        ids : list
            their agent ids
        positions : dict
            agent id -> (2,) position
        epsilon : float
        rng : np.random.Generator

        Returns
        -------
        result : ActResult
        """
        pass

    @abstractmethod
    def update(self, batch):
        """
        One gradient step on every network from a replay batch

        Returns
        -------
        losses : dict
            'weight_loss' (None when the agent has no weight generator) and
            'policy_loss'
        """
        pass

    @abstractmethod
    def param_pairs(self):
        """
        Returns
        -------
        pairs : list
            (online, target) ParamSet pairs
        """
        pass

    def update_targets(self):
        update_targets([(t, o) for o, t in self.param_pairs()], self.cfg.tau)

    def state(self):
        """
        Returns
        -------
        tensors : OrderedDict
            'online/<name>' and 'target/<name>' -> tensor
        """
        tensors = OrderedDict()
        for online, target in self.param_pairs():
            for name, value in online.state().items():
                tensors[ONLINE + name] = value
            for name, value in target.state().items():
                tensors[TARGET + name] = value
        return tensors

    def load_state(self, tensors):
        """
        Restore online and target parameters from a checkpoint map
        """
        head = ONLINE + 'head.out.weight'
        if head in tensors and tuple(tensors[head].shape)[0] != self.n_actions:
            raise ActionSpaceMismatchError(
                'checkpoint has %d actions, environment has %d'
                % (tuple(tensors[head].shape)[0], self.n_actions)
            )
        for online, target in self.param_pairs():
            for prefix, params in [(ONLINE, online), (TARGET, target)]:
                missing = [n for n in params.names()
                           if prefix + n not in tensors]
                if missing:
                    raise CheckpointError('checkpoint lacks %s%s'
                                          % (prefix, missing[0]))
                try:
                    params.load_state(OrderedDict(
                        (n, tensors[prefix + n]) for n in params.names()
                    ))
                except ShapeError as err:
                    raise CheckpointError('checkpoint does not fit the '
                                          'network: %s' % err)
