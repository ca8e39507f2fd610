"""
Independent Q-learning without any communication code path.
"""
import torch

from ..hcomm import IndependentQNetwork
from ..numcore import adam_step
from ..topology import build_baseline, NONE
from .agent import QAgent, ActResult
from .exploration import select_discrete
from .losses import idqn_loss


class IdqnLearner(QAgent):
    """
    Every agent acts on its own observation through a shared Q-network.

    Parameters
    ----------
    spec : ObservationSpec
    n_actions : int
    net_cfg : NetworkConfig
    cfg : LearnerConfig
    seed : int
        initialisation seed
    """
    kind = 'idqn'

    def __init__(self, spec, n_actions, net_cfg, cfg, seed=0):
        super(IdqnLearner, self).__init__(n_actions, cfg)
        self.net = IndependentQNetwork(spec, n_actions, net_cfg)
        self.params = self.net.init_params(seed)
        self.target = self.params.copy()

    def param_pairs(self):
        return [(self.params, self.target)]

    def q_values(self, observations):
        with torch.no_grad():
            return self.net(observations, self.params).numpy()

    def act(self, observations, ids, positions, epsilon, rng):
        q = self.q_values(observations) if len(ids) else []
        actions = {int(i): select_discrete(q[k], epsilon, rng)
                   for k, i in enumerate(ids)}
        return ActResult(actions=actions, weights={int(i): 0 for i in ids},
                         topology=build_baseline(NONE, positions),
                         prev_high=frozenset())

    def update(self, batch):
        cfg = self.cfg
        loss = idqn_loss(batch, self.net, self.params, self.target, cfg.gamma)
        adam_step(self.params, cfg.lr, cfg.beta1, cfg.beta2, cfg.eps)
        return dict(weight_loss=None, policy_loss=float(loss.detach()))
