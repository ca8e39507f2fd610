"""
Learning agents for every communication variant.
"""
import logging
import torch

from ..exceptions import ConfigError
from ..hcomm import HcommNetwork, IndependentQNetwork
from ..learner import (QAgent, ActResult, IdqnLearner, TopologyBuilder,
                       select_discrete, weight_generator_loss, policy_loss,
                       greedy_weights, RUN_KINDS)
from ..numcore import adam_step

logger = logging.getLogger(__name__)

IDQN = 'idqn'
AGENT_KINDS = RUN_KINDS + (IDQN,)
WEIGHT_PREFIX = 'weight.'


class LscAgent(QAgent):
    """
    Communication-based Q-learner. The weight generator (only for the
    learned-weight variant) and the hierarchical policy network share the
    agents' observation spec; the topology variant decides how the
    communication graph is built each step.

    Parameters
    ----------
    kind : str
        one of RUN_KINDS
    spec : ObservationSpec
    n_actions : int
    net_cfg : NetworkConfig
    cfg : LearnerConfig
    cluster : ClusterConfig
    fixed_level : int
        weight of every agent for 'lsc-fix'
    seed : int
        initialisation seed
    """
    def __init__(self, kind, spec, n_actions, net_cfg, cfg, cluster,
                 fixed_level=2, seed=0):
        super(LscAgent, self).__init__(n_actions, cfg)
        self.kind = kind
        self.builder = TopologyBuilder(kind, cluster, fixed_level)
        self.net = HcommNetwork(spec, n_actions, net_cfg)
        self.params = self.net.init_params(seed)
        self.target = self.params.copy()
        self.wnet = None
        if self.builder.learns_weights:
            self.wnet = IndependentQNetwork(spec, net_cfg.n_weight_levels,
                                            net_cfg, prefix=WEIGHT_PREFIX)
            self.wparams = self.wnet.init_params(seed)
            self.wtarget = self.wparams.copy()

    def param_pairs(self):
        pairs = [(self.params, self.target)]
        if self.wnet is not None:
            pairs.append((self.wparams, self.wtarget))
        return pairs

    @property
    def weight_bootstrap(self):
        if self.cfg.weight_target == 'online':
            return self.wparams
        return self.wtarget

    def pick_weights(self, observations, ids, epsilon, rng):
        if self.builder.learns_weights:
            if not len(ids):
                return {}
            with torch.no_grad():
                q = self.wnet(observations, self.wparams).numpy()
            return {int(i): select_discrete(q[k], epsilon, rng)
                    for k, i in enumerate(ids)}
        if self.builder.hierarchical:
            return dict(self.builder.fixed(ids))
        return {int(i): 0 for i in ids}

    def act(self, observations, ids, positions, epsilon, rng):
        weights = self.pick_weights(observations, ids, epsilon, rng)
        prev_high = self.prev.high_level
        topology = self.builder.build(self.prev, weights, positions)
        actions = {}
        if len(ids):
            with torch.no_grad():
                q = self.net(observations, topology, self.params,
                             ids=ids).numpy()
            actions = {int(i): select_discrete(q[k], epsilon, rng)
                       for k, i in enumerate(ids)}
        self.prev = topology
        return ActResult(actions=actions, weights=weights, topology=topology,
                         prev_high=frozenset(prev_high))

    def _next_weights(self, tr, rows, ids):
        return greedy_weights(self.wnet, self.weight_bootstrap,
                              tr.next_observations[rows], ids)

    def update(self, batch):
        cfg = self.cfg
        weight_loss = None
        if self.wnet is not None:
            loss = weight_generator_loss(batch, self.wnet, self.wparams,
                                         self.weight_bootstrap, cfg.gamma)
            adam_step(self.wparams, cfg.lr, cfg.beta1, cfg.beta2, cfg.eps)
            weight_loss = float(loss.detach())
        loss = policy_loss(batch, self.net, self.params, self.target,
                           self.builder, cfg.gamma,
                           next_weights=self._next_weights)
        adam_step(self.params, cfg.lr, cfg.beta1, cfg.beta2, cfg.eps)
        return dict(weight_loss=weight_loss, policy_loss=float(loss.detach()))


def make_agent(cfg, env, seed):
    """
    Build the agent a run configuration asks for

    Parameters
    ----------
    cfg : RunConfig
    env : Environment
    seed : int

    Returns
    -------
    agent : QAgent
    """
    spec = env.observation_spec
    n_actions = env.n_actions()
    if cfg.kind == IDQN:
        return IdqnLearner(spec, n_actions, cfg.network, cfg.learner, seed)
    if cfg.kind not in RUN_KINDS:
        raise ConfigError('unknown topology kind %r (choose from %s)'
                          % (cfg.kind, ', '.join(AGENT_KINDS)))
    return LscAgent(cfg.kind, spec, n_actions, cfg.network, cfg.learner,
                    cfg.cluster, cfg.fixed_weight_level, seed)
