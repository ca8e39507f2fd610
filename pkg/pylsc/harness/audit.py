"""
Offline audits: communication cost of a scripted rollout, and a snapshot of
one step of a trained agent (topology, messages, node features).
"""
from dataclasses import dataclass, field
import logging
import numpy as np
import torch

from ..exceptions import ConfigError
from ..hcomm import HcommNetwork, hcomm_features, encode
from ..learner import TopologyBuilder
from ..parameters import Parameters
from ..topology import Topology, ClusterConfig, account_cost, WEIGHT_LEVELS
from ..util.general import episode_seed
from .evaluate import load_agent, EVAL_STREAM

logger = logging.getLogger(__name__)

PM = Parameters()


def cost_rollout(kind, n, steps=1, radius=None, seed=0, size=None,
                 step_size=None):
    """
    Account the cost of every step of a random-walk rollout

    Agents start uniformly in a square and take one unit move in a random
    direction per step. The learned-weight variant draws uniform random
    weights; everything else builds its structure as in training.

    Parameters
    ----------
    kind : str
        topology variant (one of RUN_KINDS)
    n : int
        number of agents
    steps : int
        number of steps
    radius : float
        cluster/neighbour radius (default the spread radius)
    seed : int
    size : float
        side of the square (default the spread arena)
    step_size : float
        length of one move (default the spread step)

    Returns
    -------
    rows : list
        (tick, CostReport) per step
    """
    if n <= 0 or steps <= 0:
        raise ConfigError('cost rollout needs n > 0 and steps > 0')
    radius = PM.spread_radius if radius is None else radius
    size = PM.spread_arena if size is None else size
    step_size = PM.spread_step if step_size is None else step_size
    builder = TopologyBuilder(kind, ClusterConfig(radius=radius))
    rng = np.random.default_rng([seed, 5])
    pos = rng.uniform(0., size, size=(n, 2))
    moves = np.array([[0., 1.], [0., -1.], [-1., 0.], [1., 0.], [0., 0.]])
    ids = list(range(n))
    prev = Topology.empty(ids)
    rows = []
    for tick in range(steps):
        if builder.learns_weights:
            weights = {i: int(w) for i, w in
                       zip(ids, rng.choice(WEIGHT_LEVELS, size=n))}
        elif builder.hierarchical:
            weights = builder.fixed(ids)
        else:
            weights = {}
        positions = {i: pos[i] for i in ids}
        prev = builder.build(prev, weights, positions)
        rows.append((tick, account_cost(prev)))
        pos = np.clip(pos + step_size * moves[rng.integers(len(moves),
                                                           size=n)],
                      0., size)
    logger.debug('cost rollout: %s, %d agents, %d steps', kind, n, steps)
    return rows


@dataclass
class Snapshot:
    """
    One step of a trained agent

    Parameters
    ----------
    tick : int
    ids : tuple
        live learner ids
    weights : dict
        agent id -> chosen weight
    topology : Topology
    messages : list
        EdgeMessage of every phase, in sending order
    features : NodeFeatures
        node features after the message pass
    q : np.ndarray
        (n,n_actions) Q-values
    """
    tick: int
    ids: tuple
    weights: dict
    topology: Topology
    features: object
    q: np.ndarray
    messages: list = field(default_factory=list)

    def lines(self):
        """Text dump, one section per record kind"""
        cost = account_cost(self.topology)
        out = ['# tick=%d kind=%s agents=%d' % (self.tick, self.topology.kind,
                                               len(self.ids)),
               '# cost n_msg=%d n_step=%d n_bandwidth=%d k=%d b=%d'
               % (cost.n_msg, cost.n_step, cost.n_bandwidth, cost.k, cost.b),
               '[weights]']
        out += ['%d %d' % (i, self.weights.get(i, 0)) for i in self.ids]
        out.append('[leaders]')
        out += ['%d' % i for i in sorted(self.topology.high_level)]
        out.append('[edges]')
        out += self.topology.edge_records()
        out.append('[messages]')
        out += [m.record() for m in self.messages]
        out.append('[features]')
        out += self.features.records()
        out.append('[q]')
        out += ['%d %s' % (i, ' '.join('%.6g' % v for v in row))
                for i, row in zip(self.ids, self.q)]
        return out


def snapshot(checkpoint, cfg, seed=0, tick=0):
    """
    Replay a greedy evaluation episode up to 'tick' and record that step

    Parameters
    ----------
    checkpoint : str
    cfg : RunConfig
    seed : int
        evaluation seed (the episode of evaluation trial 0)
    tick : int
        step to record

    Returns
    -------
    snap : Snapshot
    """
    if tick < 0:
        raise ConfigError('tick must be non-negative')
    env, agent = load_agent(checkpoint, cfg, seed)
    rng = np.random.default_rng([seed, 4])
    state = env.reset(episode_seed(seed, 0, EVAL_STREAM))
    ids = env.learner_ids(state)
    agent.begin_episode([i for i in ids if state.agents[i].alive])
    while True:
        alive = np.array([state.agents[i].alive for i in ids], dtype=bool)
        live = [i for i, a in zip(ids, alive) if a]
        pos_all = state.positions(ids)
        positions = {i: pos_all[k] for k, i in enumerate(ids) if alive[k]}
        obs = env.observe_all(state, ids)[alive]
        result = agent.act(obs, live, positions, 0., rng)
        if state.tick == tick:
            break
        step = env.step(state, env.joint_action(state, result.actions))
        if step.done:
            raise ConfigError('episode ended at tick %d, before tick %d'
                              % (state.tick, tick))

    messages = []
    with torch.no_grad():
        if isinstance(agent.net, HcommNetwork):
            features = hcomm_features(agent.net, obs, result.topology,
                                      agent.params, ids=live, trace=messages)
        else:
            features = encode(agent.net, obs, agent.params, ids=live)
        q = agent.net.head(features.embed, agent.params).numpy()
    logger.info('snapshot of %s at tick %d: %d leaders, %d messages',
                checkpoint, tick, len(result.topology.high_level),
                len(messages))
    return Snapshot(tick=tick, ids=tuple(live), weights=result.weights,
                    topology=result.topology, features=features, q=q,
                    messages=messages)
