"""
One episode of interaction between an agent and an environment.
"""
from dataclasses import dataclass, field
import logging
import numpy as np

from ..env.trace import trace_records
from ..learner.replay import Transition
from ..topology import account_cost, check_topology, HIERARCHICAL

logger = logging.getLogger(__name__)

COST_KEYS = ('n_msg', 'n_step', 'n_bandwidth', 'k', 'b')


@dataclass
class EpisodeStats:
    steps: int = 0
    reward: float = 0.
    kills: int = 0
    deaths: int = 0
    successes: int = 0
    overloads: int = 0
    n_agents: int = 0
    costs: list = field(default_factory=list)

    @property
    def mean_step_reward(self):
        if self.steps == 0 or self.n_agents == 0:
            return 0.
        return self.reward / (self.steps * self.n_agents)

    @property
    def episode_reward(self):
        """mean over agents of the summed episode reward"""
        if self.n_agents == 0:
            return 0.
        return self.reward / self.n_agents

    @property
    def mean_n_msg(self):
        if not self.costs:
            return 0.
        return float(np.mean([c.n_msg for c in self.costs]))

    def cost_means(self):
        return {key: float(np.mean([getattr(c, key) for c in self.costs]))
                for key in COST_KEYS} if self.costs else {}


def run_episode(env, agent, seed, epsilon, rng, store=None, trace=None,
                debug=False, radius=None):
    """
    Play one episode

    Parameters
    ----------
    env : Environment
    agent : QAgent
    seed : int
        environment seed
    epsilon : float
        exploration rate for weights and actions
    rng : np.random.Generator
        exploration stream
    store : callable
        receives every Transition
    trace : TraceWriter
        receives per-agent step records
    debug : bool
        check the topology invariants at every step
    radius : float
        cluster radius for the debug checks

    Returns
    -------
    stats : EpisodeStats
    """
    state = env.reset(seed)
    ids = env.learner_ids(state)
    agent.begin_episode([i for i in ids if state.agents[i].alive])
    stats = EpisodeStats(n_agents=len(ids))
    obs_all = env.observe_all(state, ids)
    done = False
    while not done:
        alive = np.array([state.agents[i].alive for i in ids], dtype=bool)
        live = [i for i, a in zip(ids, alive) if a]
        pos_all = state.positions(ids)
        positions = {i: pos_all[k] for k, i in enumerate(ids) if alive[k]}
        digest = state.digest()
        tick = state.tick

        result = agent.act(obs_all[alive], live, positions, epsilon, rng)
        if debug:
            check_topology(result.topology, positions, result.weights,
                           radius if result.topology.kind == HIERARCHICAL
                           else None)
        cost = account_cost(result.topology)
        stats.costs.append(cost)
        logger.debug('tick %d: %s topology, %d leaders, %d messages', tick,
                     result.topology.kind, len(result.topology.high_level),
                     cost.n_msg)

        joint = env.joint_action(state, result.actions)
        step = env.step(state, joint)
        done = step.done
        next_obs = np.stack([step.next_observations[i].to_vector()
                             for i in ids])
        next_alive = np.array([state.agents[i].alive for i in ids],
                              dtype=bool)
        rewards = np.asarray(step.rewards)[ids]
        if store is not None:
            store(Transition(
                ids=tuple(ids), observations=obs_all, positions=pos_all,
                weights=np.array([result.weights.get(i, 0) for i in ids],
                                 dtype=np.int64),
                actions=np.array(joint.actions)[ids],
                rewards=rewards, next_observations=next_obs,
                next_positions=state.positions(ids), done=done,
                alive=alive, next_alive=next_alive,
                prev_high=result.prev_high, state_digest=digest
            ))
        if trace is not None:
            trace.write(trace_records(tick, dict(zip(ids, pos_all)), joint,
                                      step, ids=ids),
                        topology_kind=result.topology.kind)
        stats.steps += 1
        stats.reward += float(rewards.sum())
        for key in ['kills', 'deaths', 'successes', 'overloads']:
            setattr(stats, key, getattr(stats, key) + step.info[key])
        obs_all = next_obs
    return stats
