"""
Cooperative spread: every landmark asks to be held by exactly three agents.
"""
import numpy as np
from scipy.spatial.distance import cdist

from .base import (Environment, WorldState, AgentState, Observation,
                   ObservationSpec, JointAction, StepResult, ALLY)

UP, DOWN, LEFT, RIGHT, STAY = range(5)
MOVES = np.array([[0., 1.], [0., -1.], [-1., 0.], [1., 0.], [0., 0.]])


class SpreadEnv(Environment):
    """
    Parameters
    ----------
    scenario : ScenarioConfig
        spread scenario
    """
    noop_action = STAY

    @property
    def observation_spec(self):
        sc = self.scenario
        dim = 2 * (sc.n_agents - 1) + 3 * sc.n_landmarks + 2
        return ObservationSpec('vector', dim)

    def n_actions(self, team=ALLY):
        return len(MOVES)

    def reset(self, seed):
        """
        Agents and landmarks uniform in the arena

        Parameters
        ----------
        seed : int

        Returns
        -------
        state : WorldState
        """
        sc = self.scenario
        rng = np.random.default_rng(seed)
        policy_rng = np.random.default_rng([seed, 1])
        pos = rng.uniform(0., sc.arena_size, size=(sc.n_agents, 2))
        landmarks = rng.uniform(0., sc.arena_size, size=(sc.n_landmarks, 2))
        agents = [AgentState(id=i, position=pos[i].copy(), team=ALLY)
                  for i in range(sc.n_agents)]
        return WorldState(agents=agents, landmarks=landmarks, tick=0,
                          rng_seed=seed, rng=rng, policy_rng=policy_rng)

    def learner_ids(self, state):
        return [a.id for a in state.agents]

    def observe(self, state, agent):
        """
        Offsets to every other agent (id order), then per landmark
        (dx, dy, visible) with zeros unless the landmark is closer than the
        view radius, then the agent's own scaled position.

        Parameters
        ----------
        state : WorldState
        agent : int

        Returns
        -------
        obs : Observation
        """
        sc = self.scenario
        me = state.agents[agent]
        others = np.stack([a.position for a in state.agents if a.id != agent]) \
            if len(state.agents) > 1 else np.zeros((0, 2))
        rel = (others - me.position).reshape(-1)
        marks = np.zeros((len(state.landmarks), 3))
        offsets = state.landmarks - me.position
        dist = np.linalg.norm(offsets, axis=1)
        seen = dist < sc.view_radius
        marks[seen, :2] = offsets[seen]
        marks[seen, 2] = 1.
        own = np.asarray(me.position, dtype=np.float64) / sc.arena_size
        return Observation(
            relative_positions=np.concatenate([rel, marks.reshape(-1)]),
            self_features=own
        )

    def shaping(self, dist):
        """
        Dense term: per landmark, minus the summed distance of its nearest
        agents

        Parameters
        ----------
        dist : np.ndarray
            (n_landmarks, n_agents) distances

        Returns
        -------
        terms : np.ndarray
            (n_landmarks,) non-positive shaping terms
        """
        k = min(self.scenario.agents_per_landmark, dist.shape[1])
        return -np.sort(dist, axis=1)[:, :k].sum(axis=1)

    def step(self, state, joint):
        """
        Move every agent by one step, then score the landmarks. Rewards are
        shared: each landmark held by exactly the requested number of agents
        pays the occupy reward to all, each overloaded landmark charges the
        overload penalty to all, and every landmark adds its shaping term.

        Parameters
        ----------
        state : WorldState
            advanced in place
        joint : JointAction

        Returns
        -------
        result : StepResult
        """
        if not isinstance(joint, JointAction):
            joint = JointAction(joint)
        self._check_joint(state, joint)
        sc = self.scenario
        n = len(state.agents)
        for agent in state.agents:
            pos = agent.position + sc.step_size * MOVES[joint.actions[agent.id]]
            agent.position = np.clip(pos, 0., sc.arena_size)

        rewards = np.zeros(n)
        events = []
        pos = state.positions(range(n))
        dist = cdist(state.landmarks, pos)
        shaping = self.shaping(dist)
        successes = overloads = 0
        for l in range(len(state.landmarks)):
            count = int(np.sum(dist[l] < sc.capture_radius))
            if count == sc.agents_per_landmark:
                successes += 1
                for i in range(n):
                    self._add_event(events, rewards, i, 'occupy',
                                    sc.reward_occupy)
            elif count > sc.agents_per_landmark:
                overloads += 1
                for i in range(n):
                    self._add_event(events, rewards, i, 'overload',
                                    sc.reward_overload)
            for i in range(n):
                self._add_event(events, rewards, i, 'shaping',
                                float(shaping[l]))

        state.tick += 1
        done = state.tick >= sc.horizon
        info = dict(events=events, kills=0, deaths=0,
                    successes=successes, overloads=overloads)
        next_obs = [self.observe(state, i) for i in range(n)]
        return StepResult(rewards=rewards, next_observations=next_obs,
                          done=done, info=info)

    def joint_action(self, state, learner_actions):
        actions = np.full(len(state.agents), STAY, dtype=np.int64)
        for i, a in learner_actions.items():
            actions[i] = a
        return JointAction(actions)
