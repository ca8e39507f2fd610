"""
Shared types for the partially observable environments: agent and world
state, observations, joint actions, step results and scenario configuration.
"""
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass, field
from typing import Optional
import hashlib
import numpy as np

from ..exceptions import ConfigError, ShapeError
from ..parameters import Parameters

ALLY = 'ally'
ENEMY = 'enemy'
BATTLE = 'battle'
SPREAD = 'spread'
SCENARIOS = (BATTLE, SPREAD)

PM = Parameters()


@dataclass
class ScenarioConfig:
    """
    Task description. Battle-only and spread-only fields are ignored by the
    other task.
    """
    name: str = SPREAD
    arena_size: float = PM.spread_arena
    n_agents: int = PM.spread_n_agents
    n_enemies: int = 0
    n_landmarks: int = PM.spread_n_landmarks
    horizon: int = PM.spread_horizon
    # battle
    view_size: int = PM.battle_view
    ally_speed: int = PM.ally_speed
    ally_attack: int = PM.ally_attack
    ally_hp: int = PM.ally_hp
    enemy_speed: int = PM.enemy_speed
    enemy_attack: int = PM.enemy_attack
    enemy_hp: int = PM.enemy_hp
    reward_hit: float = PM.reward_hit
    reward_death: float = PM.reward_death
    reward_attack_blank: float = PM.reward_attack_blank
    formation_jitter: int = PM.formation_jitter
    # spread
    view_radius: float = PM.spread_view_radius
    capture_radius: float = PM.spread_capture_radius
    step_size: float = PM.spread_step
    agents_per_landmark: int = PM.agents_per_landmark
    reward_occupy: float = PM.reward_occupy
    reward_overload: float = PM.reward_overload

    @classmethod
    def battle(cls, ps=None, **kwargs):
        if ps is None:
            ps = PM
        values = dict(
            name=BATTLE, arena_size=ps.battle_arena,
            n_agents=ps.battle_n_allies, n_enemies=ps.battle_n_enemies,
            n_landmarks=0, horizon=ps.battle_horizon
        )
        values.update(kwargs)
        return cls(**values)

    @classmethod
    def spread(cls, ps=None, **kwargs):
        if ps is None:
            ps = PM
        values = dict(
            name=SPREAD, arena_size=ps.spread_arena,
            n_agents=ps.spread_n_agents, n_enemies=0,
            n_landmarks=ps.spread_n_landmarks, horizon=ps.spread_horizon
        )
        values.update(kwargs)
        return cls(**values)

    def validate(self):
        """
        Reject configurations that cannot be simulated
        """
        if self.name not in SCENARIOS:
            raise ConfigError('unknown scenario %r' % self.name)
        if self.arena_size <= 0:
            raise ConfigError('arena_size must be positive')
        if self.n_agents <= 0:
            raise ConfigError('n_agents must be positive')
        if self.horizon <= 0:
            raise ConfigError('horizon must be positive')
        if self.name == BATTLE:
            if self.n_enemies <= 0:
                raise ConfigError('n_enemies must be positive')
            if int(self.arena_size) != self.arena_size:
                raise ConfigError('battle arena_size must be a whole number')
            if self.view_size <= 0:
                raise ConfigError('view_size must be positive')
            for stat in ['ally_speed', 'ally_attack', 'ally_hp',
                         'enemy_speed', 'enemy_attack', 'enemy_hp']:
                if getattr(self, stat) <= 0:
                    raise ConfigError('%s must be positive' % stat)
            # each formation must fit in its half, one column kept free
            half = int(self.arena_size) // 2 - 1
            capacity = half * int(self.arena_size)
            if max(self.n_agents, self.n_enemies) > capacity:
                raise ConfigError(
                    'cannot place %d agents without overlap in a %d-cell '
                    'arena' % (max(self.n_agents, self.n_enemies),
                               int(self.arena_size))
                )
        else:
            if self.n_landmarks <= 0:
                raise ConfigError('n_landmarks must be positive')
            for radius in ['view_radius', 'capture_radius', 'step_size']:
                if getattr(self, radius) <= 0:
                    raise ConfigError('%s must be positive' % radius)
            if self.agents_per_landmark <= 0:
                raise ConfigError('agents_per_landmark must be positive')
        return self


@dataclass
class AgentState:
    """
    Parameters
    ----------
    id : int
        agent index
    position : np.ndarray
        (2,) grid cell (int) or continuous coordinates (float)
    health : int
        hit points (battle only)
    alive : bool
    team : str
        ALLY or ENEMY (every spread agent is an ALLY)
    """
    id: int
    position: np.ndarray
    health: int = 1
    alive: bool = True
    team: str = ALLY


@dataclass
class WorldState:
    """
    Mutable simulation state; one owner advances it with `step`.
    """
    agents: list
    landmarks: np.ndarray
    tick: int
    rng_seed: int
    rng: np.random.Generator = field(repr=False)
    policy_rng: np.random.Generator = field(repr=False)

    def live_ids(self, team=None):
        return [a.id for a in self.agents
                if a.alive and (team is None or a.team == team)]

    def team_ids(self, team):
        return [a.id for a in self.agents if a.team == team]

    def positions(self, ids):
        """
        Returns
        -------
        positions : np.ndarray
            (len(ids),2) float positions
        """
        if len(ids) == 0:
            return np.zeros((0, 2))
        return np.stack([np.asarray(self.agents[i].position, dtype=np.float64)
                         for i in ids])

    def digest(self):
        """
        Compact fingerprint of the state for trace audits
        """
        h = hashlib.sha1()
        h.update(np.int64(self.tick).tobytes())
        for a in self.agents:
            h.update(np.asarray(a.position, dtype=np.float64).tobytes())
            h.update(np.int64(a.health).tobytes())
            h.update(b'1' if a.alive else b'0')
        h.update(np.asarray(self.landmarks, dtype=np.float64).tobytes())
        return h.hexdigest()[:16]


@dataclass
class ObservationSpec:
    """
    Layout of the flat observation vector fed to the encoders.
    kind is 'grid' (channels x view x view window followed by self features)
    or 'vector'.
    """
    kind: str
    dim: int
    channels: int = 0
    view: int = 0
    self_dim: int = 0


@dataclass
class Observation:
    grid_window: Optional[np.ndarray] = None
    relative_positions: Optional[np.ndarray] = None
    self_features: Optional[np.ndarray] = None

    def to_vector(self):
        parts = [p.reshape(-1) for p in
                 [self.grid_window, self.relative_positions, self.self_features]
                 if p is not None]
        return np.concatenate(parts).astype(np.float64)


@dataclass
class JointAction:
    actions: np.ndarray

    def __post_init__(self):
        self.actions = np.asarray(self.actions, dtype=np.int64).reshape(-1)

    def __len__(self):
        return len(self.actions)


@dataclass
class StepResult:
    """
    info holds the step counters ('kills', 'deaths', 'successes',
    'overloads') and 'events', the itemised (agent, tag, value) reward
    entries whose per-agent sums equal `rewards`.
    """
    rewards: np.ndarray
    next_observations: list
    done: bool
    info: dict


class Environment(metaclass=ABCMeta):
    """
    Abstract base class for the seedable POSG environments.

    Parameters
    ----------
    scenario : ScenarioConfig
        validated task description
    """
    noop_action = 0

    def __init__(self, scenario):
        assert isinstance(scenario, ScenarioConfig)
        self.scenario = scenario.validate()

    @property
    @abstractmethod
    def observation_spec(self):
        pass

    @abstractmethod
    def n_actions(self, team=ALLY):
        pass

    @abstractmethod
    def reset(self, seed):
        pass

    @abstractmethod
    def observe(self, state, agent):
        pass

    @abstractmethod
    def step(self, state, joint):
        pass

    @abstractmethod
    def learner_ids(self, state):
        """ids of the agents controlled by the learner (dead ones included)"""
        pass

    @abstractmethod
    def joint_action(self, state, learner_actions):
        """
        Complete the learners' actions into a full joint action

        Parameters
        ----------
        learner_actions : dict
            agent id -> action index; dead or missing learners take no-op
        """
        pass

    def observe_all(self, state, ids):
        """
        Returns
        -------
        obs : np.ndarray
            (len(ids), obs_dim) stacked observation vectors
        """
        dim = self.observation_spec.dim
        if len(ids) == 0:
            return np.zeros((0, dim))
        return np.stack([self.observe(state, i).to_vector() for i in ids])

    def _check_joint(self, state, joint):
        if len(joint) != len(state.agents):
            raise ShapeError(
                'joint action has %d entries for %d agents'
                % (len(joint), len(state.agents))
            )
        for agent, a in zip(state.agents, joint.actions):
            if not 0 <= a < self.n_actions(agent.team):
                raise ShapeError('action %d out of range for agent %d'
                                 % (a, agent.id))

    @staticmethod
    def _add_event(events, rewards, agent, tag, value):
        events.append((agent, tag, value))
        rewards[agent] += value


def make_env(scenario):
    """
    Build the environment named by the scenario
    """
    from .battle import BattleEnv
    from .spread import SpreadEnv
    scenario.validate()
    if scenario.name == BATTLE:
        return BattleEnv(scenario)
    return SpreadEnv(scenario)
