"""
Grid battle: allies (learners) fight a faster, stronger, tougher enemy team
controlled by a scripted heuristic.
"""
import logging
import math
import numpy as np

from ..exceptions import ConfigError
from .base import (Environment, WorldState, AgentState, Observation,
                   ObservationSpec, JointAction, StepResult, ALLY, ENEMY)

logger = logging.getLogger(__name__)

# window channels
WALL, SELF, FRIEND, FRIEND_HP, FOE, FOE_HP = range(6)
N_CHANNELS = 6
SELF_DIM = 3

ATTACK_OFFSETS = [(-1, -1), (0, -1), (1, -1), (-1, 0),
                  (1, 0), (-1, 1), (0, 1), (1, 1)]


def move_offsets(speed):
    """
    Cells reachable in one move: every non-zero offset with Manhattan length
    at most 'speed', in a fixed order.
    """
    offs = [(dx, dy)
            for dx in range(-speed, speed + 1)
            for dy in range(-speed, speed + 1)
            if 0 < abs(dx) + abs(dy) <= speed]
    return sorted(offs, key=lambda o: (abs(o[0]) + abs(o[1]), o[0], o[1]))


class ActionSet(object):
    """
    Action layout of one team: index 0 is no-op, then the moves, then the
    eight attacks.
    """
    def __init__(self, speed):
        self.moves = move_offsets(speed)
        self.attacks = list(ATTACK_OFFSETS)

    def __len__(self):
        return 1 + len(self.moves) + len(self.attacks)

    def decode(self, a):
        """
        Returns
        -------
        kind : str
            'noop', 'move' or 'attack'
        offset : tuple
            (dx,dy) cell offset
        """
        if a == 0:
            return 'noop', (0, 0)
        if a <= len(self.moves):
            return 'move', self.moves[a - 1]
        return 'attack', self.attacks[a - 1 - len(self.moves)]

    def move_index(self, offset):
        return 1 + self.moves.index(tuple(offset))

    def attack_index(self, offset):
        return 1 + len(self.moves) + self.attacks.index(tuple(offset))


class BattleEnv(Environment):
    """
    Parameters
    ----------
    scenario : ScenarioConfig
        battle scenario; allies take ids [0, n_agents), enemies follow
    """
    def __init__(self, scenario):
        super(BattleEnv, self).__init__(scenario)
        sc = self.scenario
        self.size = int(sc.arena_size)
        self.view = sc.view_size
        # window covers offsets [lo, lo+view)
        self.lo = -(self.view // 2)
        self.action_sets = {ALLY: ActionSet(sc.ally_speed),
                            ENEMY: ActionSet(sc.enemy_speed)}
        self.stats = {
            ALLY: dict(speed=sc.ally_speed, attack=sc.ally_attack,
                       hp=sc.ally_hp),
            ENEMY: dict(speed=sc.enemy_speed, attack=sc.enemy_attack,
                        hp=sc.enemy_hp),
        }

    @property
    def observation_spec(self):
        dim = N_CHANNELS * self.view * self.view + SELF_DIM
        return ObservationSpec('grid', dim, channels=N_CHANNELS,
                               view=self.view, self_dim=SELF_DIM)

    def n_actions(self, team=ALLY):
        return len(self.action_sets[team])

    def in_bounds(self, x, y):
        return 0 <= x < self.size and 0 <= y < self.size

    def _formation(self, n, side, rng):
        """
        Rectangular block of n cells next to the centre line with a random
        vertical shift.
        """
        size = self.size
        width = size // 2 - 1
        rows = min(size, max(1, int(math.ceil(math.sqrt(2 * n)))))
        cols = int(math.ceil(n / rows))
        if cols > width:
            raise ConfigError('formation of %d agents does not fit the arena'
                              % n)
        j = self.scenario.formation_jitter
        y0 = (size - rows) // 2 + int(rng.integers(-j, j + 1))
        y0 = min(max(y0, 0), size - rows)
        cells = []
        for k in range(n):
            r, c = k % rows, k // rows
            x = width - cols + c
            if side == ENEMY:
                x = size - 1 - x
            cells.append(np.array([x, y0 + r], dtype=np.int64))
        return cells

    def reset(self, seed):
        """
        Place both teams in opposing formations. Identical seeds give
        identical states.

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
        agents = []
        for team, n in [(ALLY, sc.n_agents), (ENEMY, sc.n_enemies)]:
            for cell in self._formation(n, team, rng):
                agents.append(AgentState(id=len(agents), position=cell,
                                         health=self.stats[team]['hp'],
                                         alive=True, team=team))
        return WorldState(agents=agents, landmarks=np.zeros((0, 2)), tick=0,
                          rng_seed=seed, rng=rng, policy_rng=policy_rng)

    def learner_ids(self, state):
        return state.team_ids(ALLY)

    def _occupancy(self, state):
        return {tuple(int(v) for v in a.position): a.id
                for a in state.agents if a.alive}

    def observe(self, state, agent, occupancy=None):
        """
        Window of view x view cells around the agent plus its own features.
        Out-of-bounds cells are marked as wall; dead agents see zeros.

        Parameters
        ----------
        state : WorldState
        agent : int
            agent id

        Returns
        -------
        obs : Observation
        """
        me = state.agents[agent]
        grid = np.zeros((N_CHANNELS, self.view, self.view))
        own = np.zeros(SELF_DIM)
        if not me.alive:
            return Observation(grid_window=grid, self_features=own)
        if occupancy is None:
            occupancy = self._occupancy(state)
        x0, y0 = int(me.position[0]), int(me.position[1])
        for r in range(self.view):
            for c in range(self.view):
                x, y = x0 + self.lo + c, y0 + self.lo + r
                if not self.in_bounds(x, y):
                    grid[WALL, r, c] = 1.
                    continue
                j = occupancy.get((x, y))
                if j is None:
                    continue
                if j == agent:
                    grid[SELF, r, c] = 1.
                    continue
                other = state.agents[j]
                hp = other.health / self.stats[other.team]['hp']
                if other.team == me.team:
                    grid[FRIEND, r, c] = 1.
                    grid[FRIEND_HP, r, c] = hp
                else:
                    grid[FOE, r, c] = 1.
                    grid[FOE_HP, r, c] = hp
        own[0] = me.health / self.stats[me.team]['hp']
        own[1] = x0 / max(self.size - 1, 1)
        own[2] = y0 / max(self.size - 1, 1)
        return Observation(grid_window=grid, self_features=own)

    def observe_all(self, state, ids):
        if len(ids) == 0:
            return np.zeros((0, self.observation_spec.dim))
        occupancy = self._occupancy(state)
        return np.stack([self.observe(state, i, occupancy).to_vector()
                         for i in ids])

    def step(self, state, joint):
        """
        Advance one tick: moves in a seeded random order (blocked moves are
        dropped), then simultaneous attacks against post-move positions and
        pre-attack health.

        Parameters
        ----------
        state : WorldState
            advanced in place
        joint : JointAction
            one action per agent (allies then enemies)

        Returns
        -------
        result : StepResult
        """
        if not isinstance(joint, JointAction):
            joint = JointAction(joint)
        self._check_joint(state, joint)
        sc = self.scenario
        n = len(state.agents)
        rewards = np.zeros(n)
        events = []

        # movement
        occupancy = self._occupancy(state)
        for i in state.rng.permutation(n):
            agent = state.agents[i]
            if not agent.alive:
                continue
            kind, (dx, dy) = self.action_sets[agent.team].decode(
                joint.actions[i])
            if kind != 'move':
                continue
            x, y = int(agent.position[0]) + dx, int(agent.position[1]) + dy
            if not self.in_bounds(x, y) or (x, y) in occupancy:
                continue
            del occupancy[(int(agent.position[0]), int(agent.position[1]))]
            agent.position = np.array([x, y], dtype=np.int64)
            occupancy[(x, y)] = agent.id

        # attacks
        damage = np.zeros(n, dtype=np.int64)
        for agent in state.agents:
            if not agent.alive:
                continue
            kind, (dx, dy) = self.action_sets[agent.team].decode(
                joint.actions[agent.id])
            if kind != 'attack':
                continue
            cell = (int(agent.position[0]) + dx, int(agent.position[1]) + dy)
            j = occupancy.get(cell)
            if j is None:
                self._add_event(events, rewards, agent.id, 'attack_blank',
                                sc.reward_attack_blank)
            elif state.agents[j].team != agent.team:
                damage[j] += self.stats[agent.team]['attack']
                self._add_event(events, rewards, agent.id, 'hit',
                                sc.reward_hit)

        kills = deaths = 0
        for agent in state.agents:
            if damage[agent.id] == 0:
                continue
            agent.health = max(0, agent.health - int(damage[agent.id]))
            if agent.health == 0:
                agent.alive = False
                self._add_event(events, rewards, agent.id, 'death',
                                sc.reward_death)
                if agent.team == ENEMY:
                    kills += 1
                else:
                    deaths += 1

        state.tick += 1
        done = (state.tick >= sc.horizon
                or not state.live_ids(ALLY) or not state.live_ids(ENEMY))
        info = dict(events=events, kills=kills, deaths=deaths,
                    successes=0, overloads=0)
        next_obs = [self.observe(state, i) for i in range(n)]
        return StepResult(rewards=rewards, next_observations=next_obs,
                          done=done, info=info)

    def joint_action(self, state, learner_actions):
        actions = np.zeros(len(state.agents), dtype=np.int64)
        for i, a in learner_actions.items():
            if state.agents[i].alive:
                actions[i] = a
        enemies = state.team_ids(ENEMY)
        actions[enemies] = enemy_policy(self, state).actions
        return JointAction(actions)


def enemy_policy(env, state):
    """
    Scripted opponent. Each live enemy attacks an adjacent ally if there is
    one, otherwise steps toward the nearest ally inside its window, otherwise
    random-walks with the state's policy stream. Ties go to the lower ally id.

    Parameters
    ----------
    env : BattleEnv
    state : WorldState

    Returns
    -------
    joint : JointAction
        one action per enemy, in id order
    """
    aset = env.action_sets[ENEMY]
    allies = [state.agents[i] for i in state.live_ids(ALLY)]
    actions = []
    for enemy in (state.agents[i] for i in state.team_ids(ENEMY)):
        if not enemy.alive:
            actions.append(0)
            continue
        ex, ey = int(enemy.position[0]), int(enemy.position[1])
        adjacent = [a for a in allies
                    if max(abs(int(a.position[0]) - ex),
                           abs(int(a.position[1]) - ey)) == 1]
        if adjacent:
            target = min(adjacent, key=lambda a: a.id)
            offset = (int(target.position[0]) - ex,
                      int(target.position[1]) - ey)
            actions.append(aset.attack_index(offset))
            continue
        lo, hi = env.lo, env.lo + env.view
        visible = [a for a in allies
                   if lo <= int(a.position[0]) - ex < hi
                   and lo <= int(a.position[1]) - ey < hi]
        if visible:
            target = min(visible, key=lambda a: (
                (int(a.position[0]) - ex)**2 + (int(a.position[1]) - ey)**2,
                a.id))
            tx, ty = int(target.position[0]), int(target.position[1])
            best, best_d = 0, (tx - ex)**2 + (ty - ey)**2
            for k, (dx, dy) in enumerate(aset.moves):
                x, y = ex + dx, ey + dy
                if not env.in_bounds(x, y):
                    continue
                d = (tx - x)**2 + (ty - y)**2
                # the target's own cell is occupied
                if 0 < d < best_d:
                    best, best_d = k + 1, d
            actions.append(best)
            continue
        actions.append(1 + int(state.policy_rng.integers(len(aset.moves))))
    return JointAction(actions)
