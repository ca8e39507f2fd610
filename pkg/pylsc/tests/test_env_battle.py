import unittest
import numpy as np

from ..env import ScenarioConfig, BattleEnv, make_env, JointAction, ALLY, \
    ENEMY, enemy_policy
from ..env.battle import WALL, SELF, FOE, FOE_HP, move_offsets
from ..exceptions import ConfigError
from ..util.general import aeq


def small_battle(**kwargs):
    values = dict(arena_size=12, n_agents=2, n_enemies=2, horizon=5)
    values.update(kwargs)
    return BattleEnv(ScenarioConfig.battle(**values))


def place(state, cells, alive=None):
    """put agent i on cells[i]; agents without a cell die"""
    for a in state.agents:
        if a.id in cells:
            a.position = np.array(cells[a.id], dtype=np.int64)
            a.alive = True if alive is None else alive.get(a.id, True)
        else:
            a.alive = False
            a.health = 0


class TestBattle(unittest.TestCase):

    def setUp(self):
        self.env = small_battle()
        self.state = self.env.reset(0)
        # allies 0,1 enemies 2,3
        self.noop = [0, 0, 0, 0]

    def testResetDeterminism(self):
        env = make_env(ScenarioConfig.battle())
        s1, s2 = env.reset(7), env.reset(7)
        self.assertEqual(s1.digest(), s2.digest())
        cells = [tuple(a.position) for a in s1.agents]
        self.assertEqual(len(cells), len(set(cells)))
        self.assertEqual(env.learner_ids(s1), list(range(8)))
        # the teams start on opposite halves
        for a in s1.agents:
            half = a.position[0] < env.size // 2
            self.assertEqual(half, a.team == ALLY)

    def testBadConfig(self):
        with self.assertRaises(ConfigError):
            make_env(ScenarioConfig.battle(n_agents=0))
        with self.assertRaises(ConfigError):
            make_env(ScenarioConfig.battle(arena_size=4, n_agents=20))

    def testActionSpace(self):
        self.assertEqual(len(move_offsets(1)), 4)
        self.assertEqual(len(move_offsets(2)), 12)
        self.assertEqual(self.env.n_actions(ALLY), 13)
        self.assertEqual(self.env.n_actions(ENEMY), 21)

    def testObserveAlone(self):
        place(self.state, {0: (6, 6)})
        obs = self.env.observe(self.state, 0)
        grid = obs.grid_window
        self.assertEqual(grid.shape, (6, 6, 6))
        self.assertEqual(grid[SELF, 3, 3], 1.)
        self.assertEqual(grid.sum(), 1.)
        self.assertTrue(aeq(obs.self_features[0], 1.))

    def testObserveCorner(self):
        place(self.state, {0: (0, 0)})
        grid = self.env.observe(self.state, 0).grid_window
        self.assertEqual(grid[WALL].sum(), 27.)
        self.assertEqual(grid[WALL, 3:, 3:].sum(), 0.)

    def testObserveFoeAndDead(self):
        place(self.state, {0: (5, 5), 2: (6, 5)})
        grid = self.env.observe(self.state, 0).grid_window
        self.assertEqual(grid[FOE, 3, 4], 1.)
        self.assertTrue(aeq(grid[FOE_HP, 3, 4], 1.))
        vec = self.env.observe(self.state, 1).to_vector()
        self.assertEqual(vec.shape[0], self.env.observation_spec.dim)
        self.assertEqual(np.abs(vec).sum(), 0.)

    def testHitAndBlank(self):
        place(self.state, {0: (5, 5), 1: (1, 1), 2: (6, 5)})
        aset = self.env.action_sets[ALLY]
        joint = [aset.attack_index((1, 0)), aset.attack_index((0, 1)), 0, 0]
        result = self.env.step(self.state, JointAction(joint))
        self.assertTrue(aeq(result.rewards[0], 5.))
        self.assertTrue(aeq(result.rewards[1], -0.01))
        self.assertEqual(self.state.agents[2].health, 9)
        self.assertFalse(result.done)

    def testKillEndsEpisode(self):
        place(self.state, {0: (5, 5), 2: (6, 5)})
        self.state.agents[2].health = 1
        aset = self.env.action_sets[ALLY]
        joint = [aset.attack_index((1, 0)), 0, 0, 0]
        result = self.env.step(self.state, JointAction(joint))
        self.assertEqual(result.info['kills'], 1)
        self.assertTrue(aeq(result.rewards[2], -2.))
        self.assertTrue(result.done)

    def testAllyDeath(self):
        place(self.state, {0: (5, 5), 1: (0, 0), 2: (6, 5), 3: (4, 5)})
        eset = self.env.action_sets[ENEMY]
        joint = [0, 0, eset.attack_index((-1, 0)), eset.attack_index((1, 0))]
        result = self.env.step(self.state, JointAction(joint))
        self.assertEqual(result.info['deaths'], 1)
        self.assertFalse(self.state.agents[0].alive)
        self.assertTrue(aeq(result.rewards[0], -2.))
        self.assertTrue(aeq(result.rewards[2], 5.))

    def testCollision(self):
        place(self.state, {0: (5, 5), 1: (7, 5), 2: (11, 11)})
        aset = self.env.action_sets[ALLY]
        joint = [aset.move_index((1, 0)), aset.move_index((-1, 0)), 0, 0]
        self.env.step(self.state, JointAction(joint))
        cells = sorted(tuple(int(v) for v in a.position)
                       for a in self.state.agents[:2])
        self.assertIn((6, 5), cells)
        self.assertTrue(cells in [[(5, 5), (6, 5)], [(6, 5), (7, 5)]])

    def testDeadAgentsNoop(self):
        place(self.state, {0: (5, 5), 2: (9, 9)})
        aset = self.env.action_sets[ALLY]
        joint = self.env.joint_action(self.state,
                                      {0: aset.move_index((1, 0)), 1: 3})
        self.assertEqual(joint.actions[1], 0)
        self.assertEqual(joint.actions[0], aset.move_index((1, 0)))

    def testEnemyPolicyAttacksLowestId(self):
        place(self.state, {0: (5, 5), 1: (5, 7), 2: (5, 6)})
        actions = enemy_policy(self.env, self.state).actions
        eset = self.env.action_sets[ENEMY]
        self.assertEqual(actions[0], eset.attack_index((0, -1)))
        self.assertEqual(actions[1], 0)

    def testTrajectoryDeterminism(self):
        runs = []
        for _ in range(2):
            env = small_battle(arena_size=8, n_agents=3, n_enemies=3,
                               horizon=20)
            state = env.reset(4)
            rng = np.random.default_rng(9)
            digests, rewards = [state.digest()], []
            done = False
            while not done:
                chosen = {i: int(rng.integers(env.n_actions(ALLY)))
                          for i in env.learner_ids(state)}
                result = env.step(state, env.joint_action(state, chosen))
                digests.append(state.digest())
                rewards.append(result.rewards.tolist())
                done = result.done
            runs.append((digests, rewards))
        self.assertEqual(runs[0], runs[1])

    def testConservation(self):
        for seed in range(5):
            env = small_battle(arena_size=8, n_agents=3, n_enemies=3,
                               horizon=40)
            state = env.reset(seed)
            rng = np.random.default_rng(seed)
            kills = deaths = 0
            done = False
            while not done:
                health = [a.health for a in state.agents]
                alive = [a.alive for a in state.agents]
                chosen = {i: int(rng.integers(env.n_actions(ALLY)))
                          for i in env.learner_ids(state)}
                result = env.step(state, env.joint_action(state, chosen))
                for a in state.agents:
                    self.assertLessEqual(a.health, health[a.id])
                    if not alive[a.id]:
                        self.assertFalse(a.alive)
                totals = np.zeros(len(state.agents))
                for agent, _, value in result.info['events']:
                    totals[agent] += value
                self.assertTrue(aeq(totals, result.rewards))
                kills += result.info['kills']
                deaths += result.info['deaths']
                done = result.done
            dead = [a for a in state.agents if not a.alive]
            self.assertEqual(kills, sum(a.team == ENEMY for a in dead))
            self.assertEqual(deaths, sum(a.team == ALLY for a in dead))

    def testObservationLocality(self):
        # the window around (3,3) spans cells 0..5
        place(self.state, {0: (3, 3), 2: (9, 9)})
        before = self.env.observe(self.state, 0).to_vector()
        place(self.state, {0: (3, 3), 2: (10, 4)})
        self.assertTrue(aeq(self.env.observe(self.state, 0).to_vector(),
                            before))
        place(self.state, {0: (3, 3), 2: (5, 4)})
        self.assertFalse(aeq(self.env.observe(self.state, 0).to_vector(),
                             before))

    def testEnemyPolicyApproaches(self):
        place(self.state, {0: (5, 5), 2: (8, 5)})
        actions = enemy_policy(self.env, self.state).actions
        eset = self.env.action_sets[ENEMY]
        self.assertEqual(actions[0], eset.move_index((-2, 0)))
        # dead enemies idle
        self.assertEqual(actions[1], 0)

    def testEnemyPolicyRandomWalk(self):
        place(self.state, {0: (0, 0), 2: (10, 10), 3: (10, 6)})
        actions = enemy_policy(self.env, self.state).actions
        rng = np.random.default_rng([0, 1])
        n_moves = len(self.env.action_sets[ENEMY].moves)
        expected = [1 + int(rng.integers(n_moves)) for _ in range(2)]
        self.assertEqual(list(actions), expected)
        again = self.env.reset(0)
        place(again, {0: (0, 0), 2: (10, 10), 3: (10, 6)})
        self.assertEqual(list(enemy_policy(self.env, again).actions),
                         expected)

    def testHorizon(self):
        place(self.state, {0: (0, 0), 2: (11, 11)})
        for t in range(5):
            result = self.env.step(self.state, JointAction(self.noop))
        self.assertTrue(result.done)
        self.assertEqual(self.state.tick, 5)


if __name__ == "__main__":
    unittest.main()
