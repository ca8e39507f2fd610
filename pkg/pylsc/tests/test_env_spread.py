import unittest
from itertools import combinations
import numpy as np

from ..env import ScenarioConfig, SpreadEnv, make_env, JointAction
from ..env.spread import STAY, UP
from ..exceptions import ConfigError, ShapeError
from ..util.general import aeq


def small_spread(**kwargs):
    values = dict(n_agents=4, n_landmarks=1, horizon=3)
    values.update(kwargs)
    return SpreadEnv(ScenarioConfig.spread(**values))


def place(state, agents, landmarks):
    for a, p in zip(state.agents, agents):
        a.position = np.asarray(p, dtype=np.float64)
    state.landmarks = np.asarray(landmarks, dtype=np.float64)


class TestSpread(unittest.TestCase):

    def testResetDefaults(self):
        env = make_env(ScenarioConfig.spread())
        self.assertIsInstance(env, SpreadEnv)
        state = env.reset(3)
        self.assertEqual(len(state.agents), 12)
        self.assertEqual(len(state.landmarks), 4)
        for a in state.agents:
            self.assertTrue((a.position >= 0).all())
            self.assertTrue((a.position <= env.scenario.arena_size).all())

    def testResetDeterminism(self):
        env = make_env(ScenarioConfig.spread())
        s1, s2 = env.reset(11), env.reset(11)
        self.assertEqual(s1.digest(), s2.digest())
        self.assertNotEqual(s1.digest(), env.reset(12).digest())

    def testBadConfig(self):
        with self.assertRaises(ConfigError):
            make_env(ScenarioConfig.spread(n_agents=0))
        with self.assertRaises(ConfigError):
            make_env(ScenarioConfig.spread(horizon=0))

    def testLandmarkMask(self):
        env = small_spread()
        state = env.reset(0)
        place(state, [[0., 0.], [1., 1.], [1., 0.], [0., 1.]], [[0.5, 0.]])
        obs = env.observe(state, 0).relative_positions
        # 3 other agents, then (dx, dy, visible) per landmark
        self.assertTrue(aeq(obs[6:], np.zeros(3)))
        place(state, [[0.2, 0.], [1., 1.], [1., 0.], [0., 1.]], [[0.5, 0.]])
        obs = env.observe(state, 0).relative_positions
        self.assertTrue(aeq(obs[6:], np.array([0.3, 0., 1.])))
        self.assertEqual(obs.shape[0] + 2, env.observation_spec.dim)

    def testOccupyReward(self):
        env = small_spread()
        state = env.reset(0)
        place(state, [[0.5, 0.5], [0.55, 0.5], [0.5, 0.55], [0.9, 0.9]],
              [[0.5, 0.5]])
        result = env.step(state, JointAction([STAY] * 4))
        shaping = -(0. + 0.05 + 0.05)
        self.assertEqual(result.info['successes'], 1)
        self.assertEqual(result.info['overloads'], 0)
        self.assertTrue(aeq(result.rewards, np.full(4, 2. + shaping)))

    def testOverloadPenalty(self):
        env = small_spread()
        state = env.reset(0)
        place(state, [[0.5, 0.5], [0.55, 0.5], [0.5, 0.55], [0.45, 0.5]],
              [[0.5, 0.5]])
        result = env.step(state, JointAction([STAY] * 4))
        shaping = -(0. + 0.05 + 0.05)
        self.assertEqual(result.info['overloads'], 1)
        self.assertTrue(aeq(result.rewards, np.full(4, -10. + shaping)))
        # itemised events add up to the rewards
        totals = np.zeros(4)
        for agent, _, value in result.info['events']:
            totals[agent] += value
        self.assertTrue(aeq(totals, result.rewards))

    def testStayFarMatchesNearestTriples(self):
        env = small_spread(n_landmarks=2)
        state = env.reset(0)
        agents = [[0., 0.], [0., 1.], [1., 0.], [1., 1.]]
        landmarks = [[0.5, 0.5], [0.3, 0.6]]
        place(state, agents, landmarks)
        result = env.step(state, JointAction([STAY] * 4))
        expected = 0.
        for mark in landmarks:
            expected -= min(
                sum(np.hypot(*np.subtract(agents[i], mark)) for i in triple)
                for triple in combinations(range(4), 3))
        self.assertEqual(result.info['successes'], 0)
        self.assertEqual(result.info['overloads'], 0)
        self.assertTrue(aeq(result.rewards, np.full(4, expected)))

    def testShapingNonPositive(self):
        env = small_spread(n_agents=6, n_landmarks=2, horizon=10)
        rng = np.random.default_rng(0)
        for seed in range(5):
            state = env.reset(seed)
            done = False
            while not done:
                result = env.step(state, JointAction(
                    rng.integers(env.n_actions(), size=6)))
                shaping = [v for _, tag, v in result.info['events']
                           if tag == 'shaping']
                self.assertEqual(len(shaping), 2 * 6)
                self.assertTrue(all(v <= 0. for v in shaping))
                done = result.done
        self.assertTrue((env.shaping(rng.uniform(size=(3, 2))) <= 0.).all())

    def testMoveAndHorizon(self):
        env = small_spread()
        state = env.reset(0)
        place(state, [[0.5, 0.5], [0.5, 0.95], [0., 0.], [1., 1.]],
              [[0.1, 0.1]])
        result = env.step(state, JointAction([UP, UP, STAY, STAY]))
        self.assertTrue(aeq(state.agents[0].position, np.array([0.5, 0.6])))
        # clipped at the border
        self.assertTrue(aeq(state.agents[1].position, np.array([0.5, 1.])))
        self.assertFalse(result.done)
        env.step(state, JointAction([STAY] * 4))
        result = env.step(state, JointAction([STAY] * 4))
        self.assertTrue(result.done)

    def testBadJointAction(self):
        env = small_spread()
        state = env.reset(0)
        with self.assertRaises(ShapeError):
            env.step(state, JointAction([STAY] * 3))
        with self.assertRaises(ShapeError):
            env.step(state, JointAction([7, 0, 0, 0]))


if __name__ == "__main__":
    unittest.main()
