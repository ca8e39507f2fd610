import json
import math
import os
import shutil
import tempfile
import unittest
from dataclasses import replace
import numpy as np

from ..config import default_run_config, apply_overrides
from ..exceptions import ConfigError, ActionSpaceMismatchError
from ..harness import (train, train_seed, evaluate, sweep, window_means,
                       cost_rollout, snapshot, file_digest, read_csv_log,
                       EvalReport, make_agent, LscAgent, IDQN,
                       METRICS_COLUMNS, CsvLog)
from ..env import make_env
from ..learner import IdqnLearner
from ..topology import CostReport

SPREAD_TINY = ['scenario.n_agents=4', 'scenario.n_landmarks=2',
               'scenario.horizon=3', 'network.hidden_dim=8',
               'network.msg_dim=4', 'network.q_hidden=[8]',
               'learner.batch_size=2', 'learner.update_rounds=2',
               'learner.replay_capacity=50', 'run.episodes=2',
               'run.eval_every=1', 'run.eval_trials=2', 'run.debug=true']
BATTLE_TINY = ['scenario.arena_size=6', 'scenario.n_agents=2',
               'scenario.n_enemies=2', 'scenario.horizon=2',
               'scenario.view_size=2', 'network.hidden_dim=8',
               'network.msg_dim=4', 'network.q_hidden=[8]',
               'network.conv_layers=1', 'network.conv_channels=2',
               'learner.batch_size=2', 'learner.update_rounds=1',
               'run.episodes=1', 'run.eval_trials=1']


def tiny_config(out, name='spread', kind='lsc', *extra):
    base = SPREAD_TINY if name == 'spread' else BATTLE_TINY
    cfg = apply_overrides(default_run_config(name), base + list(extra))
    return replace(cfg, kind=kind, output_dir=out).validate()


class HarnessCase(unittest.TestCase):

    def setUp(self):
        self.out = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.out, ignore_errors=True)


class TestTraining(HarnessCase):

    def testSingleStepEpisode(self):
        cfg = tiny_config(self.out, 'spread', 'lsc', 'run.episodes=1',
                          'scenario.horizon=1', 'learner.update_rounds=3')
        result, = train(cfg)
        self.assertEqual(result.transitions, 1)
        self.assertEqual(result.updates, 3)
        rows = read_csv_log(result.metrics_path)
        self.assertEqual(len(rows), 1)
        self.assertEqual(list(rows[0].keys()), METRICS_COLUMNS)
        self.assertNotEqual(rows[0]['weight_loss'], '')
        self.assertTrue(os.path.isfile(result.final_checkpoint))
        self.assertTrue(os.path.isfile(os.path.join(result.run_dir,
                                                    'manifest.json')))

    def testSchemaLine(self):
        cfg = tiny_config(self.out, 'spread', 'star')
        result = train_seed(cfg, 0)
        for path in [result.metrics_path, result.costs_path]:
            with open(path) as f:
                self.assertTrue(f.readline().startswith('# schema='))
        costs = read_csv_log(result.costs_path)
        self.assertEqual(len(costs), 2 * 3)
        # star over four agents
        self.assertEqual(set(r['n_msg'] for r in costs), {'6'})

    def testCheckpointCadence(self):
        cfg = tiny_config(self.out, 'spread', 'lsc-fix')
        result = train_seed(cfg, 0)
        names = [os.path.basename(p) for p in result.checkpoints]
        self.assertEqual(names, ['episode_000001.ckpt', 'episode_000002.ckpt',
                                 'final.ckpt'])

    def testRepeatable(self):
        digests = []
        for sub in ['a', 'b']:
            cfg = tiny_config(os.path.join(self.out, sub))
            result = train_seed(cfg, 3)
            digests.append([file_digest(result.metrics_path),
                            file_digest(result.costs_path),
                            file_digest(result.final_checkpoint)])
        self.assertEqual(digests[0], digests[1])

    def testSeedsDiffer(self):
        cfg = tiny_config(self.out)
        a = train_seed(cfg, 0)
        b = train_seed(cfg, 1)
        self.assertNotEqual(file_digest(a.final_checkpoint),
                            file_digest(b.final_checkpoint))

    def testIdqnMatchesNone(self):
        runs = {}
        for kind in [IDQN, 'none']:
            cfg = tiny_config(self.out, 'spread', kind)
            runs[kind] = read_csv_log(train_seed(cfg, 5).metrics_path)
        for a, b in zip(runs[IDQN], runs['none']):
            self.assertEqual(a['episode_reward'], b['episode_reward'])
            self.assertEqual(a['mean_n_msg'], b['mean_n_msg'])
            self.assertEqual(a['policy_loss'], b['policy_loss'])
            self.assertEqual(a['weight_loss'], '')

    def testMakeAgent(self):
        env = make_env(tiny_config(self.out).scenario)
        self.assertIsInstance(make_agent(tiny_config(self.out, 'spread',
                                                     IDQN), env, 0),
                              IdqnLearner)
        agent = make_agent(tiny_config(self.out), env, 0)
        self.assertIsInstance(agent, LscAgent)
        self.assertIsNotNone(agent.wnet)
        self.assertIsNone(make_agent(tiny_config(self.out, 'spread', 'tree'),
                                     env, 0).wnet)
        with self.assertRaises(ConfigError):
            replace(tiny_config(self.out), kind='ring').validate()


class TestEvaluation(HarnessCase):

    def setUp(self):
        super(TestEvaluation, self).setUp()
        self.cfg = tiny_config(self.out)
        self.checkpoint = train_seed(self.cfg, 0).final_checkpoint

    def testReport(self):
        out_dir = os.path.join(self.out, 'eval')
        report, rows = evaluate(self.checkpoint, self.cfg, 3, 0,
                                out_dir=out_dir)
        self.assertEqual(report.trials, 3)
        self.assertEqual(len(rows), 3)
        self.assertTrue(math.isfinite(report.mean_reward))
        self.assertEqual(set(report.cost), {'n_msg', 'n_step', 'n_bandwidth',
                                            'k', 'b'})
        self.assertEqual(len(read_csv_log(os.path.join(out_dir,
                                                       'eval.csv'))), 3)
        again, _ = evaluate(self.checkpoint, self.cfg, 3, 0)
        self.assertEqual(report, again)

    def testTraces(self):
        out_dir = os.path.join(self.out, 'traced')
        evaluate(self.checkpoint, replace(self.cfg, trace_eval=True), 1, 0,
                 out_dir=out_dir)
        with open(os.path.join(out_dir, 'trace_0000.jsonl')) as f:
            records = [json.loads(line) for line in f]
        self.assertEqual(len(records), 3 * 4)
        self.assertEqual([r['tick'] for r in records[:4]], [0] * 4)
        self.assertEqual(sorted(records[0]),
                         ['action', 'agent', 'events', 'position', 'reward',
                          'tick', 'topology_kind'])
        self.assertEqual(records[0]['topology_kind'], 'hierarchical')

    def testZeroTrials(self):
        with self.assertRaises(ConfigError):
            evaluate(self.checkpoint, self.cfg, 0)

    def testWrongScenario(self):
        battle = tiny_config(self.out, 'battle', 'lsc')
        checkpoint = train_seed(battle, 0).final_checkpoint
        with self.assertRaises(ActionSpaceMismatchError):
            evaluate(checkpoint, self.cfg, 1)

    def testKdRatio(self):
        self.assertEqual(EvalReport.kd(6, 3), 2.)
        self.assertEqual(EvalReport.kd(3, 0), math.inf)
        self.assertEqual(EvalReport.kd(0, 0), 0.)

    def testSnapshot(self):
        snap = snapshot(self.checkpoint, self.cfg, 0, tick=1)
        self.assertEqual(snap.tick, 1)
        self.assertEqual(len(snap.ids), 4)
        self.assertEqual(snap.q.shape, (4, 5))
        lines = snap.lines()
        for section in ['[weights]', '[leaders]', '[edges]', '[messages]',
                        '[features]', '[q]']:
            self.assertIn(section, lines)
        leaders = lines.index('[leaders]')
        self.assertEqual(lines.index('[edges]') - leaders - 1,
                         len(snap.topology.high_level))
        with self.assertRaises(ConfigError):
            snapshot(self.checkpoint, self.cfg, 0, tick=10)


class TestSweep(HarnessCase):

    def testRows(self):
        cfg = replace(tiny_config(self.out), seeds=(0, 1))
        rows = sweep([cfg, replace(cfg, kind='star')])
        self.assertEqual(len(rows), 6)
        per_seed = [r for r in rows if r['status'] == 'ok']
        self.assertEqual(len(per_seed), 4)
        aggregates = [r for r in rows if r['status'] == 'aggregate']
        self.assertEqual([r['kind'] for r in aggregates], ['lsc', 'star'])
        star = [r['eval_mean_reward'] for r in per_seed
                if r['kind'] == 'star']
        self.assertAlmostEqual(aggregates[1]['eval_mean_reward'],
                               float(np.mean(star)))
        table = read_csv_log(os.path.join(self.out, 'comparison.csv'))
        self.assertEqual(len(table), 6)

    def testMixedScenarios(self):
        with self.assertRaises(ConfigError):
            sweep([tiny_config(self.out),
                   tiny_config(self.out, 'battle', 'lsc')])
        with self.assertRaises(ConfigError):
            sweep([])

    def testWindowMeans(self):
        self.assertEqual(window_means(list(range(1, 11))), (1., 10.))
        self.assertEqual(window_means([4.]), (4., 4.))
        self.assertEqual(window_means(list(range(20)), 0.25), (2., 17.))


class TestCsvLog(HarnessCase):

    def testFlushMakesRowsReadable(self):
        path = os.path.join(self.out, 'log.csv')
        with CsvLog(path, 'demo', ['a', 'b']) as log:
            log.write([1, 0.5])
            log.flush()
            self.assertEqual(read_csv_log(path), [{'a': '1', 'b': '0.5'}])
            log.write([2, None])
        self.assertEqual(read_csv_log(path)[1], {'a': '2', 'b': ''})


class TestCostRollout(unittest.TestCase):

    def testFullyConnected(self):
        rows = cost_rollout('fully-connected', 6, steps=3)
        self.assertEqual([t for t, _ in rows], [0, 1, 2])
        for _, cost in rows:
            self.assertEqual(cost, CostReport(30, 1, 10, 1, 6))

    def testHierarchical(self):
        for kind in ['lsc', 'lsc-fix']:
            rows = cost_rollout(kind, 20, steps=4, seed=2)
            for _, cost in rows:
                self.assertGreaterEqual(cost.k, 1)
                self.assertLessEqual(cost.n_msg,
                                     2 * (cost.k ** 2 + cost.k * cost.b))
        self.assertEqual(cost_rollout('lsc', 8, 2, seed=1),
                         cost_rollout('lsc', 8, 2, seed=1))

    def testErrors(self):
        with self.assertRaises(ConfigError):
            cost_rollout('star', 0)
        with self.assertRaises(ConfigError):
            cost_rollout('ring', 4)


if __name__ == "__main__":
    unittest.main()
