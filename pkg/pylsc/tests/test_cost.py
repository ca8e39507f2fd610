import unittest
from collections import Counter
import numpy as np

from ..topology import (account_cost, build_baseline, cbrp, Topology,
                        ClusterConfig, CostReport, HIERARCHICAL,
                        FULLY_CONNECTED, STAR, TREE, NONE)

R = 0.6
CFG = ClusterConfig(radius=R, max_wait_rounds=2, rounds_cap=16)


def line(n, spacing=0.1):
    return {i: [spacing * i, 0.] for i in range(n)}


def random_hierarchy(rng, n_max=30):
    """groups drawn directly, wired the way the message pass uses them"""
    n = int(rng.integers(1, n_max + 1))
    ids = [int(i) for i in rng.permutation(n)]
    k = int(rng.integers(1, n + 1))
    cuts = sorted(rng.choice(np.arange(1, n), size=k - 1, replace=False)) \
        if k > 1 else []
    groups = [tuple(g) for g in np.split(np.array(ids), cuts)]
    edges = set()
    for g in groups:
        for f in g[1:]:
            edges.add((int(f), int(g[0])))
            edges.add((int(g[0]), int(f)))
    for a in groups:
        for b in groups:
            if a[0] != b[0]:
                edges.add((int(a[0]), int(b[0])))
    leaders = frozenset(int(g[0]) for g in groups)
    return Topology(high_level=leaders, low_level=frozenset(ids) - leaders,
                    edges=frozenset(edges), kind=HIERARCHICAL,
                    groups=tuple(tuple(int(i) for i in g) for g in groups))


def walk_messages(topology):
    """
    Count the messages of one pass phase by phase from the group structure
    alone: followers report up, leaders share pairwise, leaders answer down.
    """
    sent, received = Counter(), Counter()
    leaders = [g[0] for g in topology.groups]
    messages = []
    for g in topology.groups:
        messages += [(f, g[0]) for f in g[1:]]
    messages += [(a, b) for a in leaders for b in leaders if a != b]
    for g in topology.groups:
        messages += [(g[0], f) for f in g[1:]]
    for i, j in messages:
        sent[i] += 1
        received[j] += 1
    agents = set(sent) | set(received)
    bandwidth = max([sent[a] + received[a] for a in agents], default=0)
    return len(messages), bandwidth


class TestCost(unittest.TestCase):

    def testClosedForms(self):
        for n in range(1, 51):
            pos = line(n)
            fc = account_cost(build_baseline(FULLY_CONNECTED, pos))
            self.assertEqual(fc.n_msg, n * (n - 1))
            self.assertEqual(fc.n_bandwidth, 2 * (n - 1))
            self.assertEqual((fc.n_step, fc.k, fc.b), (1, 1, n))
            star = account_cost(build_baseline(STAR, pos))
            self.assertEqual(star.n_msg, 2 * (n - 1))
            self.assertEqual(star.n_bandwidth, 2 * (n - 1))
            self.assertEqual(star.n_step, 1)

    def testFullyConnectedSix(self):
        cost = account_cost(build_baseline(FULLY_CONNECTED, line(6)))
        self.assertEqual(cost.n_msg, 30)
        self.assertEqual(cost.n_bandwidth, 10)

    def testTwoGroups(self):
        t = Topology(high_level=frozenset([0, 3]),
                     low_level=frozenset([1, 2, 4]),
                     edges=frozenset([(1, 0), (2, 0), (4, 3), (0, 3), (3, 0),
                                      (0, 1), (0, 2), (3, 4)]),
                     groups=((0, 1, 2), (3, 4)))
        cost = account_cost(t)
        self.assertEqual(cost, CostReport(n_msg=8, n_step=1, n_bandwidth=6,
                                          k=2, b=3))

    def testNoneAndTree(self):
        pos = {0: [0., 0.], 1: [0.3, 0.], 2: [2., 0.], 3: [4., 0.]}
        cost = account_cost(build_baseline(NONE, pos))
        self.assertEqual((cost.n_msg, cost.n_bandwidth), (0, 0))
        self.assertEqual((cost.k, cost.b), (4, 1))
        cost = account_cost(build_baseline(TREE, pos, R))
        self.assertEqual(cost.n_step, 3)
        self.assertEqual(cost.n_msg, 2 + 4)

    def testEmpty(self):
        cost = account_cost(Topology())
        self.assertEqual(cost, CostReport(0, 1, 0, 0, 0))

    def testBruteForceWalk(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            t = random_hierarchy(rng)
            cost = account_cost(t)
            n_msg, bandwidth = walk_messages(t)
            self.assertEqual(cost.n_msg, n_msg)
            self.assertEqual(cost.n_bandwidth, bandwidth)
            self.assertLessEqual(cost.n_bandwidth, max(cost.n_msg, 0))

    def testCbrpAgreesWithWalk(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            n = int(rng.integers(1, 30))
            pos = {i: rng.uniform(0., 2., size=2) for i in range(n)}
            w = {i: int(rng.integers(3)) for i in range(n)}
            t = cbrp(Topology.empty(), w, pos, CFG)
            self.assertEqual(account_cost(t).n_msg, walk_messages(t)[0])

    def testHierarchyScaling(self):
        # constant density: the arena grows with the team
        rng = np.random.default_rng(3)
        for n in [10, 20, 40, 80]:
            side = np.sqrt(n / 10.)
            pos = {i: rng.uniform(0., side, size=2) for i in range(n)}
            w = {i: int(rng.integers(3)) for i in range(n)}
            cost = account_cost(cbrp(Topology.empty(), w, pos, CFG))
            self.assertLessEqual(cost.n_msg,
                                 2 * (cost.k ** 2 + cost.k * cost.b))


if __name__ == "__main__":
    unittest.main()
