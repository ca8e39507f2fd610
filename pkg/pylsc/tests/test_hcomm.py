import unittest
import numpy as np
import torch

from ..env import ObservationSpec
from ..hcomm import (NetworkConfig, HcommNetwork, IndependentQNetwork,
                     hcomm_features, encode, UP, INTER, DOWN)
from ..numcore import check_gradients, DTYPE
from ..exceptions import ConfigError
from ..topology import (Topology, ClusterConfig, cbrp, build_baseline,
                        HIERARCHICAL, NONE, NEIGHBORING, STAR,
                        FULLY_CONNECTED, TREE)
from ..util.general import aeq

SPEC = ObservationSpec('vector', 6)
GRID = ObservationSpec('grid', 2 * 3 * 3 + 3, channels=2, view=3, self_dim=3)


def two_groups(ids=(0, 1, 2, 3, 4)):
    """leaders ids[0] and ids[3]; groups of three and two"""
    a, b, c, d, e = ids
    edges = {(b, a), (a, b), (c, a), (a, c), (e, d), (d, e), (a, d), (d, a)}
    return Topology(high_level=frozenset([a, d]),
                    low_level=frozenset([b, c, e]), edges=frozenset(edges),
                    kind=HIERARCHICAL, groups=((a, b, c), (d, e)))


def small_cfg(**kwargs):
    values = dict(hidden_dim=4, msg_dim=3, q_hidden=(5,), conv_layers=1,
                  conv_channels=2)
    values.update(kwargs)
    return NetworkConfig(**values)


def random_params(net, seed):
    """all entries random, biases included"""
    params = net.init_params(seed)
    rng = np.random.default_rng(seed)
    params.load_state({n: rng.normal(scale=0.7, size=tuple(p.shape))
                       for n, p in params.items()})
    return params


class TestHcomm(unittest.TestCase):

    def setUp(self):
        self.net = HcommNetwork(SPEC, 5, small_cfg(hidden_dim=16, msg_dim=8,
                                                   q_hidden=(8,)))
        self.params = random_params(self.net, 0)
        self.obs = np.random.default_rng(1).normal(size=(5, 6))

    def testShapes(self):
        q = self.net(self.obs, two_groups(), self.params)
        self.assertEqual(tuple(q.shape), (5, 5))
        features = hcomm_features(self.net, self.obs, two_groups(),
                                  self.params)
        self.assertEqual(features.leaders, (0, 3))
        self.assertEqual(tuple(features.cluster.shape), (2, 16))
        self.assertEqual(tuple(features.global_.shape), (2, 16))

    def testMessageCounts(self):
        trace = []
        self.net(self.obs, two_groups(), self.params, trace=trace)
        phases = [m.phase for m in trace]
        self.assertEqual(phases.count(UP), 3)
        self.assertEqual(phases.count(INTER), 2)
        # two self messages on top of the three follower messages
        self.assertEqual(phases.count(DOWN), 5)
        ups = sorted((m.source, m.target) for m in trace if m.phase == UP)
        self.assertEqual(ups, [(1, 0), (2, 0), (4, 3)])
        self.assertEqual(trace[0].payload.shape, (8,))

    def testNoneMatchesIndependent(self):
        indep = IndependentQNetwork(SPEC, 5, self.net.cfg)
        p_indep = indep.init_params(3)
        p_comm = self.net.init_params(3)
        for name in p_indep.names():
            self.assertTrue(torch.equal(p_indep[name], p_comm[name]))
        none = build_baseline(NONE, np.zeros((5, 2)))
        self.assertTrue(torch.equal(self.net(self.obs, none, p_comm),
                                    indep(self.obs, p_indep)))

    def testIsolatedAgentKeepsEmbedding(self):
        pos = np.array([[0., 0.], [0.1, 0.], [0.2, 0.], [0.1, 0.1],
                        [5., 5.]])
        topology = build_baseline(NEIGHBORING, pos, 0.6)
        features = hcomm_features(self.net, self.obs, topology, self.params)
        local = encode(self.net, self.obs, self.params)
        self.assertTrue(torch.equal(features.embed[4], local.embed[4]))
        self.assertFalse(torch.equal(features.embed[0], local.embed[0]))

    def testPermutationEquivariance(self):
        q = self.net(self.obs, two_groups(), self.params).detach()
        perm = [3, 0, 4, 1, 2]
        ids = [10 + p for p in perm]
        topology = two_groups((10, 11, 12, 13, 14))
        q_perm = self.net(self.obs[perm], topology, self.params, ids=ids)
        self.assertTrue(aeq(q_perm.detach(), q[perm]))

    def testEmbeddingFlowsBetweenGroups(self):
        q = self.net(self.obs, two_groups(), self.params).detach()
        obs = self.obs.copy()
        obs[4] += 1.
        q2 = self.net(obs, two_groups(), self.params).detach()
        # leader sharing carries group two's change into group one
        self.assertFalse(torch.equal(q[1], q2[1]))

    def testGradients(self):
        for seed, cfg in [(0, small_cfg()),
                          (1, small_cfg(down_edge_uses_up_message=True)),
                          (2, small_cfg())]:
            net = HcommNetwork(SPEC, 3, cfg)
            params = random_params(net, seed)
            x = torch.as_tensor(np.random.default_rng(seed).normal(
                size=(5, 6)), dtype=DTYPE)
            topology = two_groups()
            self.assertTrue(check_gradients(
                lambda obs, p: net(obs, topology, p), params, x))

    def testRandomGradients(self):
        rng = np.random.default_rng(31)
        kinds = [HIERARCHICAL, HIERARCHICAL, STAR, NEIGHBORING,
                 FULLY_CONNECTED, TREE]
        cluster = ClusterConfig(radius=0.6)
        for trial in range(100):
            cfg = small_cfg(hidden_dim=3, msg_dim=2, q_hidden=(3,),
                            phi_layers=int(rng.integers(1, 3)),
                            down_edge_uses_up_message=bool(rng.integers(2)))
            net = HcommNetwork(SPEC, 3, cfg)
            params = random_params(net, trial)
            n = int(rng.integers(2, 7))
            pos = rng.uniform(0., 1.5, size=(n, 2))
            kind = kinds[trial % len(kinds)]
            if kind == HIERARCHICAL:
                weights = {i: int(rng.integers(3)) for i in range(n)}
                topology = cbrp(Topology.empty(), weights, pos, cluster)
            else:
                topology = build_baseline(kind, pos, cluster.radius)
            x = torch.as_tensor(rng.normal(size=(n, 6)), dtype=DTYPE)
            self.assertTrue(check_gradients(
                lambda obs, p: net(obs, topology, p), params, x),
                'trial %d (%s)' % (trial, kind))

    def testPhiDepth(self):
        deep = HcommNetwork(SPEC, 5, small_cfg(hidden_dim=16, msg_dim=8,
                                               q_hidden=(8,), phi_layers=2))
        params = deep.init_params(0)
        self.assertIn('up_edge.l0.weight', params.names())
        self.assertEqual(tuple(params['up_edge.l0.weight'].shape), (8, 16))
        self.assertEqual(tuple(params['up_edge.weight'].shape), (8, 8))
        self.assertEqual(
            len(params.names()) - len(self.params.names()), 6 * 2)
        q = deep(self.obs, two_groups(), params)
        self.assertEqual(tuple(q.shape), (5, 5))
        with self.assertRaises(ConfigError):
            small_cfg(phi_layers=0).validate()

    def testGridGradients(self):
        net = HcommNetwork(GRID, 4, small_cfg())
        params = random_params(net, 5)
        x = torch.as_tensor(np.random.default_rng(5).normal(
            size=(5, GRID.dim)), dtype=DTYPE)
        topology = two_groups()
        self.assertTrue(check_gradients(
            lambda obs, p: net(obs, topology, p), params, x))


if __name__ == "__main__":
    unittest.main()
