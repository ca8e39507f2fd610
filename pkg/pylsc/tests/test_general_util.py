import unittest
import numpy as np
import torch

from ..util.general import (aeq, pairwise_distances, neighbor_matrix,
                            stable_seed, episode_seed)


class TestGeneralUtil(unittest.TestCase):

    def testPairwiseDistances(self):
        pts = np.array([[0., 0.], [3., 4.], [0., 1.]])
        dist = pairwise_distances(pts)
        self.assertEqual(dist.shape, (3, 3))
        self.assertTrue(aeq(dist[0, 1], 5.))
        self.assertTrue(aeq(dist[1, 0], 5.))
        self.assertTrue(aeq(np.diag(dist), np.zeros(3)))

    def testNeighborMatrix(self):
        pts = np.array([[0., 0.], [0.5, 0.], [1., 0.]])
        nbr, dist = neighbor_matrix(pts, 0.5)
        # strictly closer than the radius
        self.assertFalse(nbr[0, 1])
        self.assertFalse(nbr.diagonal().any())
        nbr, _ = neighbor_matrix(pts, 0.6)
        self.assertTrue(nbr[0, 1] and nbr[1, 2])
        self.assertFalse(nbr[0, 2])
        self.assertTrue((nbr == nbr.T).all())

    def testStableSeed(self):
        self.assertEqual(stable_seed(1, 'layer'), stable_seed(1, 'layer'))
        self.assertNotEqual(stable_seed(1, 'a'), stable_seed(1, 'b'))
        self.assertNotEqual(stable_seed(1, 2), stable_seed(2, 1))
        s = episode_seed(3, 10, 1)
        self.assertTrue(0 <= s < 2**32)
        self.assertNotEqual(s, episode_seed(3, 10, 0))

    def testAEQ(self):
        self.assertTrue(aeq(1., 1. + 1e-7))
        self.assertFalse(aeq(1., 1.1))
        self.assertTrue(aeq([1., 2.], [1., 2.]))
        self.assertTrue(aeq(np.ones(3), np.ones(3)))
        self.assertTrue(aeq(torch.ones(2, 2), torch.ones(2, 2)))
        self.assertFalse(aeq(torch.ones(2), torch.zeros(2)))
        with self.assertRaises(AssertionError):
            aeq(np.ones(3), np.ones(4))


if __name__ == "__main__":
    unittest.main()
