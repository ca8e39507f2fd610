import zlib
import numpy as np
import torch
from scipy.spatial.distance import cdist

__all__ = ['aeq', 'pairwise_distances', 'neighbor_matrix', 'episode_seed',
           'stable_seed']


def pairwise_distances(points):
    """
    Euclidean distance between every pair of points

    Parameters
    ----------
    points : np.ndarray
        (n,2) point coordinates

    Returns
    -------
    dist : np.ndarray
        (n,n) distance matrix
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    return cdist(points, points)


def neighbor_matrix(points, radius):
    """
    Boolean adjacency of points strictly closer than 'radius'. The diagonal
    is False.

    Parameters
    ----------
    points : np.ndarray
        (n,2) point coordinates
    radius : float
        neighbourhood radius

    Returns
    -------
    nbr : np.ndarray
        (n,n) boolean matrix
    dist : np.ndarray
        (n,n) distance matrix
    """
    dist = pairwise_distances(points)
    nbr = dist < radius
    np.fill_diagonal(nbr, False)
    return nbr, dist


def stable_seed(*parts):
    """
    Deterministic 63-bit seed from a mix of integers and strings. Unlike
    hash(), the result does not change between interpreter runs.
    """
    acc = 0
    for part in parts:
        if isinstance(part, str):
            part = zlib.crc32(part.encode('utf-8'))
        acc = (acc * 1000003 + int(part)) % (2**63 - 1)
    return acc


def episode_seed(seed, episode, stream=0):
    """
    Seed for the environment of one episode of one run
    """
    return stable_seed(seed, episode, stream) % (2**32)


def aeq(x, y, tol=2.22e-6):
    if isinstance(x, list):
        assert isinstance(y, list)
        diff = np.abs(np.asarray(x) - np.asarray(y))
        acceptable = diff < tol
        r = acceptable.all()
    elif isinstance(x, np.ndarray):
        assert isinstance(y, np.ndarray)
        assert x.shape == y.shape
        diff = np.abs(x.flatten() - y.flatten())
        acceptable = diff < tol
        r = acceptable.all()
    elif isinstance(x, torch.Tensor):
        assert isinstance(y, torch.Tensor)
        assert x.shape == y.shape
        diff = torch.abs(x.reshape(-1) - y.reshape(-1))
        acceptable = diff < tol
        r = bool(acceptable.all())
    else:
        diff = np.abs(x - y)
        r = diff < tol

    return r
