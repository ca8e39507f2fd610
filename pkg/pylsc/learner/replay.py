"""
Experience replay.
"""
from dataclasses import dataclass, field
import threading
import numpy as np

from ..exceptions import ShapeError, NonFiniteError, EmptyBatchError


@dataclass
class Transition:
    """
    Joint record of one step over every learner agent, dead ones included.

    Parameters
    ----------
    ids : tuple
        learner agent ids, one per row of every per-agent array
    observations : np.ndarray
        (n,obs_dim)
    positions : np.ndarray
        (n,2)
    weights : np.ndarray
        (n,) communication weights used at this step
    actions : np.ndarray
        (n,)
    rewards : np.ndarray
        (n,)
    next_observations : np.ndarray
        (n,obs_dim)
    next_positions : np.ndarray
        (n,2)
    done : bool
        episode ended with this step
    alive : np.ndarray
        (n,) liveness before the step
    next_alive : np.ndarray
        (n,) liveness after the step
    prev_high : frozenset
        leaders of the previous step's topology, enough to rebuild this
        step's topology exactly
    state_digest : str
        fingerprint of the world state before the step
    """
    ids: tuple
    observations: np.ndarray
    positions: np.ndarray
    weights: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_observations: np.ndarray
    next_positions: np.ndarray
    done: bool
    alive: np.ndarray
    next_alive: np.ndarray
    prev_high: frozenset = frozenset()
    state_digest: str = field(default='', compare=False)

    def __post_init__(self):
        n = len(self.ids)
        for key in ['observations', 'positions', 'weights', 'actions',
                    'rewards', 'next_observations', 'next_positions',
                    'alive', 'next_alive']:
            value = getattr(self, key)
            if len(value) != n:
                raise ShapeError('transition field %s has %d rows for %d '
                                 'agents' % (key, len(value), n))
        if not np.all(np.isfinite(self.rewards)):
            raise NonFiniteError('non-finite reward in transition')

    def live_rows(self):
        return np.flatnonzero(self.alive)

    def next_live_rows(self):
        return np.flatnonzero(self.next_alive)


class ReplayBuffer(object):
    """
    Ring buffer of transitions. One writer; readers sample from a snapshot.

    Parameters
    ----------
    capacity : int
        maximum number of stored transitions
    """
    def __init__(self, capacity):
        assert capacity > 0
        self.capacity = capacity
        self._items = []
        self._next = 0
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._items)

    def add(self, transition):
        with self._lock:
            if len(self._items) < self.capacity:
                self._items.append(transition)
            else:
                self._items[self._next] = transition
            self._next = (self._next + 1) % self.capacity

    def snapshot(self):
        with self._lock:
            return list(self._items)

    def sample(self, batch_size, rng):
        """
        Uniform sample without replacement

        Parameters
        ----------
        batch_size : int
            clipped to the buffer size
        rng : np.random.Generator

        Returns
        -------
        batch : list
            Transition records
        """
        items = self.snapshot()
        if not items or batch_size <= 0:
            raise EmptyBatchError('cannot sample from an empty replay buffer')
        size = min(batch_size, len(items))
        index = rng.choice(len(items), size=size, replace=False)
        return [items[k] for k in index]
