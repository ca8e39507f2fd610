import math
import numpy as np


class EpsilonSchedule(object):
    """
    Linear decay from 'start' to 'end' over 'decay_steps' episodes, then
    constant.

    Parameters
    ----------
    start : float
    end : float
    decay_steps : int
    """
    def __init__(self, start=1.0, end=0.01, decay_steps=1):
        assert 0. <= end <= start <= 1.
        self.start = start
        self.end = end
        self.decay_steps = max(int(decay_steps), 0)

    @classmethod
    def for_run(cls, cfg, episodes):
        """
        Schedule decaying over the configured fraction of a run

        Parameters
        ----------
        cfg : LearnerConfig
        episodes : int
        """
        steps = int(math.ceil(cfg.eps_decay_fraction * episodes))
        return cls(cfg.eps_start, cfg.eps_end, steps)

    def value(self, episode):
        if self.decay_steps == 0:
            return self.end
        frac = min(max(episode, 0) / self.decay_steps, 1.)
        return self.start + frac * (self.end - self.start)

    def __call__(self, episode):
        return self.value(episode)


def select_discrete(q_values, epsilon, rng):
    """
    Epsilon-greedy choice

    Parameters
    ----------
    q_values : np.ndarray | torch.Tensor
        (n,) values, n > 0
    epsilon : float
        exploration probability
    rng : np.random.Generator
        not consumed when epsilon is 0

    Returns
    -------
    index : int
        argmax (lowest index on ties) or, with probability epsilon, a
        uniform random index
    """
    q = np.asarray(q_values, dtype=np.float64).reshape(-1)
    assert q.size > 0
    if epsilon > 0 and rng.random() < epsilon:
        return int(rng.integers(q.size))
    return int(np.argmax(q))
