"""
Temporal-difference losses of the weight generator and of the
communication-based policy, and target maintenance.
"""
from dataclasses import dataclass
import numpy as np
import torch

from ..exceptions import ConfigError, EmptyBatchError
from ..numcore import Tape, backward, soft_update, DTYPE
from ..parameters import Parameters
from ..topology import Topology
from .exploration import select_discrete

PM = Parameters()


@dataclass
class LearnerConfig:
    """
    Parameters
    ----------
    gamma : float
        discount
    tau : float
        soft target update rate
    batch_size : int
    lr : float
        Adam learning rate
    update_rounds : int
        gradient updates per episode
    weight_target : str
        bootstrap the weight generator from its 'target' or 'online' copy
    """
    gamma: float = PM.gamma
    tau: float = PM.tau
    batch_size: int = PM.spread_batch_size
    lr: float = PM.spread_lr
    beta1: float = PM.adam_beta1
    beta2: float = PM.adam_beta2
    eps: float = PM.adam_eps
    update_rounds: int = PM.update_rounds
    replay_capacity: int = PM.replay_capacity
    eps_start: float = PM.eps_start
    eps_end: float = PM.eps_end
    eps_decay_fraction: float = PM.eps_decay_fraction
    weight_target: str = PM.weight_target

    @classmethod
    def for_scenario(cls, name, ps=None, **kwargs):
        if ps is None:
            ps = PM
        battle = name == 'battle'
        values = dict(
            gamma=ps.gamma, tau=ps.tau,
            batch_size=ps.battle_batch_size if battle
            else ps.spread_batch_size,
            lr=ps.battle_lr if battle else ps.spread_lr,
            beta1=ps.adam_beta1, beta2=ps.adam_beta2, eps=ps.adam_eps,
            update_rounds=ps.update_rounds,
            replay_capacity=ps.replay_capacity,
            eps_start=ps.eps_start, eps_end=ps.eps_end,
            eps_decay_fraction=ps.eps_decay_fraction,
            weight_target=ps.weight_target
        )
        values.update(kwargs)
        return cls(**values)

    def validate(self):
        if not 0. < self.gamma < 1.:
            raise ConfigError('learner.gamma must lie in (0,1)')
        if not 0. < self.tau <= 1.:
            raise ConfigError('learner.tau must lie in (0,1]')
        if self.batch_size <= 0 or self.update_rounds <= 0 \
                or self.replay_capacity <= 0:
            raise ConfigError('learner batch_size, update_rounds and '
                              'replay_capacity must be positive')
        if self.lr <= 0:
            raise ConfigError('learner.lr must be positive')
        if not 0. <= self.eps_end <= self.eps_start <= 1.:
            raise ConfigError('need 0 <= eps_end <= eps_start <= 1')
        if self.weight_target not in ['target', 'online']:
            raise ConfigError("learner.weight_target must be 'target' or "
                              "'online'")
        return self


def bellman_targets(rewards, next_max, terminal, gamma):
    """
    y = r + gamma * max Q(next) for live continuations, y = r at terminals

    Parameters
    ----------
    rewards : torch.Tensor
        (n,)
    next_max : torch.Tensor
        (n,) max next-state values (ignored where terminal)
    terminal : torch.Tensor
        (n,) bool
    gamma : float

    Returns
    -------
    y : torch.Tensor
        (n,)
    """
    return torch.where(terminal, rewards, rewards + gamma * next_max)


def squared_residual(q_taken, y):
    """Summed squared TD residual of one sample"""
    return ((q_taken - y) ** 2).sum()


def batch_mean(residuals):
    if len(residuals) == 0:
        raise EmptyBatchError('loss over an empty batch')
    return torch.stack(residuals).mean()


def _check_batch(batch):
    if len(batch) == 0:
        raise EmptyBatchError('loss over an empty batch')


def _as_tensor(x, dtype=DTYPE):
    return torch.as_tensor(np.asarray(x), dtype=dtype)


def _targets(tr, rows, next_values):
    """
    Bellman targets for the agents alive at the step

    Parameters
    ----------
    tr : Transition
    rows : np.ndarray
        rows of the agents alive at the step
    next_values : dict
        row -> max next Q of the agents alive after the step
    """
    terminal = [tr.done or not tr.next_alive[r] for r in rows]
    next_max = [0. if t else next_values[r] for r, t in zip(rows, terminal)]
    return (_as_tensor(tr.rewards[rows]), _as_tensor(next_max),
            torch.as_tensor(terminal, dtype=torch.bool))


def _finish(loss, params, accumulate):
    if accumulate:
        backward(Tape(loss, params), 1., params)
    return loss


def weight_generator_loss(batch, wnet, params, target, gamma,
                          accumulate=True):
    """
    TD loss of the communication weight generator: mean over the batch of
    sum_i (Q(o_i, w_i) - y_i)^2 with y_i = r_i + gamma * max_w Q'(o'_i, w).

    Parameters
    ----------
    batch : list
        Transition records
    wnet : IndependentQNetwork
        weight generator (one output per weight level)
    params : ParamSet
        online parameters, receive the gradients
    target : ParamSet
        parameters used for the bootstrap values (the online set itself for
        online bootstrapping)
    gamma : float
    accumulate : bool
        run the backward pass into 'params'

    Returns
    -------
    loss : torch.Tensor
        scalar
    """
    _check_batch(batch)
    residuals = []
    for tr in batch:
        rows = tr.live_rows()
        nxt = tr.next_live_rows()
        next_values = {}
        if not tr.done and len(nxt):
            with torch.no_grad():
                q_next = wnet(tr.next_observations[nxt], target)
            next_values = dict(zip(nxt, q_next.max(dim=1)[0].tolist()))
        q = wnet(tr.observations[rows], params)
        taken = q.gather(1, _as_tensor(tr.weights[rows], torch.long)[:, None])
        r, next_max, terminal = _targets(tr, rows, next_values)
        residuals.append(squared_residual(
            taken[:, 0], bellman_targets(r, next_max, terminal, gamma)))
    return _finish(batch_mean(residuals), params, accumulate)


def greedy_weights(wnet, params, observations, ids):
    """
    Greedy weight of every agent from the weight generator

    Returns
    -------
    weights : dict
        agent id -> weight
    """
    if len(ids) == 0:
        return {}
    with torch.no_grad():
        q = wnet(observations, params).numpy()
    return {int(i): select_discrete(q[k], 0., None)
            for k, i in enumerate(ids)}


def _live(tr, rows, positions, observations):
    ids = [tr.ids[r] for r in rows]
    pos = {tr.ids[r]: positions[r] for r in rows}
    return ids, pos, observations[rows]


def policy_loss(batch, net, params, target, builder, gamma,
                next_weights=None, accumulate=True):
    """
    TD loss of the communication-based policy. The topology of every
    sample is rebuilt from the stored positions, weights and previous
    leaders, then rebuilt again for the next state from the first one.

    Parameters
    ----------
    batch : list
        Transition records
    net : HcommNetwork
    params : ParamSet
        online parameters, receive the gradients
    target : ParamSet
        target parameters for the bootstrap values
    builder : TopologyBuilder
    gamma : float
    next_weights : callable
        next_weights(transition, rows, ids) -> dict of next-step weights
        for the agents alive after the step; needed by 'lsc'
    accumulate : bool

    Returns
    -------
    loss : torch.Tensor
        scalar
    """
    _check_batch(batch)
    residuals = []
    for tr in batch:
        rows = tr.live_rows()
        ids, pos, obs = _live(tr, rows, tr.positions, tr.observations)
        weights = {tr.ids[r]: int(tr.weights[r]) for r in rows}
        prev = Topology(high_level=frozenset(tr.prev_high))
        topo = builder.build(prev, weights, pos)

        nxt = tr.next_live_rows()
        next_values = {}
        if not tr.done and len(nxt):
            n_ids, n_pos, n_obs = _live(tr, nxt, tr.next_positions,
                                        tr.next_observations)
            n_weights = {}
            if builder.learns_weights:
                n_weights = next_weights(tr, nxt, n_ids)
            n_topo = builder.build(topo, n_weights, n_pos)
            with torch.no_grad():
                q_next = net(n_obs, n_topo, target, ids=n_ids)
            next_values = dict(zip(nxt, q_next.max(dim=1)[0].tolist()))

        q = net(obs, topo, params, ids=ids)
        taken = q.gather(1, _as_tensor(tr.actions[rows], torch.long)[:, None])
        r, next_max, terminal = _targets(tr, rows, next_values)
        residuals.append(squared_residual(
            taken[:, 0], bellman_targets(r, next_max, terminal, gamma)))
    return _finish(batch_mean(residuals), params, accumulate)


def idqn_loss(batch, net, params, target, gamma, accumulate=True):
    """
    Independent Q-learning loss: the policy loss with no communication
    """
    _check_batch(batch)
    residuals = []
    for tr in batch:
        rows = tr.live_rows()
        nxt = tr.next_live_rows()
        next_values = {}
        if not tr.done and len(nxt):
            with torch.no_grad():
                q_next = net(tr.next_observations[nxt], target)
            next_values = dict(zip(nxt, q_next.max(dim=1)[0].tolist()))
        q = net(tr.observations[rows], params)
        taken = q.gather(1, _as_tensor(tr.actions[rows], torch.long)[:, None])
        r, next_max, terminal = _targets(tr, rows, next_values)
        residuals.append(squared_residual(
            taken[:, 0], bellman_targets(r, next_max, terminal, gamma)))
    return _finish(batch_mean(residuals), params, accumulate)


def update_targets(pairs, tau):
    """
    Soft update of every (target, online) ParamSet pair
    """
    for target, online in pairs:
        soft_update(target, online, tau)
