import torch

from ..exceptions import ShapeError


def adam_step(params, lr, beta1=0.9, beta2=0.999, eps=1e-8):
    """
    One Adam update of every parameter from its accumulated gradient, then
    clear the gradients. Moment estimates persist inside the ParamSet.

    Parameters
    ----------
    params : ParamSet
    lr : float
    beta1 : float
    beta2 : float
    eps : float
    """
    optimizer = params.optimizer(lr, betas=(beta1, beta2), eps=eps)
    optimizer.step()
    params.zero_grad()


def soft_update(target, online, tau):
    """
    target <- tau * online + (1 - tau) * target, in place

    Parameters
    ----------
    target : ParamSet
    online : ParamSet
    tau : float
        in [0,1]
    """
    assert 0. <= tau <= 1.
    if target.names() != online.names():
        raise ShapeError('target and online parameter names differ')
    with torch.no_grad():
        for name, t in target.items():
            o = online[name]
            if t.shape != o.shape:
                raise ShapeError('parameter %r: target %s vs online %s'
                                 % (name, tuple(t.shape), tuple(o.shape)))
            t.mul_(1. - tau).add_(o, alpha=tau)
