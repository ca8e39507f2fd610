"""
Finite-difference verification of the analytic gradients.
"""
import torch

from .paramset import DTYPE

EPS = 1e-5
RTOL = 1e-4
ATOL = 1e-7


def check_gradients(net, params, input, eps=EPS, rtol=RTOL, atol=ATOL,
                    raise_exception=False):
    """
    Compare reverse-mode gradients of 'net' with respect to its input and
    every parameter against central differences.

    Parameters
    ----------
    net : Layer | callable
        called as net(x, params)
    params : ParamSet
    input : torch.Tensor | np.ndarray
    eps : float
        finite difference step
    rtol : float
    atol : float

    Returns
    -------
    ok : bool
    """
    names = params.names()
    x = torch.as_tensor(input, dtype=DTYPE).detach().clone()
    x.requires_grad_(True)
    leaves = [params[n].detach().clone().requires_grad_(True) for n in names]

    def fn(x, *values):
        return net(x, params.bind(dict(zip(names, values))))

    return torch.autograd.gradcheck(
        fn, (x,) + tuple(leaves), eps=eps, rtol=rtol, atol=atol,
        raise_exception=raise_exception
    )


def check_function(fn, inputs, eps=EPS, rtol=RTOL, atol=ATOL,
                   raise_exception=False):
    """
    Same check for an arbitrary function of float64 tensors
    """
    inputs = tuple(torch.as_tensor(t, dtype=DTYPE).detach().clone()
                   .requires_grad_(True) for t in inputs)
    return torch.autograd.gradcheck(fn, inputs, eps=eps, rtol=rtol,
                                    atol=atol,
                                    raise_exception=raise_exception)
