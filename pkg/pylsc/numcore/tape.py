"""
Forward evaluation with a recorded computation and reverse-mode gradient
accumulation into a ParamSet.
"""
import torch

from ..exceptions import ShapeError, TapeMismatchError, NonFiniteError
from .paramset import DTYPE


class Tape(object):
    """
    Record of one forward evaluation

    Parameters
    ----------
    output : torch.Tensor
        graph-attached output
    params : ParamSet
        parameters the output was computed from
    input : torch.Tensor
        leaf input tensor (None for outputs built outside `forward`)
    """
    def __init__(self, output, params, input=None):
        self.output = output
        self.params = params
        self.input = input

    @property
    def input_grad(self):
        """
        Gradient accumulated with respect to the input
        """
        if self.input is None or self.input.grad is None:
            return None
        return self.input.grad


def forward(net, input, params):
    """
    Evaluate a layer composition and record the computation

    Parameters
    ----------
    net : Layer
    input : torch.Tensor | np.ndarray
    params : ParamSet

    Returns
    -------
    output : torch.Tensor
        detached result
    tape : Tape
    """
    x = torch.as_tensor(input, dtype=DTYPE).detach().clone()
    x.requires_grad_(True)
    out = net(x, params)
    return out.detach(), Tape(out, params, x)


def backward(tape, output_grad, params):
    """
    Accumulate d(output . output_grad)/d(param) into every parameter's
    gradient. Repeated calls add up.

    Parameters
    ----------
    tape : Tape
    output_grad : torch.Tensor | float
        same shape as the recorded output
    params : ParamSet
        must be the set the tape was recorded with
    """
    if params is not tape.params:
        raise TapeMismatchError('tape was recorded with a different ParamSet')
    out = tape.output
    g = torch.as_tensor(output_grad, dtype=DTYPE)
    if g.dim() == 0 and out.dim() > 0:
        g = g.expand_as(out)
    if g.shape != out.shape:
        raise ShapeError('output gradient of shape %s for output of shape %s'
                         % (tuple(g.shape), tuple(out.shape)))
    if not bool(torch.isfinite(g).all()):
        raise NonFiniteError('non-finite output gradient')
    if not out.requires_grad:
        return
    torch.autograd.backward(out, g, retain_graph=True)
