"""
Named parameter containers. Every learnable tensor of the package (weight
generator, policy network, GNN, and their target copies) lives in a ParamSet.
"""
from collections import OrderedDict
import torch

from ..exceptions import ShapeError

DTYPE = torch.float64


class ParamSet(object):
    """
    Ordered map of named float64 tensors with their gradients.

    Parameters
    ----------
    entries : dict
        optional initial name -> tensor map
    """
    def __init__(self, entries=None):
        self.entries = OrderedDict()
        self._optimizer = None
        if entries is not None:
            for name, value in entries.items():
                self.add(name, value)

    def add(self, name, value):
        """
        Register a new parameter (copied, float64, requiring grad)

        Returns
        -------
        param : torch.Tensor
            the stored leaf tensor
        """
        assert name not in self.entries, 'duplicate parameter %r' % name
        assert self._optimizer is None, 'optimizer already bound'
        param = torch.as_tensor(value, dtype=DTYPE).detach().clone()
        param.requires_grad_(True)
        self.entries[name] = param
        return param

    def __getitem__(self, name):
        return self.entries[name]

    def __contains__(self, name):
        return name in self.entries

    def __len__(self):
        return len(self.entries)

    def names(self):
        return list(self.entries.keys())

    def items(self):
        return self.entries.items()

    def parameters(self):
        """
        Returns a list of parameters that can be optimized via gradient descent.

        Returns
        -------
        parameters : list
            optimizable parameters
        """
        return list(self.entries.values())

    def grad(self, name):
        """
        Accumulated gradient of one parameter (zeros before any backward)
        """
        p = self.entries[name]
        if p.grad is None:
            return torch.zeros_like(p)
        return p.grad

    def zero_grad(self):
        for p in self.entries.values():
            p.grad = None

    def train(self):
        """
        makes params require grad
        """
        for p in self.entries.values():
            p.requires_grad_(True)

    def eval(self):
        """
        makes params require no grad
        """
        for p in self.entries.values():
            p.requires_grad_(False)

    def copy(self):
        """
        Deep copy of the values (no gradients, no optimizer state)
        """
        return ParamSet(OrderedDict(
            (name, p.detach()) for name, p in self.entries.items()
        ))

    def bind(self, values):
        """
        View with some entries substituted by caller tensors. The tensors
        are used as given, so gradients flow back to them.

        Parameters
        ----------
        values : dict
            name -> tensor, names must already exist

        Returns
        -------
        view : ParamSet
        """
        view = ParamSet()
        for name, p in self.entries.items():
            view.entries[name] = values.get(name, p)
        for name, v in values.items():
            if name not in self.entries:
                raise ShapeError('unknown parameter %r' % name)
            if v.shape != self.entries[name].shape:
                raise ShapeError('parameter %r has shape %s, expected %s'
                                 % (name, tuple(v.shape),
                                    tuple(self.entries[name].shape)))
        return view

    def state(self):
        """
        Returns
        -------
        state : OrderedDict
            name -> detached copy of the value
        """
        return OrderedDict((name, p.detach().clone())
                           for name, p in self.entries.items())

    def load_state(self, state):
        """
        Overwrite the values in place from a name -> array map

        Parameters
        ----------
        state : dict
            must hold exactly this set's names with matching shapes
        """
        if set(state.keys()) != set(self.entries.keys()):
            missing = sorted(set(self.entries) - set(state))
            extra = sorted(set(state) - set(self.entries))
            raise ShapeError('parameter names differ (missing %s, extra %s)'
                             % (missing, extra))
        with torch.no_grad():
            for name, p in self.entries.items():
                value = torch.as_tensor(state[name], dtype=DTYPE)
                if value.shape != p.shape:
                    raise ShapeError(
                        'parameter %r has shape %s, expected %s'
                        % (name, tuple(value.shape), tuple(p.shape))
                    )
                p.copy_(value)

    def optimizer(self, lr, betas=(0.9, 0.999), eps=1e-8):
        """
        The Adam optimizer owning this set's moment estimates. Created on
        first use; later calls update the hyper-parameters.
        """
        if self._optimizer is None:
            self._optimizer = torch.optim.Adam(
                self.parameters(), lr=lr, betas=betas, eps=eps, foreach=False
            )
        else:
            for group in self._optimizer.param_groups:
                group['lr'] = lr
                group['betas'] = betas
                group['eps'] = eps
        return self._optimizer

    def __repr__(self):
        shapes = ', '.join('%s%s' % (n, tuple(p.shape))
                           for n, p in self.entries.items())
        return 'ParamSet(%s)' % shapes
