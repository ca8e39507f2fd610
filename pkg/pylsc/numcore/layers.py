"""
Differentiable layers. Layers hold no tensors: they name their parameters and
read them from the ParamSet they are called with.
"""
from abc import ABCMeta, abstractmethod
import math
import torch
import torch.nn.functional as F

from ..exceptions import ShapeError, NonFiniteError
from ..util.general import stable_seed
from .paramset import DTYPE

__all__ = ['Layer', 'Affine', 'ReLU', 'Concat', 'SegmentSum', 'Conv2d',
           'Sequential', 'mlp', 'segment_sum', 'glorot_uniform']


def glorot_uniform(shape, fan_in, fan_out, generator):
    bound = math.sqrt(6. / (fan_in + fan_out))
    u = torch.rand(shape, generator=generator, dtype=DTYPE)
    return (2 * u - 1) * bound


def _generator(seed, name):
    return torch.Generator().manual_seed(stable_seed(seed, name))


def segment_sum(values, segments, num_groups):
    """
    Row-wise sum of 'values' per group; empty groups give zero rows

    Parameters
    ----------
    values : torch.Tensor
        (m,f) rows
    segments : torch.Tensor | list
        (m,) group index of every row
    num_groups : int

    Returns
    -------
    out : torch.Tensor
        (num_groups,f) sums
    """
    segments = torch.as_tensor(segments, dtype=torch.long).reshape(-1)
    if values.dim() != 2 or values.shape[0] != segments.shape[0]:
        raise ShapeError('segment_sum got %d labels for values of shape %s'
                         % (segments.shape[0], tuple(values.shape)))
    if segments.numel() > 0:
        lo, hi = int(segments.min()), int(segments.max())
        if lo < 0 or hi >= num_groups:
            raise ShapeError('segment index out of range [0, %d)'
                             % num_groups)
    out = values.new_zeros((num_groups, values.shape[1]))
    return out.index_add(0, segments, values)


class Layer(metaclass=ABCMeta):
    """
    Abstract base class for layers.

    Parameters
    ----------
    name : str
        prefix of the parameter names
    in_dim : int | None
        trailing input dimension (None accepts any)
    out_dim : int | None
        trailing output dimension (None means 'same as input')
    """
    kind = None

    def __init__(self, name, in_dim=None, out_dim=None):
        self.name = name
        self.in_dim = in_dim
        self.out_dim = out_dim

    def param_names(self):
        return []

    def init_params(self, params, seed):
        """
        Add this layer's freshly initialised parameters to 'params'. Each
        layer draws from its own stream so that identically named layers
        start identically whatever network holds them.
        """
        pass

    @abstractmethod
    def apply(self, x, params):
        pass

    def __call__(self, x, params):
        y = self.apply(x, params)
        if not bool(torch.isfinite(y).all()):
            raise NonFiniteError('%s layer %r produced non-finite values'
                                 % (self.kind, self.name))
        return y

    def _check_input(self, x):
        if self.in_dim is not None and x.shape[-1] != self.in_dim:
            raise ShapeError('%s layer %r expects %d inputs, got %d'
                             % (self.kind, self.name, self.in_dim,
                                x.shape[-1]))

    def __repr__(self):
        return '%s(%r, %s -> %s)' % (type(self).__name__, self.name,
                                     self.in_dim, self.out_dim)


class Affine(Layer):
    kind = 'affine'

    def __init__(self, name, in_dim, out_dim):
        super(Affine, self).__init__(name, in_dim, out_dim)

    def param_names(self):
        return [self.name + '.weight', self.name + '.bias']

    def init_params(self, params, seed):
        g = _generator(seed, self.name)
        params.add(self.name + '.weight',
                   glorot_uniform((self.out_dim, self.in_dim), self.in_dim,
                                  self.out_dim, g))
        params.add(self.name + '.bias', torch.zeros(self.out_dim, dtype=DTYPE))

    def apply(self, x, params):
        self._check_input(x)
        return F.linear(x, params[self.name + '.weight'],
                        params[self.name + '.bias'])


class ReLU(Layer):
    kind = 'relu'

    def __init__(self, name='relu', dim=None):
        super(ReLU, self).__init__(name, dim, dim)

    def apply(self, x, params):
        self._check_input(x)
        return torch.relu(x)


class Concat(Layer):
    """
    Joins a tuple of inputs along the last axis
    """
    kind = 'concat'

    def __init__(self, name='concat', in_dims=None):
        self.in_dims = None if in_dims is None else tuple(in_dims)
        out = None if in_dims is None else sum(in_dims)
        super(Concat, self).__init__(name, None, out)

    def apply(self, xs, params):
        xs = tuple(xs)
        if self.in_dims is not None:
            got = tuple(x.shape[-1] for x in xs)
            if got != self.in_dims:
                raise ShapeError('concat %r expects widths %s, got %s'
                                 % (self.name, self.in_dims, got))
        return torch.cat(xs, dim=-1)


class SegmentSum(Layer):
    """
    Called with (values, segments, num_groups)
    """
    kind = 'segment_sum'

    def apply(self, inputs, params):
        values, segments, num_groups = inputs
        self._check_input(values)
        return segment_sum(values, segments, num_groups)


class Conv2d(Layer):
    """
    Same-padded convolution over flattened (channels, view, view) windows.

    Parameters
    ----------
    name : str
    in_channels : int
    out_channels : int
    view : int
        window side length
    kernel : int
        odd kernel side length
    """
    kind = 'conv2d'

    def __init__(self, name, in_channels, out_channels, view, kernel=3):
        assert kernel % 2 == 1
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.view = view
        self.kernel = kernel
        super(Conv2d, self).__init__(name, in_channels * view * view,
                                     out_channels * view * view)

    def param_names(self):
        return [self.name + '.weight', self.name + '.bias']

    def init_params(self, params, seed):
        g = _generator(seed, self.name)
        k = self.kernel
        shape = (self.out_channels, self.in_channels, k, k)
        params.add(self.name + '.weight',
                   glorot_uniform(shape, self.in_channels * k * k,
                                  self.out_channels * k * k, g))
        params.add(self.name + '.bias',
                   torch.zeros(self.out_channels, dtype=DTYPE))

    def apply(self, x, params):
        self._check_input(x)
        lead = x.shape[:-1]
        grid = x.reshape(-1, self.in_channels, self.view, self.view)
        y = F.conv2d(grid, params[self.name + '.weight'],
                     params[self.name + '.bias'], padding=self.kernel // 2)
        return y.reshape(*lead, self.out_dim)


class Sequential(Layer):
    """
    Composition of layers; consecutive widths must agree

    Parameters
    ----------
    name : str
    layers : list
        Layer instances applied in order
    """
    kind = 'sequential'

    def __init__(self, name, layers):
        self.layers = list(layers)
        assert len(self.layers) > 0
        width = self.layers[0].in_dim
        for layer in self.layers:
            if layer.in_dim is not None and width is not None \
                    and layer.in_dim != width:
                raise ShapeError('layer %r expects %d inputs but receives %d'
                                 % (layer.name, layer.in_dim, width))
            if layer.out_dim is not None:
                width = layer.out_dim
        super(Sequential, self).__init__(name, self.layers[0].in_dim, width)

    def param_names(self):
        return [n for layer in self.layers for n in layer.param_names()]

    def init_params(self, params, seed):
        for layer in self.layers:
            layer.init_params(params, seed)

    def apply(self, x, params):
        for layer in self.layers:
            x = layer(x, params)
        return x


def mlp(name, in_dim, hidden, out_dim=None, final_relu=False):
    """
    Affine layers with ReLU in between. Hidden layers are named
    '<name>.l<k>', the output layer '<name>.out'.

    Parameters
    ----------
    name : str
    in_dim : int
    hidden : tuple
        hidden widths
    out_dim : int
        output width; None stops after the last hidden layer
    final_relu : bool
        apply ReLU to the output too

    Returns
    -------
    net : Sequential
    """
    layers = []
    width = in_dim
    for k, h in enumerate(hidden):
        layers.append(Affine('%s.l%d' % (name, k), width, h))
        layers.append(ReLU('%s.relu%d' % (name, k), h))
        width = h
    if out_dim is not None:
        layers.append(Affine('%s.out' % name, width, out_dim))
        if final_relu:
            layers.append(ReLU('%s.relu_out' % name, out_dim))
    return Sequential(name, layers)
