"""
Hierarchical communication network: a shared observation encoder, the
three-phase message pass over a two-level topology (followers to leaders,
leaders to leaders, leaders back to everyone), and a shared Q head.
"""
from dataclasses import dataclass
from typing import Tuple
import logging
import torch

from ..exceptions import ConfigError
from ..parameters import Parameters
from ..numcore import (ParamSet, Layer, Affine, ReLU, Concat, Conv2d,
                       Sequential, mlp, segment_sum, DTYPE)
from ..topology.structure import HIERARCHICAL, NONE
from .features import NodeFeatures, EdgeMessage, UP, INTER, DOWN

logger = logging.getLogger(__name__)

PM = Parameters()


@dataclass
class NetworkConfig:
    """
    Parameters
    ----------
    hidden_dim : int
        size of the embedding, cluster and global features
    msg_dim : int
        size of one message
    phi_layers : int
        affine+ReLU layers in every edge and node update function
    conv_layers : int
        convolution layers of the grid encoder
    conv_channels : int
        channels of every convolution layer
    q_hidden : tuple
        hidden widths of the Q head
    n_weight_levels : int
        outputs of the weight generator
    down_edge_uses_up_message : bool
        also feed the reverse upward message to the downward edge function
    """
    hidden_dim: int = PM.hidden_dim
    msg_dim: int = PM.msg_dim
    phi_layers: int = PM.phi_layers
    conv_layers: int = PM.conv_layers
    conv_channels: int = PM.conv_channels
    q_hidden: Tuple[int, ...] = PM.spread_q_hidden
    n_weight_levels: int = PM.n_weight_levels
    down_edge_uses_up_message: bool = PM.down_edge_uses_up_message

    @classmethod
    def for_scenario(cls, name, ps=None, **kwargs):
        if ps is None:
            ps = PM
        values = dict(
            hidden_dim=ps.hidden_dim, msg_dim=ps.msg_dim,
            phi_layers=ps.phi_layers,
            conv_layers=ps.conv_layers, conv_channels=ps.conv_channels,
            q_hidden=tuple(ps.battle_q_hidden if name == 'battle'
                           else ps.spread_q_hidden),
            n_weight_levels=ps.n_weight_levels,
            down_edge_uses_up_message=ps.down_edge_uses_up_message
        )
        values.update(kwargs)
        return cls(**values)

    def validate(self):
        for key in ['hidden_dim', 'msg_dim', 'phi_layers', 'conv_channels',
                    'n_weight_levels']:
            if getattr(self, key) <= 0:
                raise ConfigError('network.%s must be positive' % key)
        if self.conv_layers < 0:
            raise ConfigError('network.conv_layers must be non-negative')
        if any(h <= 0 for h in self.q_hidden):
            raise ConfigError('network.q_hidden widths must be positive')
        return self


class ObservationEncoder(Layer):
    """
    Shared encoder from flat observation vectors to embeddings. Grid
    observations go through same-padded convolutions before their self
    features are appended; vector observations feed the affine layer
    directly.

    Parameters
    ----------
    spec : ObservationSpec
    cfg : NetworkConfig
    name : str
    """
    kind = 'encoder'

    def __init__(self, spec, cfg, name='encoder'):
        super(ObservationEncoder, self).__init__(name, spec.dim,
                                                 cfg.hidden_dim)
        self.spec = spec
        self.conv = None
        width = spec.dim
        if spec.kind == 'grid' and cfg.conv_layers > 0:
            layers = []
            channels = spec.channels
            for k in range(cfg.conv_layers):
                layers.append(Conv2d('%s.conv%d' % (name, k), channels,
                                     cfg.conv_channels, spec.view))
                layers.append(ReLU('%s.conv_relu%d' % (name, k)))
                channels = cfg.conv_channels
            self.conv = Sequential(name + '.conv', layers)
            self.grid_dim = spec.channels * spec.view * spec.view
            self.concat = Concat(name + '.concat',
                                 (self.conv.out_dim, spec.self_dim))
            width = self.concat.out_dim
        self.fc = Sequential(name + '.fc_block', [
            Affine(name + '.fc', width, cfg.hidden_dim),
            ReLU(name + '.fc_relu', cfg.hidden_dim)
        ])

    def param_names(self):
        names = [] if self.conv is None else self.conv.param_names()
        return names + self.fc.param_names()

    def init_params(self, params, seed):
        if self.conv is not None:
            self.conv.init_params(params, seed)
        self.fc.init_params(params, seed)

    def apply(self, x, params):
        self._check_input(x)
        if self.conv is not None:
            grid = self.conv(x[..., :self.grid_dim], params)
            x = self.concat((grid, x[..., self.grid_dim:]), params)
        return self.fc(x, params)


def _phi(name, in_dim, out_dim, depth=1):
    layers = []
    width = in_dim
    for k in range(depth - 1):
        layers.append(Affine('%s.l%d' % (name, k), width, out_dim))
        layers.append(ReLU('%s.relu%d' % (name, k), out_dim))
        width = out_dim
    layers.append(Affine(name, width, out_dim))
    layers.append(ReLU(name + '_relu', out_dim))
    return Sequential(name, layers)


class IndependentQNetwork(object):
    """
    Encoder followed by a Q head, no communication. Used for independent
    Q-learning and, with three outputs, as the communication weight
    generator.

    Parameters
    ----------
    spec : ObservationSpec
    n_out : int
        number of Q outputs
    cfg : NetworkConfig
    prefix : str
        prepended to every parameter name
    """
    def __init__(self, spec, n_out, cfg, prefix=''):
        self.spec = spec
        self.n_out = n_out
        self.cfg = cfg
        self.prefix = prefix
        self.encoder = ObservationEncoder(spec, cfg, prefix + 'encoder')
        self.head = mlp(prefix + 'head', cfg.hidden_dim, cfg.q_hidden, n_out)

    def layers(self):
        return [self.encoder, self.head]

    def init_params(self, seed):
        """
        Returns
        -------
        params : ParamSet
            freshly initialised parameters
        """
        params = ParamSet()
        for layer in self.layers():
            layer.init_params(params, seed)
        return params

    def param_names(self):
        return [n for layer in self.layers() for n in layer.param_names()]

    def __call__(self, observations, params):
        x = torch.as_tensor(observations, dtype=DTYPE)
        return self.head(self.encoder(x, params), params)


class HcommNetwork(IndependentQNetwork):
    """
    Policy network with hierarchical communication. All parameters
    (encoder, the six edge/node functions, Q head) live in one ParamSet and
    are shared by every agent.

    Parameters
    ----------
    spec : ObservationSpec
    n_actions : int
    cfg : NetworkConfig
    """
    def __init__(self, spec, n_actions, cfg, prefix=''):
        super(HcommNetwork, self).__init__(spec, n_actions, cfg, prefix)
        h, m, depth = cfg.hidden_dim, cfg.msg_dim, cfg.phi_layers
        down_in = 3 * h + (m if cfg.down_edge_uses_up_message else 0)
        self.up_edge = _phi(prefix + 'up_edge', h, m, depth)
        self.up_node = _phi(prefix + 'up_node', m + h, h, depth)
        self.inter_edge = _phi(prefix + 'inter_edge', 2 * h, m, depth)
        self.inter_node = _phi(prefix + 'inter_node', m + h, h, depth)
        self.down_edge = _phi(prefix + 'down_edge', down_in, m, depth)
        self.down_node = _phi(prefix + 'down_node', m + h, h, depth)

    def layers(self):
        return [self.encoder, self.up_edge, self.up_node, self.inter_edge,
                self.inter_node, self.down_edge, self.down_node, self.head]

    def __call__(self, observations, topology, params, ids=None, trace=None):
        return hcomm_forward(self, observations, topology, params, ids, trace)


def _trace(trace, phase, src, dst, payload):
    if trace is None:
        return
    values = payload.detach().cpu().numpy()
    for k, (i, j) in enumerate(zip(src, dst)):
        trace.append(EdgeMessage(int(i), int(j), values[k].copy(), phase))


def encode(net, observations, params, ids=None):
    """
    Local embedding of every live agent

    Parameters
    ----------
    net : IndependentQNetwork
    observations : np.ndarray | torch.Tensor
        (n,obs_dim) stacked observation vectors
    params : ParamSet
    ids : sequence
        agent id of every row (default 0..n-1)

    Returns
    -------
    features : NodeFeatures
    """
    x = torch.as_tensor(observations, dtype=DTYPE)
    if ids is None:
        ids = range(x.shape[0])
    return NodeFeatures(ids=tuple(int(i) for i in ids),
                        embed=net.encoder(x, params))


def intra_aggregate(net, features, topology, params, trace=None):
    """
    Followers send e_ij = up_edge(embed_i) to their leader; every leader
    sums what it receives and forms its cluster perception
    cluster_j = up_node(sum, embed_j).

    Returns
    -------
    features : NodeFeatures
        with 'leaders' and 'cluster' filled
    """
    assert topology.kind == HIERARCHICAL
    leaders = tuple(sorted(topology.high_level))
    lidx = {j: r for r, j in enumerate(leaders)}
    edges = sorted((i, j) for (i, j) in topology.edges
                   if i in topology.low_level and j in topology.high_level)
    src = [i for i, _ in edges]
    dst = [j for _, j in edges]
    e = net.up_edge(features.embed[features.rows(src)], params)
    _trace(trace, UP, src, dst, e)
    agg = segment_sum(e, [lidx[j] for j in dst], len(leaders))
    own = features.embed[features.rows(leaders)]
    cluster = net.up_node(torch.cat([agg, own], dim=-1), params)
    return features.replace(leaders=leaders, cluster=cluster)


def inter_share(net, features, topology, params, trace=None):
    """
    Leaders exchange e_ij = inter_edge(cluster_i, embed_i) and form their
    global perception global_j = inter_node(sum, embed_j).
    """
    lidx = features.leader_index
    edges = sorted((i, j) for (i, j) in topology.edges
                   if i in lidx and j in lidx)
    src = [i for i, _ in edges]
    dst = [j for _, j in edges]
    s_rows = torch.as_tensor([lidx[i] for i in src], dtype=torch.long)
    e = net.inter_edge(torch.cat([features.cluster[s_rows],
                                  features.embed[features.rows(src)]],
                                 dim=-1), params)
    _trace(trace, INTER, src, dst, e)
    agg = segment_sum(e, [lidx[j] for j in dst], len(features.leaders))
    own = features.embed[features.rows(features.leaders)]
    global_ = net.inter_node(torch.cat([agg, own], dim=-1), params)
    return features.replace(global_=global_)


def intra_share(net, features, topology, params, trace=None):
    """
    Leaders send e_ij = down_edge(global_i, cluster_i, embed_i) to their
    followers and to themselves; every receiver updates
    embed_j = down_node(sum, embed_j). Agents receiving nothing keep their
    embedding.
    """
    lidx = features.leader_index
    edges = sorted((i, j) for (i, j) in topology.edges
                   if i in lidx and j in topology.low_level)
    edges = sorted(edges + [(j, j) for j in features.leaders])
    src = [i for i, _ in edges]
    dst = [j for _, j in edges]
    s_lead = torch.as_tensor([lidx[i] for i in src], dtype=torch.long)
    s_rows = features.rows(src)
    parts = [features.global_[s_lead], features.cluster[s_lead],
             features.embed[s_rows]]
    if net.cfg.down_edge_uses_up_message:
        # reverse upward message; leaders' self messages have none
        back = net.up_edge(features.embed[features.rows(dst)], params)
        is_self = torch.as_tensor([i == j for i, j in edges],
                                  dtype=torch.bool)
        parts.append(torch.where(is_self[:, None],
                                 torch.zeros_like(back), back))
    e = net.down_edge(torch.cat(parts, dim=-1), params)
    _trace(trace, DOWN, src, dst, e)
    return _receive(net, features, dst, e, params)


def _receive(net, features, dst, e, params):
    n = len(features.ids)
    d_rows = features.rows(dst)
    agg = segment_sum(e, d_rows, n)
    mask = torch.zeros(n, dtype=torch.bool)
    mask[d_rows] = True
    updated = net.down_node(torch.cat([agg, features.embed], dim=-1), params)
    return features.replace(
        embed=torch.where(mask[:, None], updated, features.embed)
    )


def baseline_round(net, features, topology, params, trace=None):
    """
    One message round over a flat edge set: every edge carries
    up_edge(embed_i), receivers update with down_node(sum, embed_j).
    """
    edges = sorted(topology.edges)
    src = [i for i, _ in edges]
    dst = [j for _, j in edges]
    e = net.up_edge(features.embed[features.rows(src)], params)
    _trace(trace, UP, src, dst, e)
    return _receive(net, features, dst, e, params)


def hcomm_features(net, observations, topology, params, ids=None,
                   trace=None):
    """
    Encode, then run the message pass the topology calls for

    Returns
    -------
    features : NodeFeatures
    """
    features = encode(net, observations, params, ids)
    if topology.kind == NONE:
        return features
    if topology.kind == HIERARCHICAL:
        features = intra_aggregate(net, features, topology, params, trace)
        features = inter_share(net, features, topology, params, trace)
        return intra_share(net, features, topology, params, trace)
    return baseline_round(net, features, topology, params, trace)


def hcomm_forward(net, observations, topology, params, ids=None, trace=None):
    """
    Q-values of every live agent under the given communication structure

    Parameters
    ----------
    net : HcommNetwork
    observations : np.ndarray | torch.Tensor
        (n,obs_dim) observation vectors of the live agents
    topology : Topology
        structure over the same agents
    params : ParamSet
        parameters of 'net'
    ids : sequence
        agent id of every observation row (default 0..n-1)
    trace : list
        if given, receives every EdgeMessage of the pass

    Returns
    -------
    q : torch.Tensor
        (n,n_actions) Q-values
    """
    features = hcomm_features(net, observations, topology, params, ids, trace)
    return net.head(features.embed, params)
