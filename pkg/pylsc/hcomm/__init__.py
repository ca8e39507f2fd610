from .features import NodeFeatures, EdgeMessage, UP, INTER, DOWN, PHASES
from .gnn import (NetworkConfig, ObservationEncoder, IndependentQNetwork,
                  HcommNetwork, encode, intra_aggregate, inter_share,
                  intra_share, baseline_round, hcomm_features, hcomm_forward)
