from .replay import Transition, ReplayBuffer
from .exploration import EpsilonSchedule, select_discrete
from .builder import TopologyBuilder, LSC, LSC_FIX, RUN_KINDS
from .losses import (LearnerConfig, bellman_targets, weight_generator_loss,
                     policy_loss, idqn_loss, greedy_weights, update_targets)
from .agent import QAgent, ActResult
from .idqn import IdqnLearner
