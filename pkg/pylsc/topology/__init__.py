from .structure import *
from .cbrp import cbrp, fixed_weights
from .baselines import build_baseline
from .cost import account_cost
