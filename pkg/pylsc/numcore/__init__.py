from .paramset import ParamSet, DTYPE
from .layers import *
from .tape import Tape, forward, backward
from .optim import adam_step, soft_update
from .checkpoint import encode, decode, save_checkpoint, load_checkpoint
from .gradcheck import check_gradients, check_function
