"""
pyLSC - learned structured communication for multi-agent Q-learning.

Agents elect a sparse two-level communication hierarchy every step with a
cluster-based routing protocol, exchange learned messages over it with a
three-phase graph network, and learn both their communication weights and
their actions with deep Q-learning. Two environments are included: a grid
battle against a scripted opponent and a cooperative landmark-spread task.
"""
__version__ = "0.1"
import os

DEFAULT_OUTPUT_DIR = os.environ.get('LSC_OUTPUT_DIR', 'runs')
