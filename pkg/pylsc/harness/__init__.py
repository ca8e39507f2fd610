from .metrics import (RunConfig, EvalReport, CsvLog, read_csv_log,
                      METRICS_COLUMNS, COST_COLUMNS, EVAL_COLUMNS)
from .agents import LscAgent, make_agent, AGENT_KINDS, IDQN
from .rollout import run_episode, EpisodeStats
from .trainer import train, train_seed, RunResult, file_digest
from .evaluate import evaluate, load_agent
from .sweep import sweep, window_means, COMPARISON_COLUMNS
from .audit import cost_rollout, snapshot, Snapshot
