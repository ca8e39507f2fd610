"""
Run configuration, evaluation report and the CSV logs of a run.
"""
from dataclasses import dataclass, field
from typing import Tuple
import csv
import math
import os

from .. import DEFAULT_OUTPUT_DIR
from ..env.base import ScenarioConfig, BATTLE
from ..exceptions import ConfigError
from ..hcomm.gnn import NetworkConfig
from ..learner.losses import LearnerConfig
from ..learner.builder import LSC
from ..parameters import Parameters
from ..topology.structure import ClusterConfig

SCHEMA_VERSION = 1
METRICS_COLUMNS = ['episode', 'mean_step_reward', 'episode_reward',
                   'weight_loss', 'policy_loss', 'epsilon', 'buffer_size',
                   'kills', 'deaths', 'successes', 'overloads', 'mean_n_msg']
COST_COLUMNS = ['episode', 'tick', 'kind', 'n_msg', 'n_step', 'n_bandwidth',
                'k', 'b']
EVAL_COLUMNS = ['trial', 'reward', 'steps', 'kills', 'deaths', 'successes',
                'overloads', 'mean_n_msg']

PM = Parameters()


@dataclass
class RunConfig:
    """
    Parameters
    ----------
    scenario : ScenarioConfig
        task; its horizon is the per-episode step limit T
    kind : str
        communication variant ('lsc', 'lsc-fix', 'star', 'neighboring',
        'fully-connected', 'tree', 'none' or 'idqn')
    episodes : int
        training episodes M per seed
    seeds : tuple
        one independent run per seed
    learner : LearnerConfig
    cluster : ClusterConfig
    network : NetworkConfig
    eval_every : int
        checkpoint cadence (episodes)
    eval_trials : int
        evaluation rollouts per checkpoint
    output_dir : str
    fixed_weight_level : int
        weight of every agent for 'lsc-fix'
    debug : bool
        assert the topology invariants at every step
    trace_eval : bool
        write JSON-lines traces of evaluation rollouts
    """
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig.spread)
    kind: str = LSC
    episodes: int = PM.spread_episodes
    seeds: Tuple[int, ...] = (0,)
    learner: LearnerConfig = field(default_factory=LearnerConfig)
    cluster: ClusterConfig = field(default_factory=ClusterConfig)
    network: NetworkConfig = field(default_factory=NetworkConfig)
    eval_every: int = PM.eval_every
    eval_trials: int = PM.eval_trials
    output_dir: str = DEFAULT_OUTPUT_DIR
    fixed_weight_level: int = PM.fixed_weight_level
    debug: bool = False
    trace_eval: bool = False

    @classmethod
    def for_scenario(cls, name, ps=None, **kwargs):
        """
        Defaults of one task from a Parameters preset
        """
        if ps is None:
            ps = PM
        battle = name == BATTLE
        values = dict(
            scenario=(ScenarioConfig.battle(ps) if battle
                      else ScenarioConfig.spread(ps)),
            episodes=ps.battle_episodes if battle else ps.spread_episodes,
            learner=LearnerConfig.for_scenario(name, ps),
            cluster=ClusterConfig(
                radius=ps.battle_radius if battle else ps.spread_radius,
                max_wait_rounds=ps.max_wait_rounds,
                rounds_cap=ps.rounds_cap),
            network=NetworkConfig.for_scenario(name, ps),
            eval_every=ps.eval_every, eval_trials=ps.eval_trials,
            fixed_weight_level=ps.fixed_weight_level
        )
        values.update(kwargs)
        return cls(**values)

    def validate(self):
        from .agents import AGENT_KINDS
        self.scenario.validate()
        self.learner.validate()
        self.cluster.validate()
        self.network.validate()
        if self.kind not in AGENT_KINDS:
            raise ConfigError('unknown topology kind %r (choose from %s)'
                              % (self.kind, ', '.join(AGENT_KINDS)))
        if self.episodes <= 0:
            raise ConfigError('run.episodes must be positive')
        if len(self.seeds) == 0:
            raise ConfigError('run.seeds must not be empty')
        if self.eval_every <= 0 or self.eval_trials <= 0:
            raise ConfigError('run.eval_every and run.eval_trials must be '
                              'positive')
        if self.fixed_weight_level not in (0, 1, 2):
            raise ConfigError('run.fixed_weight_level must be 0, 1 or 2')
        return self

    def run_dir(self, seed):
        return os.path.join(self.output_dir, self.kind, 'seed_%d' % seed)


@dataclass
class EvalReport:
    """
    Aggregate of greedy evaluation rollouts

    Parameters
    ----------
    mean_reward : float
        average per-step reward (battle) or per-episode reward (spread) of
        all agents, averaged over trials
    n_kills : int
    n_deaths : int
    kd_ratio : float
        n_kills/n_deaths (inf when only kills, 0 when neither)
    n_success : int
    n_overload : int
    cost : dict
        mean of every cost counter over all evaluated steps
    trials : int
    """
    mean_reward: float
    n_kills: int = 0
    n_deaths: int = 0
    kd_ratio: float = 0.
    n_success: int = 0
    n_overload: int = 0
    cost: dict = field(default_factory=dict)
    trials: int = 0

    @staticmethod
    def kd(kills, deaths):
        if deaths > 0:
            return kills / deaths
        return math.inf if kills > 0 else 0.

    def as_dict(self):
        out = dict(mean_reward=self.mean_reward, n_kills=self.n_kills,
                   n_deaths=self.n_deaths, kd_ratio=self.kd_ratio,
                   n_success=self.n_success, n_overload=self.n_overload,
                   trials=self.trials)
        for key, value in sorted(self.cost.items()):
            out['cost_' + key] = value
        return out


def fmt(value):
    """CSV cell text; None becomes an empty cell"""
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    return str(value)


class CsvLog(object):
    """
    CSV file with a schema line followed by the header row

    Parameters
    ----------
    path : str
    schema : str
        schema name written as '# schema=<name>/<version>'
    columns : list
    """
    def __init__(self, path, schema, columns):
        self.path = path
        self.columns = list(columns)
        self._fh = open(path, 'w', newline='')
        self._fh.write('# schema=%s/%d\n' % (schema, SCHEMA_VERSION))
        self._writer = csv.writer(self._fh)
        self._writer.writerow(self.columns)

    def write(self, row):
        assert len(row) == len(self.columns)
        self._writer.writerow([fmt(v) for v in row])

    def flush(self):
        self._fh.flush()

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_csv_log(path):
    """
    Returns
    -------
    rows : list
        one dict per data row
    """
    with open(path, newline='') as f:
        lines = [line for line in f if not line.startswith('#')]
    return list(csv.DictReader(lines))
