"""
Greedy evaluation of a trained checkpoint.
"""
import logging
import os
import numpy as np

from ..env import make_env, TraceWriter, BATTLE
from ..exceptions import ConfigError
from ..numcore import load_checkpoint
from ..util.general import episode_seed
from .agents import make_agent
from .metrics import EvalReport, CsvLog, EVAL_COLUMNS
from .rollout import run_episode, COST_KEYS

logger = logging.getLogger(__name__)

EVAL_STREAM = 1


def load_agent(checkpoint, cfg, seed=0):
    """
    Rebuild the configured agent and restore its parameters

    Returns
    -------
    env : Environment
    agent : QAgent
    """
    env = make_env(cfg.scenario)
    agent = make_agent(cfg, env, seed)
    agent.load_state(load_checkpoint(checkpoint))
    return env, agent


def evaluate(checkpoint, cfg, trials=None, seed=0, out_dir=None):
    """
    Roll out the greedy policy of a checkpoint

    Parameters
    ----------
    checkpoint : str
        checkpoint path
    cfg : RunConfig
        scenario and network configuration the checkpoint was trained with
    trials : int
        number of rollouts (default cfg.eval_trials)
    seed : int
        evaluation seed; trial t plays episode_seed(seed, t, 1)
    out_dir : str
        if given, per-trial rows (and traces when cfg.trace_eval) go here

    Returns
    -------
    report : EvalReport
    rows : list
        per-trial rows in EVAL_COLUMNS order
    """
    if trials is None:
        trials = cfg.eval_trials
    if trials <= 0:
        raise ConfigError('evaluation needs at least one trial')
    env, agent = load_agent(checkpoint, cfg, seed)
    rng = np.random.default_rng([seed, 4])
    battle = cfg.scenario.name == BATTLE
    rows = []
    totals = dict(kills=0, deaths=0, successes=0, overloads=0)
    rewards = []
    costs = []
    for t in range(trials):
        play = dict(env=env, agent=agent, epsilon=0., rng=rng,
                    seed=episode_seed(seed, t, EVAL_STREAM),
                    debug=cfg.debug, radius=cfg.cluster.radius)
        if out_dir is not None and cfg.trace_eval:
            path = os.path.join(out_dir, 'trace_%04d.jsonl' % t)
            with TraceWriter(path) as trace:
                stats = run_episode(trace=trace, **play)
        else:
            stats = run_episode(**play)
        reward = stats.mean_step_reward if battle else stats.episode_reward
        rewards.append(reward)
        costs.extend(stats.costs)
        for key in totals:
            totals[key] += getattr(stats, key)
        rows.append([t, reward, stats.steps, stats.kills, stats.deaths,
                     stats.successes, stats.overloads, stats.mean_n_msg])

    report = EvalReport(
        mean_reward=float(np.mean(rewards)),
        n_kills=totals['kills'], n_deaths=totals['deaths'],
        kd_ratio=EvalReport.kd(totals['kills'], totals['deaths']),
        n_success=totals['successes'], n_overload=totals['overloads'],
        cost={key: float(np.mean([getattr(c, key) for c in costs]))
              for key in COST_KEYS},
        trials=trials
    )
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        with CsvLog(os.path.join(out_dir, 'eval.csv'), 'eval',
                    EVAL_COLUMNS) as log:
            for row in rows:
                log.write(row)
    logger.info('evaluated %s over %d trials: mean reward %.4f',
                checkpoint, trials, report.mean_reward)
    return report, rows
