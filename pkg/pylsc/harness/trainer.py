"""
Training loop: per step weight choice, topology construction, communication
and action choice; per episode K replay updates of the weight generator and
the policy, each followed by soft target updates.
"""
from dataclasses import dataclass, field
import hashlib
import json
import logging
import math
import os
import numpy as np

from .. import config as run_config
from ..env import make_env
from ..exceptions import NonFiniteError
from ..learner import ReplayBuffer, EpsilonSchedule
from ..numcore import save_checkpoint
from ..util.general import episode_seed
from .agents import make_agent
from .metrics import CsvLog, METRICS_COLUMNS, COST_COLUMNS
from .rollout import run_episode

logger = logging.getLogger(__name__)

FINAL = 'final.ckpt'


@dataclass
class RunResult:
    """
    Outputs of one training run (one seed)
    """
    seed: int
    run_dir: str
    metrics_path: str
    costs_path: str
    checkpoints: list = field(default_factory=list)
    episode_rewards: list = field(default_factory=list)
    transitions: int = 0
    updates: int = 0

    @property
    def final_checkpoint(self):
        return self.checkpoints[-1] if self.checkpoints else None


def checkpoint_name(episode):
    return 'episode_%06d.ckpt' % episode


def write_manifest(cfg, seed, run_dir):
    manifest = dict(config=run_config.config_to_dict(cfg), seed=seed,
                    config_sha256=run_config.config_hash(cfg))
    path = os.path.join(run_dir, 'manifest.json')
    with open(path, 'w') as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
    return path


def _dump_diagnostic(run_dir, episode, update, losses, err):
    path = os.path.join(run_dir, 'diagnostic.json')
    with open(path, 'w') as f:
        json.dump(dict(episode=episode, update=update, losses=losses,
                       error=str(err)), f, indent=2, sort_keys=True,
                  default=repr)
    logger.error('non-finite loss at episode %d update %d; diagnostic in %s',
                 episode, update, path)


def _mean(values):
    values = [v for v in values if v is not None]
    return float(np.mean(values)) if values else None


def train_seed(cfg, seed):
    """
    Train one agent of the configured kind with one seed

    Parameters
    ----------
    cfg : RunConfig
    seed : int

    Returns
    -------
    result : RunResult
    """
    cfg.validate()
    run_dir = cfg.run_dir(seed)
    os.makedirs(run_dir, exist_ok=True)
    write_manifest(cfg, seed, run_dir)
    env = make_env(cfg.scenario)
    agent = make_agent(cfg, env, seed)
    lc = cfg.learner
    replay = ReplayBuffer(lc.replay_capacity)
    schedule = EpsilonSchedule.for_run(lc, cfg.episodes)
    act_rng = np.random.default_rng([seed, 3])
    sample_rng = np.random.default_rng([seed, 2])
    result = RunResult(seed=seed, run_dir=run_dir,
                       metrics_path=os.path.join(run_dir, 'metrics.csv'),
                       costs_path=os.path.join(run_dir, 'costs.csv'))
    logger.info('training %s on %s, seed %d, %d episodes -> %s', cfg.kind,
                cfg.scenario.name, seed, cfg.episodes, run_dir)

    with CsvLog(result.metrics_path, 'metrics', METRICS_COLUMNS) as metrics, \
            CsvLog(result.costs_path, 'costs', COST_COLUMNS) as costs:
        for episode in range(cfg.episodes):
            eps = schedule(episode)
            stats = run_episode(env, agent, episode_seed(seed, episode), eps,
                                act_rng, store=replay.add, debug=cfg.debug,
                                radius=cfg.cluster.radius)
            result.transitions += stats.steps
            for tick, cost in enumerate(stats.costs):
                costs.write([episode] + cost.as_row(tick, cfg.kind))

            losses = []
            for k in range(lc.update_rounds):
                batch = replay.sample(min(lc.batch_size, len(replay)),
                                      sample_rng)
                try:
                    out = agent.update(batch)
                except NonFiniteError as err:
                    _dump_diagnostic(run_dir, episode, k, losses, err)
                    raise
                if not all(math.isfinite(v) for v in out.values()
                           if v is not None):
                    err = NonFiniteError('non-finite loss %s' % out)
                    _dump_diagnostic(run_dir, episode, k, losses + [out], err)
                    raise err
                agent.update_targets()
                losses.append(out)
                result.updates += 1

            weight_loss = _mean([o['weight_loss'] for o in losses])
            policy_loss = _mean([o['policy_loss'] for o in losses])
            metrics.write([episode, stats.mean_step_reward,
                           stats.episode_reward, weight_loss, policy_loss,
                           eps, len(replay), stats.kills, stats.deaths,
                           stats.successes, stats.overloads,
                           stats.mean_n_msg])
            result.episode_rewards.append(stats.episode_reward)
            logger.info('episode %d/%d reward %.4f eps %.3f policy_loss %s',
                        episode + 1, cfg.episodes, stats.episode_reward, eps,
                        '%.5g' % policy_loss if policy_loss is not None
                        else '-')

            last = episode + 1 == cfg.episodes
            if (episode + 1) % cfg.eval_every == 0 or last:
                # logs on disk cover every checkpointed episode
                metrics.flush()
                costs.flush()
                path = os.path.join(run_dir, checkpoint_name(episode + 1))
                save_checkpoint(path, agent.state())
                result.checkpoints.append(path)
            if last:
                path = os.path.join(run_dir, FINAL)
                save_checkpoint(path, agent.state())
                result.checkpoints.append(path)
    return result


def train(cfg):
    """
    Train every configured seed in turn

    Parameters
    ----------
    cfg : RunConfig

    Returns
    -------
    results : list
        RunResult per seed
    """
    cfg.validate()
    return [train_seed(cfg, seed) for seed in cfg.seeds]


def file_digest(path):
    h = hashlib.sha256()
    with open(path, 'rb') as f:
        h.update(f.read())
    return h.hexdigest()
