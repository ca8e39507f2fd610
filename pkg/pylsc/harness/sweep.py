"""
Train and evaluate several communication variants over shared seeds and
tabulate them side by side.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
import logging
import math
import os
import numpy as np

from ..exceptions import ConfigError
from .evaluate import evaluate
from .metrics import CsvLog
from .trainer import train_seed

logger = logging.getLogger(__name__)

OK = 'ok'
AGGREGATE = 'aggregate'
VALUE_COLUMNS = ['first_reward', 'last_reward', 'eval_mean_reward',
                 'kd_ratio', 'n_kills', 'n_deaths', 'n_success',
                 'n_overload', 'mean_n_msg']
COMPARISON_COLUMNS = ['kind', 'seed', 'status'] + VALUE_COLUMNS


def window_means(rewards, fraction=0.1):
    """
    Mean of the first and of the last 'fraction' of a reward curve (at
    least one episode each)
    """
    n = max(1, int(math.ceil(fraction * len(rewards))))
    return float(np.mean(rewards[:n])), float(np.mean(rewards[-n:]))


def run_variant(cfg, seed):
    """
    Train one variant on one seed and evaluate its final checkpoint

    Returns
    -------
    row : dict
        COMPARISON_COLUMNS entries
    """
    result = train_seed(cfg, seed)
    first, last = window_means(result.episode_rewards)
    report, _ = evaluate(result.final_checkpoint, cfg, cfg.eval_trials, seed,
                         out_dir=os.path.join(result.run_dir, 'eval'))
    return dict(kind=cfg.kind, seed=seed, status=OK, first_reward=first,
                last_reward=last, eval_mean_reward=report.mean_reward,
                kd_ratio=report.kd_ratio, n_kills=report.n_kills,
                n_deaths=report.n_deaths, n_success=report.n_success,
                n_overload=report.n_overload,
                mean_n_msg=report.cost.get('n_msg', 0.))


def _guarded(cfg, seed):
    try:
        return run_variant(cfg, seed)
    except Exception as err:
        logger.warning('run %s seed %d failed: %s: %s', cfg.kind, seed,
                       type(err).__name__, err)
        return dict(kind=cfg.kind, seed=seed,
                    status='failed: %s: %s' % (type(err).__name__, err))


def aggregate(rows, kind):
    ok = [r for r in rows if r['kind'] == kind and r['status'] == OK]
    out = dict(kind=kind, seed='mean', status=AGGREGATE)
    for key in VALUE_COLUMNS:
        values = [r[key] for r in ok]
        out[key] = float(np.mean(values)) if values else None
    return out


def sweep(cfgs, workers=1, out_path=None):
    """
    Parameters
    ----------
    cfgs : list
        RunConfig per variant; all on the same scenario
    workers : int
        parallel training processes (1 runs everything in this process)
    out_path : str
        comparison CSV (default <output_dir of the first config>/
        comparison.csv)

    Returns
    -------
    rows : list
        per-seed rows followed by one aggregate row per variant
    """
    if not cfgs:
        raise ConfigError('sweep needs at least one configuration')
    names = set(cfg.scenario.name for cfg in cfgs)
    if len(names) != 1:
        raise ConfigError('sweep configurations mix scenarios %s'
                          % sorted(names))
    for cfg in cfgs:
        cfg.validate()
    jobs = [(replace(cfg, seeds=(seed,)), seed)
            for cfg in cfgs for seed in cfg.seeds]
    logger.info('sweep: %d variants, %d runs, %d workers', len(cfgs),
                len(jobs), workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_guarded, cfg, seed) for cfg, seed in jobs]
            rows = [f.result() for f in futures]
    else:
        rows = [_guarded(cfg, seed) for cfg, seed in jobs]

    kinds = []
    for cfg in cfgs:
        if cfg.kind not in kinds:
            kinds.append(cfg.kind)
    table = rows + [aggregate(rows, kind) for kind in kinds]

    if out_path is None:
        out_path = os.path.join(cfgs[0].output_dir, 'comparison.csv')
    os.makedirs(os.path.dirname(os.path.abspath(out_path)), exist_ok=True)
    with CsvLog(out_path, 'comparison', COMPARISON_COLUMNS) as log:
        for row in table:
            log.write([row.get(c) for c in COMPARISON_COLUMNS])
    logger.info('sweep: wrote %s', out_path)
    return table
