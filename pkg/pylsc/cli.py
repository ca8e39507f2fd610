"""
Command-line entry points.

    pylsc train   --config configs/spread.yaml --seed 1
    pylsc eval    --config configs/spread.yaml --checkpoint runs/lsc/seed_1/final.ckpt
    pylsc sweep   --config configs/spread.yaml --kinds lsc,star,idqn --workers 4
    pylsc cost    --kind fully-connected --n 6
    pylsc inspect --config configs/spread.yaml --checkpoint final.ckpt --tick 3

Exit codes: 0 success, 1 unexpected error, 2 bad arguments, 3 config file
not found, 4 config schema violation, 5 checkpoint/scenario action-space
mismatch, 6 unreadable checkpoint, 7 non-finite loss, 8 cluster election
did not converge. Failures print one line
'error=<name> code=<n> message=<text>' on stderr.
"""
from dataclasses import replace
import argparse
import logging
import os
import sys

from . import __version__
from .config import load_config, default_run_config, apply_overrides
from .env.base import SCENARIOS, SPREAD
from .exceptions import LSCError
from .harness import (train, evaluate, sweep, cost_rollout, snapshot,
                      file_digest, AGENT_KINDS)
from .learner import RUN_KINDS

logger = logging.getLogger(__name__)

LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR']
DEFAULT_SWEEP_KINDS = 'lsc,star,neighboring,idqn'


def _add_config_args(p):
    p.add_argument('--config', help='YAML run configuration')
    p.add_argument('--scenario', choices=SCENARIOS, default=SPREAD,
                   help='task defaults when no --config is given')
    p.add_argument('--preset', choices=['desk', 'full'],
                   help='parameter preset (default: the file\'s, else desk)')
    p.add_argument('--set', action='append', default=[], dest='overrides',
                   metavar='SECTION.KEY=VALUE',
                   help='override one config entry (repeatable)')
    p.add_argument('--out', help='output directory (default $LSC_OUTPUT_DIR '
                                 'or ./runs)')


def _run_config(args):
    if args.config:
        cfg = load_config(args.config, args.overrides, args.preset)
    else:
        cfg = apply_overrides(default_run_config(args.scenario,
                                                 args.preset or 'desk'),
                              args.overrides)
    if args.out:
        cfg = replace(cfg, output_dir=args.out)
    if getattr(args, 'seed', None) is not None and args.command == 'train':
        cfg = replace(cfg, seeds=(args.seed,))
    return cfg.validate()


def _print_digest(path):
    print('file=%s sha256=%s' % (path, file_digest(path)))


def cmd_train(args):
    cfg = _run_config(args)
    for result in train(cfg):
        print('seed=%d run_dir=%s episodes=%d updates=%d'
              % (result.seed, result.run_dir, len(result.episode_rewards),
                 result.updates))
        for path in [result.metrics_path, result.costs_path] + \
                result.checkpoints:
            _print_digest(path)


def cmd_eval(args):
    cfg = _run_config(args)
    out_dir = os.path.join(cfg.output_dir, 'eval', cfg.kind,
                           'seed_%d' % args.seed)
    report, _ = evaluate(args.checkpoint, cfg, args.trials, args.seed,
                         out_dir=out_dir)
    for key, value in report.as_dict().items():
        print('%s=%s' % (key, value))
    _print_digest(os.path.join(out_dir, 'eval.csv'))


def cmd_sweep(args):
    cfg = _run_config(args)
    kinds = [k.strip() for k in args.kinds.split(',') if k.strip()]
    unknown = [k for k in kinds if k not in AGENT_KINDS]
    if unknown:
        raise argparse.ArgumentTypeError('unknown kinds %s' % unknown)
    out_path = os.path.join(cfg.output_dir, 'comparison.csv')
    rows = sweep([replace(cfg, kind=k) for k in kinds], args.workers,
                 out_path)
    for row in rows:
        if row['status'] == 'aggregate':
            print('kind=%s last_reward=%s eval_mean_reward=%s kd_ratio=%s '
                  'mean_n_msg=%s' % (row['kind'], row['last_reward'],
                                     row['eval_mean_reward'],
                                     row['kd_ratio'], row['mean_n_msg']))
    _print_digest(out_path)


def cmd_cost(args):
    rows = cost_rollout(args.kind, args.n, args.steps, args.radius,
                        args.seed)
    for tick, cost in rows:
        print('tick=%d kind=%s n_msg=%d n_step=%d n_bandwidth=%d k=%d b=%d'
              % (tick, args.kind, cost.n_msg, cost.n_step, cost.n_bandwidth,
                 cost.k, cost.b))


def cmd_inspect(args):
    cfg = _run_config(args)
    snap = snapshot(args.checkpoint, cfg, args.seed, args.tick)
    lines = snap.lines()
    if args.out:
        path = os.path.join(cfg.output_dir, 'inspect_tick%04d.txt' % args.tick)
        os.makedirs(cfg.output_dir, exist_ok=True)
        with open(path, 'w') as f:
            f.write('\n'.join(lines) + '\n')
        _print_digest(path)
    else:
        print('\n'.join(lines))


class CliParser(argparse.ArgumentParser):
    """
    Usage errors print the one-line failure record and exit with status 2
    """
    def error(self, message):
        sys.stderr.write('error=ArgumentError code=2 message=%s: %s\n'
                         % (self.prog, ' '.join(message.split())))
        self.exit(2)


def build_parser():
    parser = CliParser(
        prog='pylsc',
        description='Learned structured communication for multi-agent '
                    'Q-learning'
    )
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    parser.add_argument('--log-level', choices=LOG_LEVELS, default='INFO')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('train', help='train one variant on every seed')
    _add_config_args(p)
    p.add_argument('--seed', type=int, help='train this seed only')
    p.set_defaults(func=cmd_train)

    p = sub.add_parser('eval', help='greedy evaluation of a checkpoint')
    _add_config_args(p)
    p.add_argument('--checkpoint', required=True)
    p.add_argument('--trials', type=int,
                   help='rollouts (default run.eval_trials)')
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser('sweep', help='train and compare several variants')
    _add_config_args(p)
    p.add_argument('--kinds', default=DEFAULT_SWEEP_KINDS,
                   help='comma separated variants (default %(default)s)')
    p.add_argument('--workers', type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('cost', help='communication cost of a random-walk '
                                    'rollout')
    p.add_argument('--kind', choices=RUN_KINDS, required=True)
    p.add_argument('--n', type=int, default=12, help='number of agents')
    p.add_argument('--steps', type=int, default=1)
    p.add_argument('--radius', type=float,
                   help='cluster radius (default the spread preset)')
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser('inspect', help='dump one step of a checkpoint: '
                                       'topology, messages and features')
    _add_config_args(p)
    p.add_argument('--checkpoint', required=True)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--tick', type=int, default=0)
    p.set_defaults(func=cmd_inspect)
    return parser


def fail(err, code):
    message = ' '.join(str(err).split())
    sys.stderr.write('error=%s code=%d message=%s\n'
                     % (type(err).__name__, code, message))
    return code


def main(argv=None):
    """
    Returns
    -------
    status : int
        process exit status
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s'
    )
    try:
        args.func(args)
    except LSCError as err:
        return fail(err, err.exit_code)
    except argparse.ArgumentTypeError as err:
        return fail(err, 2)
    except Exception as err:
        logger.debug('unexpected failure', exc_info=True)
        return fail(err, 1)
    return 0
