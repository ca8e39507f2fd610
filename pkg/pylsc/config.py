"""
Structured run configuration: YAML files with one section per component
(scenario, cluster, network, learner, run) and dotted command-line overrides.
"""
from dataclasses import fields, asdict, replace
import hashlib
import json
import logging
import os
import typing
import yaml

from .env.base import ScenarioConfig, SCENARIOS, SPREAD
from .exceptions import ConfigError, ConfigNotFoundError
from .harness.metrics import RunConfig
from .hcomm.gnn import NetworkConfig
from .learner.losses import LearnerConfig
from .parameters import Parameters
from .topology.structure import ClusterConfig

__all__ = ['ScenarioConfig', 'ClusterConfig', 'NetworkConfig',
           'LearnerConfig', 'RunConfig', 'SECTIONS', 'load_config',
           'default_run_config', 'apply_overrides', 'parse_override',
           'config_to_dict', 'config_hash']

logger = logging.getLogger(__name__)

PRESETS = ('desk', 'full')
SECTIONS = {
    'scenario': ScenarioConfig,
    'cluster': ClusterConfig,
    'network': NetworkConfig,
    'learner': LearnerConfig,
    'run': RunConfig,
}
# RunConfig fields holding the other sections
NESTED = ('scenario', 'learner', 'cluster', 'network')


def _section_fields(section):
    names = [f.name for f in fields(SECTIONS[section])]
    if section == 'run':
        names = [n for n in names if n not in NESTED]
    return names


def _coerce(section, key, value, hint):
    where = '%s.%s' % (section, key)
    origin = typing.get_origin(hint)
    if origin is tuple:
        if isinstance(value, int) and not isinstance(value, bool):
            value = [value]
        if not isinstance(value, (list, tuple)) or not all(
                isinstance(v, int) and not isinstance(v, bool)
                for v in value):
            raise ConfigError('%s expects a list of integers, got %r'
                              % (where, value))
        return tuple(value)
    if hint is bool:
        if not isinstance(value, bool):
            raise ConfigError('%s expects true/false, got %r' % (where, value))
        return value
    if hint is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError('%s expects an integer, got %r' % (where, value))
        return value
    if hint is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError('%s expects a number, got %r' % (where, value))
        return float(value)
    if hint is str:
        if not isinstance(value, str):
            raise ConfigError('%s expects a string, got %r' % (where, value))
        return value
    raise ConfigError('%s cannot be set from a config file' % where)


def _set(cfg, section, key, value):
    """
    Return a copy of 'cfg' with one section field replaced (type-checked)
    """
    if section not in SECTIONS:
        raise ConfigError('unknown config section %r (choose from %s)'
                          % (section, ', '.join(sorted(SECTIONS))))
    if key not in _section_fields(section):
        raise ConfigError('unknown key %r in section %r' % (key, section))
    hints = typing.get_type_hints(SECTIONS[section])
    value = _coerce(section, key, value, hints[key])
    if section == 'run':
        return replace(cfg, **{key: value})
    sub = replace(getattr(cfg, section), **{key: value})
    return replace(cfg, **{section: sub})


def parse_override(text):
    """
    Parse 'section.key=value'; the value follows YAML scalar rules

    Returns
    -------
    section : str
    key : str
    value : object
    """
    if '=' not in text:
        raise ConfigError('override %r is not of the form section.key=value'
                          % text)
    path, raw = text.split('=', 1)
    if path.count('.') != 1:
        raise ConfigError('override key %r is not of the form section.key'
                          % path)
    section, key = path.strip().split('.')
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as err:
        raise ConfigError('cannot parse override value %r: %s' % (raw, err))
    return section, key, value


def apply_overrides(cfg, overrides):
    """
    Parameters
    ----------
    cfg : RunConfig
    overrides : list
        'section.key=value' strings

    Returns
    -------
    cfg : RunConfig
        validated copy
    """
    for text in overrides or ():
        section, key, value = parse_override(text)
        cfg = _set(cfg, section, key, value)
    return cfg.validate()


def default_run_config(name=SPREAD, preset='desk'):
    """
    Defaults of one task

    Parameters
    ----------
    name : str
        'battle' or 'spread'
    preset : str
        'desk' or 'full'
    """
    if name not in SCENARIOS:
        raise ConfigError('unknown scenario %r' % name)
    if preset not in PRESETS:
        raise ConfigError('unknown preset %r (choose from %s)'
                          % (preset, ', '.join(PRESETS)))
    return RunConfig.for_scenario(name, Parameters(preset)).validate()


def _read_yaml(path):
    if not os.path.isfile(path):
        raise ConfigNotFoundError('config file %s not found' % path)
    with open(path) as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as err:
            raise ConfigError('cannot parse %s: %s' % (path, err))
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError('%s must hold a mapping of sections' % path)
    return data


def load_config(path, overrides=(), preset=None):
    """
    Load a run configuration. Defaults come from the scenario's preset,
    then the file's sections, then the overrides.

    Parameters
    ----------
    path : str
        YAML file
    overrides : list
        'section.key=value' strings
    preset : str
        'desk' or 'full'; default the file's 'preset' key, else 'desk'

    Returns
    -------
    cfg : RunConfig
    """
    data = _read_yaml(path)
    if preset is None:
        preset = data.get('preset', 'desk')
    entries = []
    for section, values in data.items():
        if section == 'preset':
            continue
        if section not in SECTIONS:
            raise ConfigError('unknown config section %r in %s'
                              % (section, path))
        if not isinstance(values, dict):
            raise ConfigError('section %r in %s must be a mapping'
                              % (section, path))
        entries.extend((section, k, v) for k, v in values.items())
    entries.extend(parse_override(text) for text in overrides or ())

    # the scenario name picks the defaults every other key refines
    name = SPREAD
    for section, key, value in entries:
        if (section, key) == ('scenario', 'name'):
            name = value
    cfg = default_run_config(name, preset)
    for section, key, value in entries:
        cfg = _set(cfg, section, key, value)
    logger.debug('loaded config %s (%s preset, %d entries)', path, preset,
                 len(entries))
    return cfg.validate()


def config_to_dict(cfg):
    """
    Plain nested dict of a RunConfig, one entry per section
    """
    run = asdict(cfg)
    out = {section: run.pop(section) for section in NESTED}
    out['run'] = run
    return json.loads(json.dumps(out))


def config_hash(cfg):
    """sha256 of the canonical JSON form of the configuration"""
    text = json.dumps(config_to_dict(cfg), sort_keys=True)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()
