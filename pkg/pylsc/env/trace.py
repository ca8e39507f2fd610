"""
Line-delimited episode traces for offline inspection.
"""
import json
import os
from collections import defaultdict


def trace_records(tick, positions, joint, result, ids=None):
    """
    One record per agent for a single step

    Parameters
    ----------
    tick : int
        tick at which the actions were taken
    positions : np.ndarray | dict
        agent id -> (2,) position before the step
    joint : JointAction
    result : StepResult
    ids : list[int]
        agents to record (default all)

    Returns
    -------
    records : list[dict]
    """
    tags = defaultdict(list)
    for agent, tag, _ in result.info['events']:
        tags[agent].append(tag)
    if ids is None:
        ids = range(len(joint.actions))
    return [
        dict(tick=int(tick), agent=int(i),
             position=[float(v) for v in positions[i]],
             action=int(joint.actions[i]), reward=float(result.rewards[i]),
             events=tags[i])
        for i in ids
    ]


class TraceWriter(object):
    """
    Append trace records to a JSON-lines file

    Parameters
    ----------
    path : str
        output file; parent directories are created
    """
    def __init__(self, path):
        self.path = path
        self._fh = None

    def __enter__(self):
        os.makedirs(os.path.dirname(os.path.abspath(self.path)), exist_ok=True)
        self._fh = open(self.path, 'w')
        return self

    def __exit__(self, *exc):
        self._fh.close()
        self._fh = None

    def write(self, records, **extra):
        for rec in records:
            rec = dict(extra, **rec)
            self._fh.write(json.dumps(rec, sort_keys=True) + '\n')
