"""
The `env` module contains the two seedable multi-agent environments: the
grid battle against a scripted opponent and the cooperative spread task.
"""
from .base import (AgentState, WorldState, Observation, ObservationSpec,
                   JointAction, StepResult, ScenarioConfig, Environment,
                   make_env, ALLY, ENEMY, BATTLE, SPREAD)
from .battle import BattleEnv, enemy_policy
from .spread import SpreadEnv
from .trace import TraceWriter, trace_records

__all__ = ["AgentState", "WorldState", "Observation", "ObservationSpec",
           "JointAction", "StepResult", "ScenarioConfig", "Environment",
           "make_env", "BattleEnv", "SpreadEnv", "enemy_policy",
           "TraceWriter", "trace_records", "ALLY", "ENEMY", "BATTLE",
           "SPREAD"]
