from .config import (AgentSpec, ObservationSpec, TaskConfig, dump_config,
                     load_config, parse_config)
from .env import Env, StepResult, make_env
from .rewards import (NavRewardParams, TrackingRewardParams, nav_reward,
                      tracking_reward)
from .wrappers import (AugmentationWrapper, EnvWrapper, PopulationWrapper,
                       TimeDilationWrapper, wrap_augmentation,
                       wrap_population, wrap_time_dilation)

__all__ = [
    "AgentSpec", "ObservationSpec", "TaskConfig", "dump_config", "load_config",
    "parse_config", "Env", "StepResult", "make_env", "NavRewardParams",
    "TrackingRewardParams", "nav_reward", "tracking_reward",
    "AugmentationWrapper", "EnvWrapper", "PopulationWrapper",
    "TimeDilationWrapper", "wrap_augmentation", "wrap_population",
    "wrap_time_dilation",
]
