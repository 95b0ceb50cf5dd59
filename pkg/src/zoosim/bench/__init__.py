from .episodes import (EpisodeRecord, MetricsSummary, compute_metrics,
                       load_records, report, run_episode, run_episodes,
                       save_records)
from .agents import (ExpertTrackerPolicy, HoldPolicy, OracleNavigatorPolicy,
                     PIDGains, PIDTrackerPolicy, PerturbationLevel,
                     RandomTrackerPolicy, expert_tracker)
from .demos import (collect_demonstrations, episode_seed, load_demonstrations,
                    replay_rewards)
from .launcher import Launcher, launch, wait_ready
from .vlm import (MockVLMServer, VLMClient, VLMNavigatorPolicy,
                  VLMTrackerPolicy, parse_nav_reply, parse_tracking_reply)

__all__ = [
    "EpisodeRecord", "MetricsSummary", "compute_metrics", "load_records",
    "report", "run_episode", "run_episodes", "save_records",
    "ExpertTrackerPolicy", "HoldPolicy", "OracleNavigatorPolicy", "PIDGains",
    "PIDTrackerPolicy", "PerturbationLevel", "RandomTrackerPolicy",
    "expert_tracker", "collect_demonstrations", "episode_seed",
    "load_demonstrations", "replay_rewards", "Launcher", "launch",
    "wait_ready", "MockVLMServer", "VLMClient", "VLMNavigatorPolicy",
    "VLMTrackerPolicy", "parse_nav_reply", "parse_tracking_reply",
]
