"""Episode runner, per-episode records, ER/EL/SR/SPL metrics, reporting.

SPL term per episode: S_i * p_i / max(p_i, l_i). For navigation, p_i is
the planner length to the success boundary (shortest path minus the
success radius, floored at 0) so an episode that stops at the boundary
scores 1. Tracking reports SPL as 0.
"""

from __future__ import annotations

import csv
import io
import json
import time
import traceback
from dataclasses import asdict, dataclass

from ..errors import EmptyInput


@dataclass
class EpisodeRecord:
    ret: float            # episodic return (sum of rewards)
    length: int           # steps
    success: bool
    path_length: float    # l_i, meters traveled
    shortest_length: float  # p_i, meters (0 for tracking)
    seed: int
    wall_time: float
    failed: bool = False  # policy raised; episode marked failed
    error: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "EpisodeRecord":
        return cls(**json.loads(line))


@dataclass(frozen=True)
class MetricsSummary:
    er: float
    el: float
    sr: float
    spl: float
    n_episodes: int

    def cell(self) -> str:
        """The familiar table cell shape, e.g. '321/468/0.76'."""
        return f"{self.er:.0f}/{self.el:.0f}/{self.sr:.2f}"


def run_episode(env, policy, seed: int) -> EpisodeRecord:
    t0 = time.perf_counter()
    total = 0.0
    steps = 0
    info = {}
    try:
        obs = env.reset(seed)
        if hasattr(policy, "reset"):
            policy.reset(env, obs)
        while True:
            action = policy.act(obs)
            result = env.step(action)
            obs = result.observation
            total += result.reward
            steps += 1
            info = result.info
            if result.terminated or result.truncated:
                break
        return EpisodeRecord(
            ret=total, length=steps, success=bool(info.get("success", False)),
            path_length=float(info.get("path_length", 0.0)),
            shortest_length=_p_i(env, info),
            seed=seed, wall_time=time.perf_counter() - t0)
    except Exception as e:
        return EpisodeRecord(
            ret=total, length=steps, success=False,
            path_length=float(info.get("path_length", 0.0)),
            shortest_length=0.0, seed=seed,
            wall_time=time.perf_counter() - t0, failed=True,
            error=f"{type(e).__name__}: {e} "
                  f"({traceback.format_exc(limit=1).strip()})")


def _p_i(env, info) -> float:
    base = env.unwrapped if hasattr(env, "unwrapped") else env
    if getattr(base, "tracking", True):
        return 0.0
    p = float(info.get("shortest_length", 0.0))
    if p != p:  # NaN: no finite route known
        return 0.0
    return max(p - base.nav_params.success_dist, 0.0)


def run_episodes(env, policy, n: int = 50, seeds=None) -> list[EpisodeRecord]:
    if n < 1:
        raise ValueError("n must be >= 1")
    if seeds is None:
        seeds = list(range(1, n + 1))
    if len(seeds) != n:
        raise ValueError(f"need {n} seeds, got {len(seeds)}")
    return [run_episode(env, policy, int(s)) for s in seeds]


def compute_metrics(records, task: str = "Tracking") -> MetricsSummary:
    records = list(records)
    if not records:
        raise EmptyInput("no episode records")
    n = len(records)
    er = sum(r.ret for r in records) / n
    el = sum(r.length for r in records) / n
    sr = sum(1 for r in records if r.success) / n
    if task.lower().startswith("nav"):
        spl = sum(
            (r.shortest_length / max(r.shortest_length, r.path_length)
             if r.success and max(r.shortest_length, r.path_length) > 0
             else (1.0 if r.success else 0.0))
            for r in records) / n
    else:
        spl = 0.0
    return MetricsSummary(er=er, el=el, sr=sr, spl=spl, n_episodes=n)


def save_records(records, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(r.to_json() + "\n")


def load_records(path) -> list[EpisodeRecord]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                out.append(EpisodeRecord.from_json(line))
    return out


def report(summaries, out_base) -> tuple[str, str]:
    """Write <out_base>.csv and <out_base>.txt; returns the two paths.

    summaries: list of (label, MetricsSummary) in column order.
    """
    csv_path = f"{out_base}.csv"
    txt_path = f"{out_base}.txt"
    with open(csv_path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["condition", "ER", "EL", "SR", "SPL", "episodes", "cell"])
        for label, s in summaries:
            w.writerow([label, f"{s.er:.6g}", f"{s.el:.6g}", f"{s.sr:.4f}",
                        f"{s.spl:.4f}", s.n_episodes, s.cell()])
    buf = io.StringIO()
    labels = [label for label, _ in summaries]
    width = max([len("ER/EL/SR")] + [len(s.cell()) for _, s in summaries] +
                [len(x) for x in labels]) + 2
    buf.write("".join(x.ljust(width) for x in labels).rstrip() + "\n")
    buf.write("".join(s.cell().ljust(width)
                      for _, s in summaries).rstrip() + "\n")
    with open(txt_path, "w", encoding="utf-8") as f:
        f.write(buf.getvalue())
    return csv_path, txt_path
