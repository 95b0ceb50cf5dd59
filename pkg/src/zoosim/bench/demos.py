"""Demonstration collection: resumable newline-delimited index + frame files.

Layout under out_dir:
  index.jsonl   one JSON record per step: episode, step, seed, relstate,
                action, reward, done, frame file names (absent when the env
                renders no modalities)
  frames/       raw frame payloads, ep{E:05d}_st{S:06d}_{modality}.bin

Episode seeds derive deterministically from the base seed and episode
index, so an interrupted run resumes to the exact requested step count and
rewards replay exactly.
"""

from __future__ import annotations

import json
import os

from ..errors import IOFailure


def episode_seed(base_seed: int, episode_index: int) -> int:
    return int(base_seed) * 100_000 + episode_index


def _existing_steps(index_path: str) -> tuple[int, int]:
    """Returns (steps_recorded, next_episode_index)."""
    if not os.path.exists(index_path):
        return 0, 0
    steps = 0
    last_ep = -1
    with open(index_path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            steps += 1
            last_ep = rec["episode"]
    return steps, last_ep + 1


def collect_demonstrations(env, expert, total_steps: int, out_dir,
                           base_seed: int = 0) -> str:
    """Append steps until the index holds exactly total_steps records."""
    out_dir = str(out_dir)
    frames_dir = os.path.join(out_dir, "frames")
    index_path = os.path.join(out_dir, "index.jsonl")
    try:
        os.makedirs(frames_dir, exist_ok=True)
        have, episode = _existing_steps(index_path)
        if have >= total_steps:
            return index_path
        with open(index_path, "a", encoding="utf-8") as index:
            steps = have
            while steps < total_steps:
                seed = episode_seed(base_seed, episode)
                obs = env.reset(seed)
                if hasattr(expert, "reset"):
                    expert.reset(env, obs)
                ep_step = 0
                while steps < total_steps:
                    action = expert.act(obs)
                    result = env.step(action)
                    rec = {
                        "episode": episode, "step": ep_step, "seed": seed,
                        "relstate": [float(v)
                                     for v in obs["relative_state"]],
                        "action": _action_doc(action),
                        "reward": result.reward,
                        "done": result.terminated or result.truncated,
                    }
                    files = {}
                    for m, frame in obs.get("frames", {}).items():
                        name = f"ep{episode:05d}_st{ep_step:06d}_{m}.bin"
                        with open(os.path.join(frames_dir, name), "wb") as fh:
                            fh.write(frame.payload)
                        files[m] = name
                    if files:
                        rec["frames"] = files
                    index.write(json.dumps(rec, sort_keys=True) + "\n")
                    steps += 1
                    ep_step += 1
                    obs = result.observation
                    if rec["done"]:
                        break
                index.flush()
                episode += 1
        return index_path
    except OSError as e:
        # leave no half-written record behind
        _truncate_to_complete_lines(index_path)
        raise IOFailure(f"cannot write demonstrations to {out_dir}: {e}") from e


def _action_doc(action):
    if hasattr(action, "angular"):
        return [action.angular, action.linear]
    if isinstance(action, (tuple, list)):
        return [float(v) for v in action]
    return action


def _truncate_to_complete_lines(path: str) -> None:
    if not os.path.exists(path):
        return
    try:
        with open(path, "rb") as f:
            data = f.read()
        cut = data.rfind(b"\n")
        with open(path, "wb") as f:
            f.write(data[:cut + 1] if cut >= 0 else b"")
    except OSError:
        pass


def load_demonstrations(out_dir) -> list[dict]:
    index_path = os.path.join(str(out_dir), "index.jsonl")
    out = []
    with open(index_path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out


def replay_rewards(env, expert, records, episode: int) -> list[float]:
    """Re-simulate one recorded episode; returns its reward sequence."""
    ep = [r for r in records if r["episode"] == episode]
    if not ep:
        return []
    obs = env.reset(ep[0]["seed"])
    if hasattr(expert, "reset"):
        expert.reset(env, obs)
    rewards = []
    for _ in ep:
        action = expert.act(obs)
        result = env.step(action)
        rewards.append(result.reward)
        obs = result.observation
        if result.terminated or result.truncated:
            break
    return rewards
