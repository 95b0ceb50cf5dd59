"""zoosim command line: serve, eval, collect, launch, metrics, kernel-bench."""

from __future__ import annotations

import argparse
import json
import signal
import sys
import threading

from .envapi import load_config, make_env, wrap_population, wrap_time_dilation
from .errors import ZoosimError
from .protocol.commands import Dispatcher
from .protocol.framing import Endpoint
from .protocol.server import Server
from .world.generate import parse_generator_spec
from .world.scene import load_scene, save_scene
from .sim.world import World


def _parse_resolution(text: str) -> tuple[int, int]:
    w, h = text.lower().split("x")
    return int(w), int(h)


def _load_scene_arg(spec: str):
    if spec.startswith("generator:"):
        return parse_generator_spec(spec)
    return load_scene(spec)


def cmd_serve(args) -> int:
    if args.task:
        env = make_env(load_config(args.task))
        env.reset(args.seed)
        world = env.world
    else:
        env = None
        scene = _load_scene_arg(args.scene)
        world = World(scene, seed=args.seed)
    endpoint = Endpoint.ipc(args.ipc) if args.ipc else Endpoint.parse(args.tcp)
    resolution = _parse_resolution(args.resolution)
    dispatcher = Dispatcher(world, env=env, resolution=resolution)
    if env is not None:
        for cam_id, (entity_id, cfg) in env.camera_bindings().items():
            dispatcher.cameras[cam_id] = ("entity", entity_id, cfg)
    server = Server(dispatcher, endpoint).start()
    print(f"zoosim serving on {server.endpoint}", flush=True)
    stop = threading.Event()
    signal.signal(signal.SIGTERM, lambda *a: stop.set())
    signal.signal(signal.SIGINT, lambda *a: stop.set())
    try:
        stop.wait()
    finally:
        server.shutdown()
    return 0


def _build_policy(name: str, seed: int):
    from .bench import (ExpertTrackerPolicy, HoldPolicy, PIDTrackerPolicy,
                        RandomTrackerPolicy, VLMTrackerPolicy)

    if name == "pid":
        return PIDTrackerPolicy()
    if name == "expert":
        return ExpertTrackerPolicy(level=0, seed=seed)
    if name == "random":
        return RandomTrackerPolicy(seed=seed)
    if name == "hold":
        return HoldPolicy()
    if name == "vlm":
        return VLMTrackerPolicy()
    raise ZoosimError(f"unknown policy {name!r}")


def cmd_eval(args) -> int:
    from .bench import compute_metrics, report, run_episodes, save_records

    cfg = load_config(args.task)
    env = make_env(cfg)
    if args.distractors:
        env = wrap_population(env, args.distractors)
    if args.control_fps:
        fps = None if args.control_fps == "none" else float(args.control_fps)
        env = wrap_time_dilation(env, fps)
    policy = _build_policy(args.policy, args.seed)
    seeds = list(range(args.seed, args.seed + args.episodes))
    records = run_episodes(env, policy, args.episodes, seeds)
    summary = compute_metrics(records, cfg.task)
    label = (f"{args.policy}"
             f"{'+' + str(args.distractors) + 'D' if args.distractors else ''}"
             f"{'@' + args.control_fps + 'fps' if args.control_fps else ''}")
    csv_path, txt_path = report([(label, summary)], args.out)
    save_records(records, f"{args.out}.records.jsonl")
    print(f"{label}: ER/EL/SR = {summary.cell()}  SPL = {summary.spl:.3f}")
    print(f"wrote {csv_path}, {txt_path}, {args.out}.records.jsonl")
    return 0


def cmd_collect(args) -> int:
    from .bench import ExpertTrackerPolicy, collect_demonstrations

    cfg = load_config(args.task)
    env = make_env(cfg)
    expert = ExpertTrackerPolicy(level=args.perturb, seed=args.seed)
    index = collect_demonstrations(env, expert, args.steps, args.out,
                                   base_seed=args.seed)
    print(f"collected {args.steps} steps into {index}")
    return 0


def cmd_launch(args) -> int:
    from .bench import Launcher

    launcher = Launcher(args.k, args.base_port, scene=args.scene,
                        task=args.task, registry_path=args.registry).start()
    print(f"launched {args.k} workers; registry at {args.registry}", flush=True)
    for w in launcher.workers:
        print(f"  worker {w['worker']}: {w['endpoint']} pid={w['pid']}")
    stop = threading.Event()
    signal.signal(signal.SIGTERM, lambda *a: stop.set())
    signal.signal(signal.SIGINT, lambda *a: stop.set())
    try:
        stop.wait()
    finally:
        launcher.shutdown()
    return 0


def cmd_metrics(args) -> int:
    from .bench import compute_metrics, load_records, report

    records = load_records(args.records)
    summary = compute_metrics(records, args.task)
    report([(args.label, summary)], args.out)
    print(json.dumps({"ER": summary.er, "EL": summary.el, "SR": summary.sr,
                      "SPL": summary.spl, "n": summary.n_episodes,
                      "cell": summary.cell()}, sort_keys=True))
    return 0


def cmd_kernel_bench(args) -> int:
    from .bench.kernel_bench import run

    w, h = _parse_resolution(args.resolution)
    print(run(w, h))
    return 0


def cmd_scene(args) -> int:
    scene = _load_scene_arg(args.generate)
    save_scene(scene, args.out)
    print(f"wrote {args.out} ({scene.name}, {scene.nx}x{scene.ny})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zoosim")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("serve", help="run a command server")
    s.add_argument("--scene", default="generator:Flat:0:24x24",
                   help="scene file or generator:<kind>:<seed>:<nx>x<ny>")
    s.add_argument("--task", default=None, help="task config JSON")
    s.add_argument("--tcp", default="127.0.0.1:9000")
    s.add_argument("--ipc", default=None, help="local socket path")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--resolution", default="320x240")
    s.set_defaults(fn=cmd_serve)

    e = sub.add_parser("eval", help="run seeded evaluation episodes")
    e.add_argument("--task", required=True)
    e.add_argument("--policy", default="pid",
                   choices=["pid", "expert", "random", "hold", "vlm"])
    e.add_argument("--episodes", type=int, default=50)
    e.add_argument("--distractors", type=int, default=0)
    e.add_argument("--control-fps", default=None,
                   help="3|10|30|none (time dilation)")
    e.add_argument("--seed", type=int, default=1)
    e.add_argument("--out", default="eval_out")
    e.set_defaults(fn=cmd_eval)

    c = sub.add_parser("collect", help="collect expert demonstrations")
    c.add_argument("--task", required=True)
    c.add_argument("--steps", type=int, required=True)
    c.add_argument("--perturb", type=int, default=0, choices=[0, 1, 2, 3])
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True)
    c.set_defaults(fn=cmd_collect)

    l = sub.add_parser("launch", help="launch k server workers")
    l.add_argument("-k", type=int, required=True)
    l.add_argument("--base-port", type=int, default=9000)
    l.add_argument("--scene", default=None)
    l.add_argument("--task", default=None)
    l.add_argument("--registry", default="registry.json")
    l.set_defaults(fn=cmd_launch)

    m = sub.add_parser("metrics", help="summarize episode records")
    m.add_argument("--records", required=True)
    m.add_argument("--task", default="Tracking")
    m.add_argument("--label", default="run")
    m.add_argument("--out", default="metrics_out")
    m.set_defaults(fn=cmd_metrics)

    k = sub.add_parser("kernel-bench",
                       help="compare numba kernels vs numpy fallbacks")
    k.add_argument("--resolution", default="320x240")
    k.set_defaults(fn=cmd_kernel_bench)

    g = sub.add_parser("scene", help="generate and save a scene JSON")
    g.add_argument("--generate", required=True,
                   help="generator:<kind>:<seed>:<nx>x<ny>")
    g.add_argument("--out", required=True)
    g.set_defaults(fn=cmd_scene)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ZoosimError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
