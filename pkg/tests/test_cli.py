import json
import os
import signal
import subprocess
import sys
import time

from conftest import tracking_config_doc
from zoosim.protocol import Connection, Endpoint


def run_cli(*args, timeout=120):
    return subprocess.run([sys.executable, "-m", "zoosim", *args],
                          capture_output=True, text=True, timeout=timeout)


def test_scene_generate_cli(tmp_path):
    out = tmp_path / "scene.json"
    r = run_cli("scene", "--generate", "generator:Urban:7:16x16",
                "--out", str(out))
    assert r.returncode == 0
    doc = json.loads(out.read_text())
    assert doc["format"] == "zoosim-scene"
    assert doc["nx"] == 16


def test_serve_cli_scene_mode(tmp_path):
    proc = subprocess.Popen(
        [sys.executable, "-m", "zoosim", "serve",
         "--scene", "generator:Flat:0:10x10", "--tcp", "127.0.0.1:0"],
        stdout=subprocess.PIPE, text=True)
    try:
        line = proc.stdout.readline()
        assert "serving on" in line
        endpoint = Endpoint.parse(line.strip().split()[-1])
        with Connection(endpoint) as c:
            assert c.ask("vget /env/name") == "flat-0-10x10"
    finally:
        proc.send_signal(signal.SIGTERM)
        proc.wait(timeout=10)


def test_serve_cli_task_mode_remote_env(tmp_path):
    cfg = tmp_path / "task.json"
    cfg.write_text(json.dumps(tracking_config_doc(
        modalities=("mask",), width=32, height=24, max_steps=20)))
    proc = subprocess.Popen(
        [sys.executable, "-m", "zoosim", "serve", "--task", str(cfg),
         "--tcp", "127.0.0.1:0", "--resolution", "32x24"],
        stdout=subprocess.PIPE, text=True)
    try:
        endpoint = Endpoint.parse(proc.stdout.readline().strip().split()[-1])
        with Connection(endpoint) as c:
            meta = json.loads(c.ask("vget /env/task"))
            assert meta["task"] == "Tracking"
            c.ask("vset /env/reset 4")
            reply = json.loads(c.ask("vset /env/action 0 0"))
            assert reply["reward"] == 1.0
            _, items = c.request([f"vget /camera/1/mask 32x24"])
            assert items[0].width == 32
    finally:
        proc.send_signal(signal.SIGTERM)
        proc.wait(timeout=10)


def test_eval_cli_writes_reports(tmp_path):
    cfg = tmp_path / "task.json"
    cfg.write_text(json.dumps(tracking_config_doc(
        policy="static", modalities=(), max_steps=15)))
    out = tmp_path / "result"
    r = run_cli("eval", "--task", str(cfg), "--policy", "hold",
                "--episodes", "3", "--out", str(out), timeout=180)
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "result.csv").exists()
    assert (tmp_path / "result.txt").exists()
    records = (tmp_path / "result.records.jsonl").read_text().strip()
    assert len(records.splitlines()) == 3
    assert "/15/" in r.stdout  # EL cell of the printed summary


def test_metrics_cli_round_trip(tmp_path):
    from zoosim.bench import EpisodeRecord, save_records

    recs = [EpisodeRecord(ret=100 + i, length=400, success=i % 2 == 0,
                          path_length=12.0, shortest_length=10.0, seed=i,
                          wall_time=0.1) for i in range(4)]
    path = tmp_path / "records.jsonl"
    save_records(recs, path)
    r = run_cli("metrics", "--records", str(path), "--task", "Tracking",
                "--out", str(tmp_path / "m"))
    assert r.returncode == 0
    doc = json.loads(r.stdout.strip().splitlines()[-1])
    assert doc["n"] == 4
    assert doc["SR"] == 0.5


def test_kernel_bench_cli_compares_backends():
    r = run_cli("kernel-bench", "--resolution", "64x48", timeout=300)
    assert r.returncode == 0, r.stderr
    assert "[numba]" in r.stdout and "[numpy]" in r.stdout
    assert "faster" in r.stdout


def test_collect_cli(tmp_path):
    cfg = tmp_path / "task.json"
    cfg.write_text(json.dumps(tracking_config_doc(
        policy="random", modalities=(), max_steps=30)))
    out = tmp_path / "demo"
    r = run_cli("collect", "--task", str(cfg), "--steps", "40",
                "--perturb", "1", "--out", str(out), timeout=180)
    assert r.returncode == 0, r.stderr
    lines = (out / "index.jsonl").read_text().strip().splitlines()
    assert len(lines) == 40
