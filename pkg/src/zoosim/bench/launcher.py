"""Multi-instance server launcher with registry and fault restart.

Spawns `zoosim serve` worker processes on distinct endpoints, writes a JSON
registry (endpoint, pid, seed, restarts), restarts crashed workers at most
twice, and shifts to the next free port when a bind is taken.
"""

from __future__ import annotations

import json
import os
import socket
import subprocess
import sys
import threading
import time

from ..errors import EndpointUnavailable
from ..protocol.client import Connection
from ..protocol.framing import Endpoint

MAX_RESTARTS = 2


def _port_free(host: str, port: int) -> bool:
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as s:
        s.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            s.bind((host, port))
            return True
        except OSError:
            return False


def wait_ready(endpoint: Endpoint, timeout: float = 30.0) -> None:
    deadline = time.time() + timeout
    last = None
    while time.time() < deadline:
        try:
            with Connection(endpoint, timeout=2.0) as c:
                c.ask("vget /env/name")
            return
        except Exception as e:  # noqa: BLE001 - retry until deadline
            last = e
            time.sleep(0.05)
    raise EndpointUnavailable(f"worker at {endpoint} not ready: {last}")


class Launcher:
    def __init__(self, k: int, base_port: int, scene: str | None = None,
                 task: str | None = None, seeds=None,
                 host: str = "127.0.0.1", registry_path: str = "registry.json",
                 resolution: str = "320x240"):
        self.k = k
        self.base_port = base_port
        self.scene = scene
        self.task = task
        self.seeds = list(seeds) if seeds else list(range(k))
        self.host = host
        self.registry_path = registry_path
        self.resolution = resolution
        self.workers: list[dict] = []
        self._procs: dict[int, subprocess.Popen] = {}
        self._running = False
        self._monitor = None

    # -- lifecycle ---------------------------------------------------------

    def _cmd(self, port: int, seed: int) -> list[str]:
        cmd = [sys.executable, "-m", "zoosim", "serve",
               "--tcp", f"{self.host}:{port}",
               "--seed", str(seed), "--resolution", self.resolution]
        if self.task:
            cmd += ["--task", self.task]
        else:
            cmd += ["--scene", self.scene or "generator:Flat:0:16x16"]
        return cmd

    def _spawn_worker(self, i: int, port: int) -> dict:
        while not _port_free(self.host, port):
            port += 1
        proc = subprocess.Popen(
            self._cmd(port, self.seeds[i]),
            stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
            env={**os.environ, "ZOOSIM_BACKEND":
                 os.environ.get("ZOOSIM_BACKEND", "auto")})
        endpoint = Endpoint.tcp(self.host, port)
        wait_ready(endpoint)
        self._procs[i] = proc
        return {"worker": i, "endpoint": str(endpoint), "pid": proc.pid,
                "seed": self.seeds[i], "restarts": 0}

    def start(self) -> "Launcher":
        port = self.base_port
        for i in range(self.k):
            entry = self._spawn_worker(i, port)
            self.workers.append(entry)
            port = Endpoint.parse(entry["endpoint"]).port + 1
        self._write_registry()
        self._running = True
        self._monitor = threading.Thread(target=self._watch, daemon=True)
        self._monitor.start()
        return self

    def shutdown(self) -> None:
        self._running = False
        for proc in self._procs.values():
            if proc.poll() is None:
                proc.terminate()
        for proc in self._procs.values():
            try:
                proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                proc.kill()
        self._write_registry()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.shutdown()

    # -- registry / monitor ---------------------------------------------------

    def _write_registry(self) -> None:
        with open(self.registry_path, "w", encoding="utf-8") as f:
            json.dump({"workers": self.workers}, f, indent=2, sort_keys=True)

    def _watch(self) -> None:
        while self._running:
            for i, entry in enumerate(self.workers):
                proc = self._procs.get(i)
                if proc is None or proc.poll() is None or not self._running:
                    continue
                if entry["restarts"] >= MAX_RESTARTS:
                    continue
                port = Endpoint.parse(entry["endpoint"]).port
                fresh = self._spawn_worker(i, port)
                fresh["restarts"] = entry["restarts"] + 1
                self.workers[i] = fresh
                self._write_registry()
            time.sleep(0.2)


def launch(k: int, base_port: int = 9000, scene: str | None = None,
           task: str | None = None, seeds=None,
           registry_path: str = "registry.json") -> Launcher:
    return Launcher(k, base_port, scene=scene, task=task, seeds=seeds,
                    registry_path=registry_path).start()
