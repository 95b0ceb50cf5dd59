"""Blocking client: one outstanding request per connection.

Request ids increase monotonically; a response echoing a different id is a
ProtocolViolation. `round_trips` counts transport exchanges so tests can
assert the one-round-trip-per-step property.
"""

from __future__ import annotations

import socket
import time
from dataclasses import dataclass

from ..errors import ConnectError, ProtocolViolation
from ..errors import Timeout as TimeoutError_
from .framing import (Endpoint, decode_response, encode_request,
                      read_response_frame)


class Connection:
    def __init__(self, endpoint: Endpoint | str, timeout: float = 30.0):
        if isinstance(endpoint, str):
            endpoint = Endpoint.parse(endpoint)
        self.endpoint = endpoint
        self.timeout = timeout
        self.round_trips = 0
        self._next_id = 1
        try:
            if endpoint.kind == "ipc":
                self._sock = socket.socket(socket.AF_UNIX, socket.SOCK_STREAM)
                self._sock.settimeout(timeout)
                self._sock.connect(endpoint.path)
            else:
                self._sock = socket.create_connection(
                    (endpoint.host, endpoint.port), timeout=timeout)
                self._sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
        except OSError as e:
            raise ConnectError(f"cannot connect to {endpoint}: {e}") from e

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def request_raw(self, payload: bytes) -> bytes:
        """Send pre-encoded request bytes, return raw response bytes."""
        try:
            self._sock.sendall(payload)
            raw = read_response_frame(self._sock)
        except socket.timeout as e:
            raise TimeoutError_(f"no response within {self.timeout}s") from e
        self.round_trips += 1
        return raw

    def request(self, commands, batch: bool | None = None):
        """Send commands, return (status, items). items: str or Frame."""
        if isinstance(commands, str):
            commands = [commands]
        request_id = self._next_id
        self._next_id += 1
        raw = self.request_raw(encode_request(request_id, commands, batch))
        echoed, status, items = decode_response(raw)
        if echoed != request_id:
            raise ProtocolViolation(
                f"response id {echoed} does not match request id {request_id}")
        return status, items

    def ask(self, command: str):
        """Single command, single payload."""
        _, items = self.request([command])
        return items[0]


@dataclass(frozen=True)
class BenchResult:
    fps: float
    elapsed: float
    n: int
    p50_ms: float
    p95_ms: float
    p99_ms: float

    def __str__(self) -> str:
        return (f"{self.fps:.1f} req/s over {self.n} requests "
                f"(p50 {self.p50_ms:.2f} ms, p95 {self.p95_ms:.2f} ms, "
                f"p99 {self.p99_ms:.2f} ms)")


def _percentile(sorted_vals, q: float) -> float:
    if not sorted_vals:
        return 0.0
    k = max(0, min(len(sorted_vals) - 1, round(q * (len(sorted_vals) - 1))))
    return sorted_vals[int(k)]


def fps_benchmark(conn: Connection, commands, n: int = 1000,
                  batch: bool | None = None) -> BenchResult:
    """Issue the same request n times; fps = n / elapsed wall seconds."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(commands, str):
        commands = [commands]
    latencies = []
    t0 = time.perf_counter()
    for _ in range(n):
        s0 = time.perf_counter()
        conn.request(commands, batch)
        latencies.append(time.perf_counter() - s0)
    elapsed = time.perf_counter() - t0
    latencies.sort()
    return BenchResult(
        fps=n / elapsed,
        elapsed=elapsed,
        n=n,
        p50_ms=_percentile(latencies, 0.50) * 1e3,
        p95_ms=_percentile(latencies, 0.95) * 1e3,
        p99_ms=_percentile(latencies, 0.99) * 1e3,
    )
