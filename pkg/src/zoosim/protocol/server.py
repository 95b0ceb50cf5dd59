"""Threaded command server over TCP or local IPC (unix domain) sockets.

Each connection is handled by its own thread; every request's commands run
as one atomic unit under the world lock, so observations within a batch
are mutually consistent and concurrent clients serialize cleanly.
"""

from __future__ import annotations

import os
import socket
import threading

from ..errors import EndpointUnavailable, Truncated, ZoosimError
from .commands import Dispatcher
from .framing import (STATUS_ERROR, Endpoint, decode_request, encode_response,
                      read_request_frame)


class Server:
    def __init__(self, dispatcher: Dispatcher, endpoint: Endpoint):
        self.dispatcher = dispatcher
        self.endpoint = endpoint
        self._sock = None
        self._threads: list[threading.Thread] = []
        self._running = False

    # -- lifecycle -------------------------------------------------------------

    def start(self) -> "Server":
        try:
            if self.endpoint.kind == "ipc":
                if os.path.exists(self.endpoint.path):
                    os.unlink(self.endpoint.path)
                sock = socket.socket(socket.AF_UNIX, socket.SOCK_STREAM)
                sock.bind(self.endpoint.path)
            else:
                sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
                sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
                sock.bind((self.endpoint.host, self.endpoint.port))
                if self.endpoint.port == 0:
                    self.endpoint = Endpoint.tcp(self.endpoint.host,
                                                 sock.getsockname()[1])
        except OSError as e:
            raise EndpointUnavailable(f"cannot bind {self.endpoint}: {e}") from e
        sock.listen(16)
        sock.settimeout(0.2)
        self._sock = sock
        self._running = True
        t = threading.Thread(target=self._accept_loop, daemon=True)
        t.start()
        self._threads.append(t)
        return self

    def shutdown(self) -> None:
        self._running = False
        if self._sock is not None:
            try:
                self._sock.close()
            except OSError:
                pass
        if self.endpoint.kind == "ipc" and os.path.exists(self.endpoint.path):
            try:
                os.unlink(self.endpoint.path)
            except OSError:
                pass

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.shutdown()

    # -- loops -------------------------------------------------------------------

    def _accept_loop(self) -> None:
        while self._running:
            try:
                conn, _ = self._sock.accept()
            except socket.timeout:
                continue
            except OSError:
                break
            conn.settimeout(None)
            if self.endpoint.kind == "tcp":
                conn.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
            t = threading.Thread(target=self._serve_conn, args=(conn,),
                                 daemon=True)
            t.start()
            self._threads.append(t)

    def _serve_conn(self, conn) -> None:
        try:
            while self._running:
                try:
                    raw = read_request_frame(conn)
                except Truncated:
                    break  # client closed
                try:
                    request_id, _, commands = decode_request(raw)
                except ZoosimError as e:
                    conn.sendall(encode_response(
                        0, STATUS_ERROR, [f"error: {type(e).__name__}: {e}"]))
                    continue
                with self.dispatcher.world.lock:
                    status, items = self.dispatcher.execute_batch(commands)
                conn.sendall(encode_response(request_id, status, items))
        except (ZoosimError, OSError):
            pass
        finally:
            try:
                conn.close()
            except OSError:
                pass


def serve(world, endpoint: Endpoint, env=None,
          resolution=(320, 240)) -> Server:
    """Bind and start serving; returns the running server."""
    dispatcher = Dispatcher(world, env=env, resolution=resolution)
    return Server(dispatcher, endpoint).start()
