from .framing import (Endpoint, decode_request, decode_response,
                      encode_request, encode_response)
from .commands import Dispatcher
from .server import Server, serve
from .client import BenchResult, Connection, fps_benchmark

__all__ = [
    "Endpoint", "decode_request", "decode_response", "encode_request",
    "encode_response", "Dispatcher", "Server", "serve", "BenchResult",
    "Connection", "fps_benchmark",
]
