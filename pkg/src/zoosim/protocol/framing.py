"""Bit-exact binary framing for the command protocol.

Request frame:
  magic "UZP1" | request_id u32le | flags u8 (bit0 = batch) | count u32le |
  count x (length u32le | command bytes, UTF-8)

Response frame:
  magic "UZR1" | request_id u32le | status u8 (0 ok, 1 partial, 2 error) |
  count u32le | count x item
  item: payload_kind u8 (0 text, 1 frame) | length u32le | payload
  frame payload: modality u8 | width u32le | height u32le | pixel bytes
  (length covers the 9-byte header plus the pixels)

Any declared length above the 16 MiB cap is rejected before allocation.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from ..constants import PAYLOAD_CAP, REQUEST_MAGIC, RESPONSE_MAGIC
from ..errors import BadMagic, Oversize, Truncated
from ..sensors.camera import MODALITY_CODES, MODALITY_NAMES
from ..sensors.render import Frame

STATUS_OK = 0
STATUS_PARTIAL = 1
STATUS_ERROR = 2

KIND_TEXT = 0
KIND_FRAME = 1

FLAG_BATCH = 0x01

_U32 = struct.Struct("<I")
_FRAME_HDR = struct.Struct("<BII")


def encode_request(request_id: int, commands: list[str],
                   batch: bool | None = None) -> bytes:
    if not commands:
        raise ValueError("at least one command required")
    if batch is None:
        batch = len(commands) > 1
    flags = FLAG_BATCH if batch else 0
    parts = [REQUEST_MAGIC, _U32.pack(request_id & 0xFFFFFFFF),
             bytes([flags]), _U32.pack(len(commands))]
    for cmd in commands:
        raw = cmd.encode("utf-8")
        if len(raw) > PAYLOAD_CAP:
            raise Oversize(f"command of {len(raw)} bytes exceeds cap")
        parts.append(_U32.pack(len(raw)))
        parts.append(raw)
    return b"".join(parts)


def decode_request(data: bytes) -> tuple[int, int, list[str]]:
    """Returns (request_id, flags, commands); raises on malformed frames."""
    if len(data) < 13:
        raise Truncated("request frame shorter than its fixed header")
    if data[:4] != REQUEST_MAGIC:
        raise BadMagic(f"bad request magic {data[:4]!r}")
    request_id = _U32.unpack_from(data, 4)[0]
    flags = data[8]
    count = _U32.unpack_from(data, 9)[0]
    if count < 1:
        raise Truncated("request frame declares zero commands")
    off = 13
    commands = []
    for _ in range(count):
        if off + 4 > len(data):
            raise Truncated("request frame ends inside an item header")
        n = _U32.unpack_from(data, off)[0]
        if n > PAYLOAD_CAP:
            raise Oversize(f"declared item length {n} exceeds cap")
        off += 4
        if off + n > len(data):
            raise Truncated("request frame ends inside an item")
        commands.append(data[off:off + n].decode("utf-8"))
        off += n
    if off != len(data):
        raise Truncated("trailing bytes after the declared items")
    return request_id, flags, commands


def encode_response(request_id: int, status: int, items: list) -> bytes:
    """items: str (text payload) or Frame."""
    parts = [RESPONSE_MAGIC, _U32.pack(request_id & 0xFFFFFFFF),
             bytes([status]), _U32.pack(len(items))]
    for item in items:
        if isinstance(item, Frame):
            pixels = item.payload
            payload = _FRAME_HDR.pack(MODALITY_CODES[item.modality],
                                      item.width, item.height) + pixels
            kind = KIND_FRAME
        else:
            payload = str(item).encode("utf-8")
            kind = KIND_TEXT
        if len(payload) > PAYLOAD_CAP:
            raise Oversize(f"payload of {len(payload)} bytes exceeds cap")
        parts.append(bytes([kind]))
        parts.append(_U32.pack(len(payload)))
        parts.append(payload)
    return b"".join(parts)


def decode_response(data: bytes) -> tuple[int, int, list]:
    """Returns (request_id, status, items); items are str or Frame."""
    if len(data) < 13:
        raise Truncated("response frame shorter than its fixed header")
    if data[:4] != RESPONSE_MAGIC:
        raise BadMagic(f"bad response magic {data[:4]!r}")
    request_id = _U32.unpack_from(data, 4)[0]
    status = data[8]
    count = _U32.unpack_from(data, 9)[0]
    off = 13
    items = []
    for _ in range(count):
        if off + 5 > len(data):
            raise Truncated("response frame ends inside an item header")
        kind = data[off]
        n = _U32.unpack_from(data, off + 1)[0]
        if n > PAYLOAD_CAP:
            raise Oversize(f"declared item length {n} exceeds cap")
        off += 5
        if off + n > len(data):
            raise Truncated("response frame ends inside an item")
        payload = data[off:off + n]
        off += n
        if kind == KIND_FRAME:
            if n < 9:
                raise Truncated("frame payload shorter than its header")
            mcode, w, h = _FRAME_HDR.unpack_from(payload, 0)
            items.append(Frame(MODALITY_NAMES[mcode], w, h, payload[9:]))
        else:
            items.append(payload.decode("utf-8"))
    if off != len(data):
        raise Truncated("trailing bytes after the declared items")
    return request_id, status, items


@dataclass(frozen=True)
class Endpoint:
    """tcp host:port or a local (unix domain) socket path."""
    kind: str  # "tcp" | "ipc"
    host: str = ""
    port: int = 0
    path: str = ""

    @classmethod
    def tcp(cls, host: str, port: int) -> "Endpoint":
        return cls("tcp", host=host, port=port)

    @classmethod
    def ipc(cls, path: str) -> "Endpoint":
        return cls("ipc", path=path)

    @classmethod
    def parse(cls, text: str) -> "Endpoint":
        if text.startswith("ipc:"):
            return cls.ipc(text[4:])
        if text.startswith("tcp:"):
            text = text[4:]
        host, _, port = text.rpartition(":")
        return cls.tcp(host or "127.0.0.1", int(port))

    def __str__(self) -> str:
        if self.kind == "ipc":
            return f"ipc:{self.path}"
        return f"tcp:{self.host}:{self.port}"


def read_exact(sock, n: int) -> bytes:
    buf = bytearray()
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            raise Truncated("connection closed mid-frame")
        buf.extend(chunk)
    return bytes(buf)


def read_request_frame(sock) -> bytes:
    """Read one full request frame off a stream socket."""
    head = read_exact(sock, 13)
    if head[:4] != REQUEST_MAGIC:
        raise BadMagic(f"bad request magic {head[:4]!r}")
    count = _U32.unpack_from(head, 9)[0]
    if count < 1:
        raise Truncated("request frame declares zero commands")
    body = bytearray(head)
    for _ in range(count):
        ln = read_exact(sock, 4)
        n = _U32.unpack(ln)[0]
        if n > PAYLOAD_CAP:
            raise Oversize(f"declared item length {n} exceeds cap")
        body.extend(ln)
        body.extend(read_exact(sock, n))
    return bytes(body)


def read_response_frame(sock) -> bytes:
    head = read_exact(sock, 13)
    if head[:4] != RESPONSE_MAGIC:
        raise BadMagic(f"bad response magic {head[:4]!r}")
    count = _U32.unpack_from(head, 9)[0]
    body = bytearray(head)
    for _ in range(count):
        hdr = read_exact(sock, 5)
        n = _U32.unpack_from(hdr, 1)[0]
        if n > PAYLOAD_CAP:
            raise Oversize(f"declared item length {n} exceeds cap")
        body.extend(hdr)
        body.extend(read_exact(sock, n))
    return bytes(body)
