"""VLM agent adapter over an OpenAI-style chat-completion HTTP endpoint.

The adapter sends the color frame (PNG data URL) plus, for navigation, the
goal's [Distance, Direction, Height] triple in centimeters/degrees, and
parses a bracketed decision. Tracking phrases map to velocities; the
navigation reply queues three discrete actions. Endpoint and key come from
ZOOSIM_VLM_URL / ZOOSIM_VLM_KEY unless given explicitly. A mock endpoint
ships below for tests and offline runs.
"""

from __future__ import annotations

import base64
import json
import logging
import os
import struct
import threading
import urllib.error
import urllib.request
import zlib
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from ..errors import ParseFailure
from ..errors import Timeout as TimeoutError_
from ..sim.actions import DiscreteNavAction

log = logging.getLogger("zoosim.vlm")

TRACKING_PHRASES = {
    "move closer": (0.0, 1.0),
    "move further": (0.0, -1.0),
    "keep current": (0.0, 0.0),
    "turn left": (-30.0, 0.0),
    "turn right": (30.0, 0.0),
}

NAV_PHRASES = {
    "move forward": DiscreteNavAction.FORWARD,
    "move backward": DiscreteNavAction.BACKWARD,
    "turn left": DiscreteNavAction.TURN_LEFT,
    "turn right": DiscreteNavAction.TURN_RIGHT,
    "jump": DiscreteNavAction.JUMP,
    "crouch": DiscreteNavAction.CROUCH,
    "keep current": DiscreteNavAction.HOLD,
}

TRACKING_SYSTEM_PROMPT = """\
You steer a mobile robot that must keep the person in view centered and
nearby. Pick exactly one instruction per image:
- move closer: the target looks small / far away and the way is clear
- move further: the target fills the frame / is too close
- keep current: the target is well framed near the image center
- turn left: the target sits in the left part of the image
- turn right: the target sits in the right part of the image
Treat the target as off-center when it deviates from the image center by
more than a quarter of the image width.
Reply with ONLY the decision in brackets, e.g. [keep current]."""

NAV_SYSTEM_PROMPT = """\
You drive a robot toward a goal object. Input: a first-person color image
and the goal's relative position [Distance, Direction, Height] (distance
in centimeters, direction in degrees where positive means the goal is to
the robot's right, height in centimeters).
Available actions: Move Forward (1 m/s), Move Backward, Turn Left (15
deg/s), Turn Right (15 deg/s), Jump (use to clear low obstacles or mount
ledges), Crouch (duck under low ceilings for 2 seconds), Keep Current.
Reply with ONLY three comma-separated actions in brackets, in execution
order, e.g. [Move Forward, Move Forward, Turn Left]."""


def png_encode(rgb: np.ndarray) -> bytes:
    """Minimal RGB8 PNG writer (stdlib only)."""
    h, w, _ = rgb.shape
    raw = b"".join(b"\x00" + rgb[y].tobytes() for y in range(h))

    def chunk(tag: bytes, data: bytes) -> bytes:
        body = tag + data
        return struct.pack(">I", len(data)) + body + \
            struct.pack(">I", zlib.crc32(body) & 0xFFFFFFFF)

    ihdr = struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0)
    return (b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", ihdr)
            + chunk(b"IDAT", zlib.compress(raw, 6)) + chunk(b"IEND", b""))


def _extract_bracketed(text: str) -> str | None:
    start = text.rfind("[")
    end = text.find("]", start + 1)
    if start < 0 or end < 0:
        return None
    return text[start + 1:end].strip()


def parse_tracking_reply(text: str):
    inner = _extract_bracketed(text)
    if inner is None:
        raise ParseFailure(f"no bracketed decision in {text!r}")
    key = inner.lower().strip()
    if key not in TRACKING_PHRASES:
        raise ParseFailure(f"unknown tracking phrase {inner!r}")
    return TRACKING_PHRASES[key]


def parse_nav_reply(text: str):
    inner = _extract_bracketed(text)
    if inner is None:
        raise ParseFailure(f"no bracketed action sequence in {text!r}")
    parts = [p.strip().lower() for p in inner.split(",")]
    if len(parts) != 3:
        raise ParseFailure(f"need 3 actions, got {len(parts)} in {text!r}")
    try:
        return [NAV_PHRASES[p] for p in parts]
    except KeyError as e:
        raise ParseFailure(f"unknown navigation action {e.args[0]!r}") from None


class VLMClient:
    def __init__(self, url: str | None = None, key: str | None = None,
                 model: str = "gpt-4o", timeout: float = 30.0):
        self.url = url or os.environ.get("ZOOSIM_VLM_URL", "")
        self.key = key or os.environ.get("ZOOSIM_VLM_KEY", "")
        self.model = model
        self.timeout = timeout
        if not self.url:
            raise ParseFailure("no VLM endpoint configured "
                               "(set ZOOSIM_VLM_URL or pass url=)")

    def complete(self, system_prompt: str, user_content: list) -> str:
        body = json.dumps({
            "model": self.model,
            "messages": [
                {"role": "system", "content": system_prompt},
                {"role": "user", "content": user_content},
            ],
            "max_tokens": 64,
        }).encode("utf-8")
        req = urllib.request.Request(
            self.url, data=body,
            headers={"Content-Type": "application/json",
                     "Authorization": f"Bearer {self.key}"})
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                doc = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, OSError) as e:
            raise TimeoutError_(f"VLM endpoint failed: {e}") from e
        return doc["choices"][0]["message"]["content"]


class VLMTrackerPolicy:
    def __init__(self, client: VLMClient | None = None):
        self.client = client or VLMClient()

    def reset(self, env, obs):
        pass

    def act(self, obs):
        content = [{"type": "text", "text": "Decide for this frame."}]
        if "color" in obs:
            data = base64.b64encode(png_encode(obs["color"])).decode()
            content.append({"type": "image_url", "image_url":
                            {"url": f"data:image/png;base64,{data}"}})
        for attempt in range(2):
            try:
                reply = self.client.complete(TRACKING_SYSTEM_PROMPT, content)
                return parse_tracking_reply(reply)
            except ParseFailure as e:
                if attempt == 1:
                    log.warning("VLM reply unusable after retry: %s", e)
                    return (0.0, 0.0)
        return (0.0, 0.0)


class VLMNavigatorPolicy:
    def __init__(self, client: VLMClient | None = None):
        self.client = client or VLMClient()
        self.queue: list[str] = []

    def reset(self, env, obs):
        self.queue = []

    def act(self, obs):
        if self.queue:
            return self.queue.pop(0)
        rel = obs["relative_state"]
        triple = (f"[{rel[0] * 100.0:.0f}, {rel[1]:.1f}, "
                  f"{rel[2] * 100.0:.0f}]")
        content = [{"type": "text",
                    "text": f"Relative position [Distance, Direction, "
                            f"Height]: {triple}"}]
        if "color" in obs:
            data = base64.b64encode(png_encode(obs["color"])).decode()
            content.append({"type": "image_url", "image_url":
                            {"url": f"data:image/png;base64,{data}"}})
        for attempt in range(2):
            try:
                reply = self.client.complete(NAV_SYSTEM_PROMPT, content)
                actions = parse_nav_reply(reply)
                self.queue = actions[1:]
                return actions[0]
            except ParseFailure as e:
                if attempt == 1:
                    log.warning("VLM reply unusable after retry: %s", e)
                    return DiscreteNavAction.HOLD
        return DiscreteNavAction.HOLD


class MockVLMServer:
    """Scripted chat-completion endpoint for tests and offline smoke runs."""

    def __init__(self, replies, host: str = "127.0.0.1", port: int = 0):
        self.replies = list(replies)
        self.requests_seen = []
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                n = int(self.headers.get("Content-Length", 0))
                outer.requests_seen.append(json.loads(self.rfile.read(n)))
                reply = outer.replies[min(len(outer.requests_seen) - 1,
                                          len(outer.replies) - 1)]
                body = json.dumps({"choices": [{"message":
                                                {"content": reply}}]}).encode()
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def log_message(self, *args):
                pass

        self._httpd = ThreadingHTTPServer((host, port), Handler)
        self.url = f"http://{host}:{self._httpd.server_port}/v1/chat/completions"
        self._thread = threading.Thread(target=self._httpd.serve_forever,
                                        daemon=True)

    def start(self) -> "MockVLMServer":
        self._thread.start()
        return self

    def shutdown(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.shutdown()
