import threading
import time

import numpy as np
import pytest

from zoosim.errors import (BadMagic, Oversize, ProtocolViolation,
                           Truncated)
from zoosim.protocol import (Connection, Endpoint, decode_request,
                             decode_response, encode_request,
                             encode_response, fps_benchmark, serve)
from zoosim.protocol.framing import STATUS_OK, STATUS_PARTIAL
from zoosim.sensors.render import Frame
from zoosim.sim import World
from zoosim.world import generate_scene


@pytest.fixture
def server():
    w = World(generate_scene("Flat", 0, 12, 12), seed=0)
    srv = serve(w, Endpoint.tcp("127.0.0.1", 0))
    yield srv
    srv.shutdown()


# ------------------------------------------------------------- framing ----

def test_single_command_frame_layout():
    cmd = "vget /camera/0/depth"
    assert len(cmd.encode()) == 20
    raw = encode_request(1, [cmd])
    assert len(raw) == 4 + 4 + 1 + 4 + 4 + 20 == 37
    assert raw[:4] == b"UZP1"
    assert raw[4:8] == (1).to_bytes(4, "little")
    assert raw[8] == 0                      # single command: batch bit clear
    assert raw[9:13] == (1).to_bytes(4, "little")
    assert decode_request(raw) == (1, 0, [cmd])


def test_batch_flag_set_for_multiple_commands():
    raw = encode_request(7, ["vget /env/name", "vget /env/tick"])
    assert raw[8] & 0x01
    rid, flags, cmds = decode_request(raw)
    assert rid == 7 and flags == 1 and len(cmds) == 2


def test_bad_magic_rejected():
    raw = bytearray(encode_request(1, ["vget /env/name"]))
    raw[:4] = b"XXXX"
    with pytest.raises(BadMagic):
        decode_request(bytes(raw))


def test_truncated_rejected():
    raw = encode_request(1, ["vget /env/name"])
    with pytest.raises(Truncated):
        decode_request(raw[:-3])


def test_oversize_rejected():
    raw = bytearray(encode_request(1, ["vget /env/name"]))
    raw[13:17] = (17 * 1024 * 1024).to_bytes(4, "little")
    with pytest.raises(Oversize):
        decode_request(bytes(raw))


def test_codec_round_trip_fuzz_10k(rng):
    for _ in range(10_000):
        n = int(rng.integers(1, 6))
        cmds = []
        for _ in range(n):
            length = int(rng.integers(0, 60))
            chars = rng.integers(32, 127, size=length)
            cmds.append("v" + "".join(chr(c) for c in chars))
        rid = int(rng.integers(0, 2**32))
        rid2, _, cmds2 = decode_request(encode_request(rid, cmds))
        assert (rid2, cmds2) == (rid, cmds)


def test_response_round_trip_with_frames(rng):
    frame = Frame("depth", 8, 8, np.arange(64, dtype="<f4").tobytes())
    items = ["ok", frame, "text two"]
    rid, status, out = decode_response(encode_response(9, 1, items))
    assert rid == 9 and status == 1
    assert out[0] == "ok" and out[2] == "text two"
    assert isinstance(out[1], Frame)
    assert out[1].modality == "depth" and out[1].payload == frame.payload


# ------------------------------------------------------------- serving ----

def test_echo_env_name(server):
    with Connection(server.endpoint) as c:
        assert c.ask("vget /env/name") == "flat-0-12x12"


def test_depth_payload_size_over_wire(server):
    with Connection(server.endpoint) as c:
        c.request(["vset /env/spawn Human h1 5.5 5.5 0"])
        _, items = c.request(["vget /camera/1/depth 320x240"])
        assert isinstance(items[0], Frame)
        assert len(items[0].payload) == 320 * 240 * 4


def test_unknown_command_partial_status(server):
    with Connection(server.endpoint) as c:
        status, items = c.request(
            ["vget /env/name", "vget /nonsense", "vget /env/tick"])
        assert status == STATUS_PARTIAL
        assert items[0] == "flat-0-12x12"
        assert items[1].startswith("error:")
        assert items[2] == "0"


def test_response_order_matches_request_order(server):
    with Connection(server.endpoint) as c:
        cmds = ["vset /env/spawn Human h1 2.5 2.5 0",
                "vset /agent/h1/pose 3.5 4.5 90",
                "vget /agent/h1/pose",
                "vget /env/tick"]
        status, items = c.request(cmds)
        assert status == STATUS_OK
        assert items[0] == "ok" and items[1] == "ok"
        assert items[2].split()[0] == "3.5"
        assert items[3] == "0"


def test_batch_is_one_round_trip(server):
    with Connection(server.endpoint) as c:
        before = c.round_trips
        c.request(["vget /env/name"] * 20)
        assert c.round_trips == before + 1


def test_atomic_batch_consistent_tick(server):
    """A interleaving writer never splits one batch's observations."""
    with Connection(server.endpoint) as c:
        c.request(["vset /env/spawn Human h1 5.5 5.5 0"])
        stop = threading.Event()

        def hammer():
            with Connection(server.endpoint) as c2:
                while not stop.is_set():
                    c2.request(["vset /env/tick 1"])

        t = threading.Thread(target=hammer)
        t.start()
        try:
            for _ in range(50):
                _, items = c.request(["vget /env/tick", "vget /env/tick"])
                assert items[0] == items[1]
        finally:
            stop.set()
            t.join()


def test_concurrent_conflicting_vsets_linearize(server):
    results = []

    def writer(val):
        with Connection(server.endpoint) as c:
            c.request([f"vset /agent/h1/pose {val} {val} 0"])

    with Connection(server.endpoint) as c:
        c.request(["vset /env/spawn Human h1 5.5 5.5 0"])
        for trial in range(20):
            t1 = threading.Thread(target=writer, args=(2.5,))
            t2 = threading.Thread(target=writer, args=(8.5,))
            t1.start(), t2.start()
            t1.join(), t2.join()
            pose = c.ask("vget /agent/h1/pose").split()
            results.append(pose[0])
        assert set(results) <= {"2.5", "8.5"}


def test_request_id_mismatch_detected(server):
    with Connection(server.endpoint) as c:
        raw = c.request_raw(encode_request(1, ["vget /env/name"]))
        rid, _, _ = decode_response(raw)
        assert rid == 1
        # real client enforces the echo
        assert c.request(["vget /env/name"])[1][0] == "flat-0-12x12"
    bad = encode_response(99, 0, ["x"])
    with pytest.raises(ProtocolViolation):
        conn = Connection.__new__(Connection)
        conn._next_id = 1
        conn.timeout = 1
        conn.round_trips = 0
        conn.request_raw = lambda payload: bad
        conn.request(["vget /env/name"])


def test_ipc_transport_equivalence(tmp_path):
    corpus_cmds = [
        ["vget /env/name"],
        ["vset /env/spawn Human h1 5.5 5.5 0", "vget /agent/h1/pose"],
        ["vset /agent/h1/move 10 0.5", "vset /env/tick 3",
         "vget /agent/h1/pose", "vget /env/tick"],
        ["vget /camera/1/mask 32x24"],
        ["vget /nonsense", "vget /env/info"],
    ]

    def run(endpoint_factory):
        w = World(generate_scene("Flat", 0, 12, 12), seed=0)
        srv = serve(w, endpoint_factory())
        out = []
        try:
            with Connection(srv.endpoint) as c:
                rid = 1
                for cmds in corpus_cmds:
                    out.append(c.request_raw(encode_request(rid, cmds)))
                    rid += 1
        finally:
            srv.shutdown()
        return out

    tcp = run(lambda: Endpoint.tcp("127.0.0.1", 0))
    ipc = run(lambda: Endpoint.ipc(str(tmp_path / "zoosim.sock")))
    assert tcp == ipc


def test_fps_benchmark_arithmetic():
    class FakeConn:
        round_trips = 0

        def request(self, commands, batch=None):
            time.sleep(0.001)
            return 0, ["ok"]

    r = fps_benchmark(FakeConn(), "vget /env/tick", n=20)
    assert r.n == 20
    assert r.fps == pytest.approx(20 / r.elapsed)
    assert r.p50_ms > 0
    r1 = fps_benchmark(FakeConn(), "vget /env/tick", n=1)
    assert r1.fps == pytest.approx(1 / r1.elapsed)


def test_fps_benchmark_requires_positive_n():
    with pytest.raises(ValueError):
        fps_benchmark(None, "vget /env/tick", n=0)


def test_mask_color_query(server):
    with Connection(server.endpoint) as c:
        c.request(["vset /env/spawn Human h1 5.5 5.5 0"])
        rgb = [int(v) for v in c.ask("vget /agent/h1/mask_color").split()]
        assert rgb == [1, 0, 0]  # first entity color encodes index 1


def test_relstate_over_wire(server):
    with Connection(server.endpoint) as c:
        c.request(["vset /env/spawn Human a 2.5 2.5 0",
                   "vset /env/spawn Human b 5.5 2.5 0"])
        rho, theta, h = (float(v) for v in
                         c.ask("vget /agent/a/relstate b").split())
        assert rho == pytest.approx(3.0)
        assert theta == pytest.approx(0.0)
