"""Fixed-rate frame rendering and the line-based streaming protocol.

Wire format, one linefeed-terminated line each::

    HAPTIX/1 rate=<int> actuators=10
    <t_ms>;<v1>;...;<v10>        (t_ms with 1 fractional digit, v with `precision`)
    ...
    END

Sample k sits at t = k * 1000 / rate ms. An event covers the samples with
start <= t < start + duration. Membership is decided in integer arithmetic
on tenths of a millisecond, so boundaries never depend on float rounding.
"""

from __future__ import annotations

import logging
import socket
import time
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple

import numpy as np

from . import _kernels
from .encoder import Timeline
from .glove import N_ACTUATORS

log = logging.getLogger(__name__)

PROTOCOL = "HAPTIX/1"


@dataclass(frozen=True)
class RenderConfig:
    rate: int = 1000
    precision: int = 4

    def __post_init__(self):
        if int(self.rate) < 1:
            raise ValueError(f"sample rate must be >= 1, got {self.rate}")
        if self.precision < 0:
            raise ValueError("precision must be non-negative")

    @property
    def period(self) -> float:
        return 1000.0 / self.rate


class Frame(NamedTuple):
    t: float
    intensities: tuple[float, ...]


def _tenths(ms: float) -> int:
    return int(round(ms * 10))


def _first_sample_at_or_after(tenths: int, rate: int) -> int:
    # smallest k with k * 10000 >= tenths * rate
    return -((-tenths * rate) // 10000)


def render_array(timeline: Timeline, config: RenderConfig = RenderConfig()) -> tuple[np.ndarray, np.ndarray]:
    """Sample times (ms) and an (n_frames, 10) intensity matrix."""
    rate = int(config.rate)
    if rate < 1:
        raise ValueError("sample rate must be >= 1")
    events = timeline.events
    if not events:
        return np.zeros(0), np.zeros((0, N_ACTUATORS))
    n_frames = _first_sample_at_or_after(_tenths(timeline.total), rate)
    lo = np.array([_first_sample_at_or_after(_tenths(e.start), rate) for e in events], dtype=np.int64)
    hi = np.array([_first_sample_at_or_after(_tenths(e.end), rate) for e in events], dtype=np.int64)
    act = np.array([e.actuator for e in events], dtype=np.int64)
    val = np.array([e.intensity for e in events], dtype=np.float64)
    values = _kernels.fill_frames(lo, hi, act, val, n_frames, N_ACTUATORS)
    times = np.arange(n_frames) * (1000.0 / rate)
    return times, values


def render(timeline: Timeline, config: RenderConfig = RenderConfig()) -> list[Frame]:
    times, values = render_array(timeline, config)
    return [Frame(float(t), tuple(float(v) for v in row)) for t, row in zip(times, values)]


def header_line(config: RenderConfig) -> str:
    return f"{PROTOCOL} rate={int(config.rate)} actuators={N_ACTUATORS}\n"


def iter_lines(timeline: Timeline, config: RenderConfig = RenderConfig()) -> Iterator[str]:
    """Header, one line per frame, then the END trailer."""
    times, values = render_array(timeline, config)
    p = config.precision
    yield header_line(config)
    for t, row in zip(times, values):
        yield f"{t:.1f};" + ";".join(f"{v:.{p}f}" for v in row) + "\n"
    yield "END\n"


def render_text(timeline: Timeline, config: RenderConfig = RenderConfig()) -> bytes:
    return "".join(iter_lines(timeline, config)).encode("ascii")


def parse_text(payload: bytes) -> tuple[int, list[Frame]]:
    """Inverse of render_text, returning the declared rate and the frames."""
    lines = payload.decode("ascii").split("\n")
    if not lines or not lines[0].startswith(PROTOCOL + " "):
        raise ValueError("missing protocol header")
    fields = dict(kv.split("=", 1) for kv in lines[0].split()[1:])
    rate = int(fields["rate"])
    if int(fields.get("actuators", N_ACTUATORS)) != N_ACTUATORS:
        raise ValueError("unexpected actuator count")
    frames = []
    for line in lines[1:]:
        if line == "END":
            return rate, frames
        parts = line.split(";")
        if len(parts) != N_ACTUATORS + 1:
            raise ValueError(f"malformed frame line {line!r}")
        frames.append(Frame(float(parts[0]), tuple(float(v) for v in parts[1:])))
    raise ValueError("stream ended without END trailer")


@dataclass
class SessionSummary:
    frames_sent: int = 0
    bytes_sent: int = 0
    truncated: bool = False
    peer: str = ""


def stream_lines(
    send: Callable[[bytes], None],
    timeline: Timeline,
    config: RenderConfig = RenderConfig(),
    fast: bool = True,
    clock: Callable[[], float] = time.monotonic,
    sleep: Callable[[float], None] = time.sleep,
) -> SessionSummary:
    """Push one session through ``send``; a failing send marks the session truncated.

    Only frame lines are counted in ``frames_sent``; header and trailer bytes
    are included in ``bytes_sent``.
    """
    summary = SessionSummary()
    period = 1.0 / config.rate
    t0 = clock()
    lines = iter_lines(timeline, config)
    try:
        for i, line in enumerate(lines):
            data = line.encode("ascii")
            is_frame = i > 0 and line != "END\n"
            if is_frame and not fast:
                due = t0 + summary.frames_sent * period
                delay = due - clock()
                if delay > 0:
                    sleep(delay)
            send(data)
            summary.bytes_sent += len(data)
            if is_frame:
                summary.frames_sent += 1
    except OSError as exc:
        log.info("client went away after %d frames: %s", summary.frames_sent, exc)
        summary.truncated = True
    return summary


def parse_endpoint(endpoint: str) -> tuple[str, int]:
    host, sep, port = endpoint.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"endpoint must be host:port, got {endpoint!r}")
    return host or "127.0.0.1", int(port)


class FrameServer:
    """TCP playback device: every accepted connection receives one full stream.

    Connections are served one after another; each stream has a single writer.
    """

    def __init__(self, timeline: Timeline, config: RenderConfig = RenderConfig(), endpoint: str = "127.0.0.1:0", fast: bool = False):
        self.timeline = timeline
        self.config = config
        self.fast = fast
        host, port = parse_endpoint(endpoint)
        self.sock = socket.create_server((host, port))
        self.sessions: list[SessionSummary] = []

    @property
    def address(self) -> tuple[str, int]:
        return self.sock.getsockname()[:2]

    def serve_one(self) -> SessionSummary:
        conn, peer = self.sock.accept()
        with conn:
            summary = stream_lines(conn.sendall, self.timeline, self.config, fast=self.fast)
            summary.peer = f"{peer[0]}:{peer[1]}"
            if not summary.truncated:
                try:
                    conn.shutdown(socket.SHUT_WR)
                except OSError:
                    pass
        self.sessions.append(summary)
        log.info("session %s: %d frames, %d bytes%s", summary.peer, summary.frames_sent,
                 summary.bytes_sent, " (truncated)" if summary.truncated else "")
        return summary

    def serve(self, max_sessions: int | None = None) -> list[SessionSummary]:
        served = []
        while max_sessions is None or len(served) < max_sessions:
            served.append(self.serve_one())
        return served

    def close(self):
        self.sock.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def serve(timeline: Timeline, config: RenderConfig, endpoint: str, fast: bool = False,
          max_sessions: int | None = 1) -> list[SessionSummary]:
    with FrameServer(timeline, config, endpoint, fast) as server:
        return server.serve(max_sessions)


def capture(endpoint: str | tuple[str, int], timeout: float = 30.0) -> bytes:
    """Connect, read until the server closes, return the raw bytes."""
    addr = parse_endpoint(endpoint) if isinstance(endpoint, str) else endpoint
    chunks = []
    with socket.create_connection(addr, timeout=timeout) as s:
        while True:
            chunk = s.recv(65536)
            if not chunk:
                break
            chunks.append(chunk)
    return b"".join(chunks)
