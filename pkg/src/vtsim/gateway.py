"""Live console gateway: the socket the emulated owner's phone attaches to.

Listens on a local TCP port and speaks newline-delimited JSON.  A client
opening with an HTTP GET is upgraded to a WebSocket speaking the same JSON
objects, one per text frame, so the browser console connects without a
bridge.  Every transcript record is broadcast to all clients as it occurs;
on connect a client first gets a hello (command table, numbers, speedup)
and a replay of everything recorded so far.

Client commands:

    {"type": "send_sms", "from": "+40...", "body": "..."}
    {"type": "power", "source": "main"|"backup", "on": true|false}
    {"type": "restart"}
    {"type": "get_location_text"}

Malformed input earns {"type": "error", "reason": ...} and the session
continues.  Commands reach the simulation only through a queue the
scheduler loop drains, so the virtual world stays single-threaded.
"""

from __future__ import annotations

import base64
import hashlib
import json
import queue
import socket
import threading
import time

from .harness import SimWorld
from .location import compose_location_text
from .protocol import SmsMessage, canonical_command_table, normalize_number
from .scenario import Scenario

_WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"


def _ws_accept_key(key: str) -> str:
    digest = hashlib.sha1((key + _WS_GUID).encode("ascii")).digest()
    return base64.b64encode(digest).decode("ascii")


def _ws_frame(payload: bytes) -> bytes:
    """Single unmasked text frame, server to client."""
    length = len(payload)
    if length < 126:
        header = bytes([0x81, length])
    elif length < 1 << 16:
        header = bytes([0x81, 126]) + length.to_bytes(2, "big")
    else:
        header = bytes([0x81, 127]) + length.to_bytes(8, "big")
    return header + payload


class _Client:
    def __init__(self, conn: socket.socket, websocket: bool) -> None:
        self.conn = conn
        self.websocket = websocket
        self.lock = threading.Lock()
        self.alive = True

    def send_json(self, obj: dict) -> None:
        data = json.dumps(obj, separators=(",", ":")).encode("utf-8")
        wire = _ws_frame(data) if self.websocket else data + b"\n"
        try:
            with self.lock:
                self.conn.sendall(wire)
        except OSError:
            self.alive = False


class ConsoleGateway:
    """Accepts console clients and relays between them and the world."""

    def __init__(self, world: SimWorld, host: str = "127.0.0.1", port: int = 0) -> None:
        self.world = world
        self.commands: queue.Queue[tuple[_Client, dict]] = queue.Queue()
        self.speedup = 1.0
        self._clients: list[_Client] = []
        self._lock = threading.Lock()
        self._closed = False
        self._listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._listener.bind((host, port))
        self._listener.listen(8)
        self.host, self.port = self._listener.getsockname()[:2]
        world.transcript.listeners.append(self._broadcast)

    def start(self) -> None:
        threading.Thread(target=self._accept_loop, daemon=True).start()

    def close(self) -> None:
        self._closed = True
        try:
            self._listener.close()
        except OSError:
            pass
        with self._lock:
            clients, self._clients = self._clients, []
        for client in clients:
            try:
                client.conn.close()
            except OSError:
                pass

    # -- connection handling ------------------------------------------------

    def _accept_loop(self) -> None:
        while not self._closed:
            try:
                conn, _addr = self._listener.accept()
            except OSError:
                return
            threading.Thread(target=self._serve, args=(conn,), daemon=True).start()

    def _serve(self, conn: socket.socket) -> None:
        # A WebSocket client opens with its GET immediately; a plain JSONL
        # client may connect silently and just listen, so the protocol peek
        # must not block the hello on client input.
        try:
            conn.settimeout(0.25)
            try:
                head = conn.recv(4, socket.MSG_PEEK)
            except TimeoutError:
                head = b""
            conn.settimeout(None)
        except OSError:
            return
        websocket = head.startswith(b"GET")
        if websocket and not self._ws_handshake(conn):
            conn.close()
            return
        client = _Client(conn, websocket)
        with self._lock:
            replay = list(self.world.transcript.records)
            self._clients.append(client)
        client.send_json(self._hello())
        for record in replay:
            client.send_json(record)
        try:
            if websocket:
                self._read_ws(client)
            else:
                self._read_lines(client)
        finally:
            with self._lock:
                if client in self._clients:
                    self._clients.remove(client)
            try:
                conn.close()
            except OSError:
                pass

    def _hello(self) -> dict:
        cfg = self.world.scenario.config
        return {
            "type": "hello",
            "t": self.world.clock.now_ms,
            "sim_number": cfg.sim_number,
            "owner": cfg.owner,
            "speedup": self.speedup,
            "commands": [
                {"text": e.text, "tag": e.command.tag}
                for e in canonical_command_table()
            ],
        }

    def _ws_handshake(self, conn: socket.socket) -> bool:
        data = b""
        while b"\r\n\r\n" not in data:
            chunk = conn.recv(4096)
            if not chunk or len(data) > 65536:
                return False
            data += chunk
        key = None
        for line in data.split(b"\r\n"):
            if line.lower().startswith(b"sec-websocket-key:"):
                key = line.split(b":", 1)[1].strip().decode("ascii")
        if key is None:
            return False
        response = (
            "HTTP/1.1 101 Switching Protocols\r\n"
            "Upgrade: websocket\r\n"
            "Connection: Upgrade\r\n"
            f"Sec-WebSocket-Accept: {_ws_accept_key(key)}\r\n"
            "\r\n"
        )
        conn.sendall(response.encode("ascii"))
        return True

    def _read_lines(self, client: _Client) -> None:
        buf = b""
        while client.alive and not self._closed:
            try:
                chunk = client.conn.recv(4096)
            except OSError:
                return
            if not chunk:
                return
            buf += chunk
            while b"\n" in buf:
                line, buf = buf.split(b"\n", 1)
                if line.strip():
                    self._enqueue(client, line)

    def _read_ws(self, client: _Client) -> None:
        buf = b""

        def need(n: int) -> bool:
            nonlocal buf
            while len(buf) < n:
                try:
                    chunk = client.conn.recv(4096)
                except OSError:
                    return False
                if not chunk:
                    return False
                buf += chunk
            return True

        while client.alive and not self._closed:
            if not need(2):
                return
            opcode = buf[0] & 0x0F
            masked = bool(buf[1] & 0x80)
            length = buf[1] & 0x7F
            offset = 2
            if length == 126:
                if not need(offset + 2):
                    return
                length = int.from_bytes(buf[offset : offset + 2], "big")
                offset += 2
            elif length == 127:
                if not need(offset + 8):
                    return
                length = int.from_bytes(buf[offset : offset + 8], "big")
                offset += 8
            mask = b"\x00" * 4
            if masked:
                if not need(offset + 4):
                    return
                mask = buf[offset : offset + 4]
                offset += 4
            if not need(offset + length):
                return
            payload = bytes(
                b ^ mask[i % 4] for i, b in enumerate(buf[offset : offset + length])
            )
            buf = buf[offset + length :]
            if opcode == 0x8:  # close
                return
            if opcode == 0x9:  # ping -> pong
                with client.lock:
                    try:
                        client.conn.sendall(bytes([0x8A, len(payload)]) + payload)
                    except OSError:
                        return
                continue
            if opcode == 0x1 and payload.strip():
                self._enqueue(client, payload)

    def _enqueue(self, client: _Client, raw: bytes) -> None:
        try:
            cmd = json.loads(raw.decode("utf-8"))
            if not isinstance(cmd, dict):
                raise ValueError("command must be a JSON object")
        except (ValueError, UnicodeDecodeError) as exc:
            client.send_json({"type": "error", "reason": f"bad json: {exc}"})
            return
        self.commands.put((client, cmd))

    # -- world side -------------------------------------------------------------

    def _broadcast(self, record: dict) -> None:
        with self._lock:
            clients = list(self._clients)
        for client in clients:
            client.send_json(record)

    def apply_command(self, client: _Client, cmd: dict) -> None:
        """Run one console command against the world (scheduler thread only)."""
        now = self.world.clock.now_ms
        try:
            kind = cmd.get("type")
            if kind == "send_sms":
                sender = normalize_number(str(cmd["from"]))
                body = str(cmd["body"])
                SmsMessage(sender=sender, body=body, submitted_at=now)  # validate
                self.world.inject_sms(sender, body, now)
            elif kind == "power":
                source = str(cmd["source"])
                if source not in ("main", "backup"):
                    raise ValueError(f"unknown power source {source!r}")
                self.world.set_power(source, bool(cmd["on"]), now)
            elif kind == "restart":
                self.world.do_restart(now)
            elif kind == "get_location_text":
                fix = self.world.firmware.decoder.fix_snapshot(now)
                client.send_json(
                    {"type": "location_text", "t": now, "body": compose_location_text(fix)}
                )
            else:
                raise ValueError(f"unknown command type {kind!r}")
        except (KeyError, ValueError, TypeError) as exc:
            client.send_json({"type": "error", "reason": str(exc)})


def run_interactive(
    scenario: Scenario,
    host: str = "127.0.0.1",
    port: int = 0,
    speedup: float = 1.0,
    stop: threading.Event | None = None,
    ready=None,
) -> SimWorld:
    """Run the world paced against the wall clock at `speedup` times real time.

    Scripted scenario events still fire at their virtual times; console
    clients inject additional stimuli as they arrive.  Blocks until `stop`
    is set (or forever); returns the world for inspection.
    """
    if speedup <= 0:
        raise ValueError("speedup must be positive")
    world = SimWorld(scenario)
    gateway = ConsoleGateway(world, host=host, port=port)
    gateway.speedup = speedup
    gateway.start()
    if ready is not None:
        ready(gateway)
    world.start()
    wall_start = time.monotonic()
    try:
        while stop is None or not stop.is_set():
            target = int((time.monotonic() - wall_start) * 1000.0 * speedup)
            world.scheduler.run_until(target)
            if world.clock.now_ms < target:
                world.clock.advance_to(target)
            while True:
                try:
                    client, cmd = gateway.commands.get_nowait()
                except queue.Empty:
                    break
                gateway.apply_command(client, cmd)
            time.sleep(0.005)
    except KeyboardInterrupt:
        pass
    finally:
        gateway.close()
    return world
