/**
 * DOM wiring for the phone console.  All state lives in the SessionView
 * reducer; this file only renders it and forwards button presses to the
 * gateway socket.
 */

import { parseMapsLink, parseRecord } from "./protocol.js";
import { applyRecord, emptySession, receivedLinks, SessionView } from "./session.js";
import { projectMarker } from "./map.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

let view: SessionView = emptySession();
let socket: WebSocket | null = null;

function connect(): void {
  const url = ($("url") as HTMLInputElement).value.trim();
  const myNumber = ($("my-number") as HTMLInputElement).value.trim();
  view = emptySession(myNumber);
  render();
  socket?.close();
  socket = new WebSocket(url);
  socket.addEventListener("open", () => {
    view.connection = "connected";
    render();
  });
  socket.addEventListener("close", () => {
    view.connection = "disconnected";
    render();
  });
  socket.addEventListener("error", () => {
    view.connection = "disconnected";
    render();
  });
  socket.addEventListener("message", (event) => {
    const record = parseRecord(String(event.data));
    if (record) {
      applyRecord(view, record);
      if (!($("my-number") as HTMLInputElement).value.trim() && view.myNumber) {
        ($("my-number") as HTMLInputElement).value = view.myNumber;
      }
      render();
    }
  });
}

function send(obj: unknown): void {
  if (socket && socket.readyState === WebSocket.OPEN) {
    socket.send(JSON.stringify(obj));
  }
}

function sendSms(body: string): void {
  send({ type: "send_sms", from: view.myNumber, body });
}

function render(): void {
  $("status").textContent = view.connection;
  $("status").className = `pill ${view.connection}`;
  renderButtons();
  renderThread();
  renderSnapshot();
  renderMap();
}

function renderButtons(): void {
  const grid = $("command-grid");
  grid.replaceChildren();
  for (const command of view.commands) {
    const button = document.createElement("button");
    button.textContent = command.text;
    button.title = command.tag;
    button.addEventListener("click", () => sendSms(command.text));
    grid.appendChild(button);
  }
}

function renderThread(): void {
  const list = $("thread");
  list.replaceChildren();
  for (const entry of view.thread) {
    const item = document.createElement("li");
    item.className = `msg ${entry.direction}`;
    const body = document.createElement("div");
    body.className = "body";
    body.textContent = entry.body;
    const meta = document.createElement("div");
    meta.className = `meta ${entry.status}`;
    const latency = entry.latencyMs !== undefined ? ` (${entry.latencyMs} ms)` : "";
    meta.textContent = `t=${entry.at} · ${entry.status}${latency}`;
    item.append(body, meta);
    list.appendChild(item);
  }
  list.scrollTop = list.scrollHeight;
}

const LED_COLORS = ["white", "red", "yellow", "green"] as const;
const FEATURES = [
  "position_lights", "head_lights", "brake_lights",
  "warning_lights", "doors_locked", "gsm_ready", "location_mode",
] as const;

function renderSnapshot(): void {
  const panel = $("snapshot");
  panel.replaceChildren();
  if (view.attachFailed) {
    const warn = document.createElement("p");
    warn.className = "attach-failed";
    warn.textContent = "network attach failed - restart the unit";
    panel.appendChild(warn);
  }
  const snapshot = view.snapshot;
  if (!snapshot) {
    panel.appendChild(document.createTextNode("no snapshot yet"));
    return;
  }
  const leds = document.createElement("div");
  leds.className = "leds";
  for (const color of LED_COLORS) {
    const count = snapshot[color];
    const label = document.createElement("span");
    label.className = `led ${color}${count > 0 ? " lit" : ""}`;
    label.textContent = `${color} ×${count}`;
    leds.appendChild(label);
  }
  panel.appendChild(leds);
  const flags = document.createElement("ul");
  flags.className = "flags";
  for (const name of FEATURES) {
    const flag = document.createElement("li");
    flag.className = snapshot[name] ? "on" : "off";
    flag.textContent = name.replace(/_/g, " ");
    flags.appendChild(flag);
  }
  panel.appendChild(flags);
}

function renderMap(): void {
  const links = receivedLinks(view);
  const marker = $("marker");
  const caption = $("map-caption");
  if (links.length === 0) {
    marker.style.display = "none";
    caption.textContent = "no location received yet";
    return;
  }
  const latest = links[links.length - 1];
  const coords = parseMapsLink(latest.body);
  if (!coords) {
    marker.style.display = "none";
    caption.textContent = latest.body; // unparseable: raw text fallback
    return;
  }
  const where = projectMarker(coords.lat, coords.lon);
  marker.style.display = "block";
  marker.style.left = `${where.xPct}%`;
  marker.style.top = `${where.yPct}%`;
  caption.textContent = coords.noFix
    ? "no fix (0, 0)"
    : `${coords.lat}, ${coords.lon}`;
}

function wireControls(): void {
  $("connect").addEventListener("click", connect);
  $("send-free").addEventListener("click", () => {
    const input = $("free-text") as HTMLInputElement;
    if (input.value) sendSms(input.value);
    input.value = "";
  });
  $("restart").addEventListener("click", () => send({ type: "restart" }));
  for (const source of ["main", "backup"] as const) {
    const box = $(`power-${source}`) as HTMLInputElement;
    box.addEventListener("change", () =>
      send({ type: "power", source, on: box.checked }),
    );
  }
}

wireControls();
render();
