/**
 * Session state: a pure reducer over the ordered gateway record stream.
 *
 * The console holds no vehicle state of its own -- everything rendered is
 * derived from records, so reconnecting and replaying rebuilds the exact
 * same view.  Sent messages resolve strictly oldest-first within this
 * sender, which is sound because the carrier delivers per-pair FIFO.
 */

import {
  CommandButton,
  GatewayRecord,
  VehicleSnapshot,
  isMapsLink,
} from "./protocol.js";

export type SentStatus =
  | "pending"
  | "delivered"
  | "applied"
  | "ignored"
  | "rejected"
  | "dropped";

export interface ThreadEntry {
  direction: "sent" | "received";
  body: string;
  at: number;
  status: SentStatus | "received";
  command?: string;
  latencyMs?: number;
  isLink: boolean;
}

export type Connection = "connecting" | "connected" | "disconnected";

export interface SessionView {
  connection: Connection;
  myNumber: string;
  simNumber: string;
  commands: CommandButton[];
  speedup: number;
  thread: ThreadEntry[];
  snapshot: VehicleSnapshot | null;
  attachFailed: boolean;
  lastEvent: string;
  recordCount: number;
}

export function emptySession(myNumber = ""): SessionView {
  return {
    connection: "connecting",
    myNumber,
    simNumber: "",
    commands: [],
    speedup: 1,
    thread: [],
    snapshot: null,
    attachFailed: false,
    lastEvent: "",
    recordCount: 0,
  };
}

function resolveOldest(
  view: SessionView,
  from: SentStatus[],
  to: SentStatus,
  command?: string,
  latencyMs?: number,
): void {
  for (const entry of view.thread) {
    if (entry.direction === "sent" && from.includes(entry.status as SentStatus)) {
      entry.status = to;
      if (command !== undefined) entry.command = command;
      if (latencyMs !== undefined) entry.latencyMs = latencyMs;
      return;
    }
  }
}

/** Fold one gateway record into the view (mutates and returns it). */
export function applyRecord(view: SessionView, record: GatewayRecord): SessionView {
  view.recordCount += 1;
  const r = record as Record<string, unknown>;
  switch (record.type) {
    case "hello": {
      view.simNumber = String(r.sim_number ?? "");
      view.commands = (r.commands as CommandButton[]) ?? [];
      view.speedup = Number(r.speedup ?? 1);
      if (!view.myNumber) view.myNumber = String(r.owner ?? "");
      view.connection = "connected";
      break;
    }
    case "sms_submitted": {
      if (r.from === view.myNumber) {
        view.thread.push({
          direction: "sent",
          body: String(r.body),
          at: record.t,
          status: "pending",
          isLink: false,
        });
      }
      break;
    }
    case "sms_delivered": {
      if (r.to === view.simNumber && r.from === view.myNumber) {
        resolveOldest(view, ["pending"], "delivered", undefined, Number(r.latency_ms));
      } else if (r.to === view.myNumber) {
        const body = String(r.body);
        view.thread.push({
          direction: "received",
          body,
          at: record.t,
          status: "received",
          latencyMs: Number(r.latency_ms),
          isLink: isMapsLink(body),
        });
      }
      break;
    }
    case "sms_dropped": {
      if (r.from === view.myNumber) {
        resolveOldest(view, ["pending", "delivered"], "dropped");
      }
      break;
    }
    case "command_applied": {
      if (r.from === view.myNumber) {
        resolveOldest(view, ["delivered", "pending"], "applied", String(r.command));
      }
      break;
    }
    case "cmd_ignored": {
      if (r.from === view.myNumber) {
        resolveOldest(view, ["delivered", "pending"], "ignored");
      }
      break;
    }
    case "auth_rejected": {
      if (r.from === view.myNumber) {
        resolveOldest(view, ["delivered", "pending"], "rejected");
      }
      break;
    }
    case "state_snapshot": {
      view.snapshot = record as unknown as VehicleSnapshot;
      break;
    }
    case "gsm_attach_failed": {
      view.attachFailed = true;
      break;
    }
    case "boot": {
      view.attachFailed = false;
      break;
    }
    default:
      break;
  }
  view.lastEvent = record.type;
  return view;
}

export function applyAll(view: SessionView, records: GatewayRecord[]): SessionView {
  for (const record of records) applyRecord(view, record);
  return view;
}

/** Received thread entries that carry a parseable maps link. */
export function receivedLinks(view: SessionView): ThreadEntry[] {
  return view.thread.filter((e) => e.direction === "received" && e.isLink);
}
