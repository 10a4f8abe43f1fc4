/**
 * Gateway wire protocol: the JSON objects the simulator streams to the
 * console, plus the commands the console may send back.
 */

export interface CommandButton {
  text: string;
  tag: string;
}

export interface HelloRecord {
  type: "hello";
  t: number;
  sim_number: string;
  owner: string;
  speedup: number;
  commands: CommandButton[];
}

export interface TranscriptRecord {
  type: string;
  t: number;
  [key: string]: unknown;
}

export type GatewayRecord = HelloRecord | TranscriptRecord;

export interface VehicleSnapshot {
  t: number;
  position_lights: boolean;
  head_lights: boolean;
  brake_lights: boolean;
  warning_lights: boolean;
  doors_locked: boolean;
  gsm_ready: boolean;
  location_mode: boolean;
  white: number;
  red: number;
  yellow: number;
  green: number;
}

export function parseRecord(line: string): GatewayRecord | null {
  try {
    const parsed = JSON.parse(line);
    if (parsed && typeof parsed === "object" && typeof parsed.type === "string") {
      return parsed as GatewayRecord;
    }
  } catch {
    /* malformed lines are dropped; the gateway never sends them */
  }
  return null;
}

const MAPS_LINK = new RegExp(
  "^https://www\\.google\\.ro/maps/place/([^/+]+)\\+([^/]+)/@[^,]+,[^,]+,17z/$",
);

export interface LinkCoordinates {
  lat: number;
  lon: number;
  noFix: boolean;
}

/** Recover coordinates from a received maps link; null when it is not one. */
export function parseMapsLink(body: string): LinkCoordinates | null {
  const match = MAPS_LINK.exec(body.trim());
  if (!match) return null;
  const lat = Number(match[1]);
  const lon = Number(match[2]);
  if (!Number.isFinite(lat) || !Number.isFinite(lon)) return null;
  return { lat, lon, noFix: lat === 0 && lon === 0 };
}

export function isMapsLink(body: string): boolean {
  return parseMapsLink(body) !== null;
}
