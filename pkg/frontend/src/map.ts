/**
 * Offline map preview: a plain lat/lon grid with a projected marker.
 * Nothing is ever fetched; links are parsed locally and drawn on an
 * equirectangular canvas.
 */

export interface MarkerPosition {
  /** Percent from the left edge (longitude -180..180 -> 0..100). */
  xPct: number;
  /** Percent from the top edge (latitude 90..-90 -> 0..100). */
  yPct: number;
}

export function projectMarker(lat: number, lon: number): MarkerPosition {
  const clampedLat = Math.max(-90, Math.min(90, lat));
  const clampedLon = Math.max(-180, Math.min(180, lon));
  return {
    xPct: ((clampedLon + 180) / 360) * 100,
    yPct: ((90 - clampedLat) / 180) * 100,
  };
}

/** Short human label for a marker, e.g. "44.44212, 26.04938". */
export function markerLabel(lat: number, lon: number): string {
  return `${lat}, ${lon}`;
}
