/** Validation of streamed event payloads; malformed input yields null. */

import type { RunEvent, RunStatus } from "./types.js";

const STATUSES: RunStatus[] = ["queued", "running", "paused", "done", "cancelled"];

function isPair(value: unknown): value is [number, number] {
  return (
    Array.isArray(value) &&
    value.length === 2 &&
    Number.isInteger(value[0]) &&
    Number.isInteger(value[1])
  );
}

function isBits(value: unknown): boolean {
  return Array.isArray(value) && value.every((b) => b === 0 || b === 1);
}

/** Parse one SSE `data:` payload into a typed event, or null if invalid. */
export function parseEvent(raw: string): RunEvent | null {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof doc !== "object" || doc === null) return null;
  const obj = doc as Record<string, unknown>;
  if (!Number.isInteger(obj.seq)) return null;
  if (obj.kind === "status") {
    if (!STATUSES.includes(obj.status as RunStatus)) return null;
    return { kind: "status", seq: obj.seq as number, status: obj.status as RunStatus };
  }
  if (obj.kind === "error") {
    if (typeof obj.message !== "string") return null;
    return { kind: "error", seq: obj.seq as number, message: obj.message };
  }
  if (obj.kind !== "point") return null;
  const point = obj.point as Record<string, unknown> | undefined;
  if (
    point === undefined ||
    !Number.isInteger(point.f1) ||
    !Number.isInteger(point.f2)
  ) {
    return null;
  }
  if (typeof obj.inserted !== "boolean") return null;
  if (!Array.isArray(obj.removed) || !obj.removed.every(isPair)) return null;
  const solution = obj.solution as Record<string, unknown> | undefined;
  if (solution === undefined || !isBits(solution.r) || !isBits(solution.s)) {
    return null;
  }
  if (typeof obj.elapsed !== "number" || typeof obj.hv !== "number") return null;
  return {
    kind: "point",
    seq: obj.seq as number,
    elapsed: obj.elapsed,
    point: { f1: point.f1 as number, f2: point.f2 as number },
    satisfaction: 0 - (point.f1 as number),
    cost: point.f2 as number,
    solution: { r: solution.r as number[], s: solution.s as number[] },
    inserted: obj.inserted,
    removed: obj.removed as [number, number][],
    hv: obj.hv,
    hv_fraction: typeof obj.hv_fraction === "string" ? obj.hv_fraction : null,
    boxes: Number.isInteger(obj.boxes) ? (obj.boxes as number) : 0,
    oracle_calls: Number.isInteger(obj.oracle_calls)
      ? (obj.oracle_calls as number)
      : 0,
  };
}
