/** Wire types of the releasefront service (HTTP/JSON + SSE). */

export interface InstanceSummary {
  id: string;
  name: string;
  n: number;
  m: number;
}

export interface InstanceDoc {
  id?: string;
  name: string;
  costs: number[];
  weights: number[];
  precedence: [number, number][];
  requests: [number, number[]][];
}

export type RunStatus = "queued" | "running" | "paused" | "done" | "cancelled";

export interface RunHandle {
  id: string;
  instance_id: string;
  parent_id: string | null;
  algorithm: string;
  status: RunStatus;
  deadline: number | null;
  archive_size: number;
  events: number;
  termination: string | null;
  oracle_calls: number | null;
}

export interface SolutionBits {
  r: number[];
  s: number[];
}

/** One streamed discovery: a point plus the archive delta it caused. */
export interface PointEvent {
  kind: "point";
  seq: number;
  elapsed: number;
  point: { f1: number; f2: number };
  satisfaction: number;
  cost: number;
  solution: SolutionBits;
  inserted: boolean;
  removed: [number, number][];
  hv: number;
  hv_fraction: string | null;
  boxes: number;
  oracle_calls: number;
}

export interface StatusEvent {
  kind: "status";
  seq: number;
  status: RunStatus;
}

export interface ErrorEvent {
  kind: "error";
  seq: number;
  message: string;
}

export type RunEvent = PointEvent | StatusEvent | ErrorEvent;

export interface ArchivePoint {
  f1: number;
  f2: number;
  satisfaction: number;
  cost: number;
  solution: SolutionBits | null;
}

export interface ArchiveDoc {
  run_id: string;
  points: ArchivePoint[];
  hypervolume: number;
  total_hypervolume: number | null;
  nadir: [number, number] | null;
}

export type Pair = readonly [number, number];
