/** Client-side mirror of a run's archive, driven purely by event deltas.
 *
 * The server states which points each discovery evicted, so the mirror never
 * re-derives dominance itself; after the stream closes it must equal the
 * archive endpoint exactly.
 */

import type { PointEvent, RunEvent, RunStatus, SolutionBits } from "./types.js";

export interface MirrorPoint {
  f1: number;
  f2: number;
  solution: SolutionBits | null;
}

export class ArchiveMirror {
  private byKey = new Map<string, MirrorPoint>();
  status: RunStatus = "queued";
  lastSeq = -1;
  hv = 0;
  hvFraction: string | null = null;
  boxes = 0;
  oracleCalls = 0;
  errorMessage: string | null = null;

  private static key(f1: number, f2: number): string {
    return `${f1},${f2}`;
  }

  /** Reset to the empty state (used when a reconnect replays from scratch). */
  reset(): void {
    this.byKey.clear();
    this.status = "queued";
    this.lastSeq = -1;
    this.hv = 0;
    this.hvFraction = null;
    this.boxes = 0;
    this.oracleCalls = 0;
    this.errorMessage = null;
  }

  apply(event: RunEvent): void {
    if (event.seq <= this.lastSeq) return; // replayed duplicate
    this.lastSeq = event.seq;
    if (event.kind === "status") {
      this.status = event.status;
      return;
    }
    if (event.kind === "error") {
      this.errorMessage = event.message;
      return;
    }
    this.applyPoint(event);
  }

  private applyPoint(event: PointEvent): void {
    for (const [f1, f2] of event.removed) {
      this.byKey.delete(ArchiveMirror.key(f1, f2));
    }
    if (event.inserted) {
      const key = ArchiveMirror.key(event.point.f1, event.point.f2);
      if (!this.byKey.has(key)) {
        this.byKey.set(key, {
          f1: event.point.f1,
          f2: event.point.f2,
          solution: event.solution,
        });
      }
    }
    this.hv = event.hv;
    this.hvFraction = event.hv_fraction;
    this.boxes = event.boxes;
    this.oracleCalls = event.oracle_calls;
  }

  get terminal(): boolean {
    return this.status === "done" || this.status === "cancelled";
  }

  /** Points sorted by rising f1 (falling f2), like the server archive. */
  points(): MirrorPoint[] {
    return [...this.byKey.values()].sort((a, b) => a.f1 - b.f1);
  }

  pairs(): [number, number][] {
    return this.points().map((p) => [p.f1, p.f2]);
  }

  find(f1: number, f2: number): MirrorPoint | undefined {
    return this.byKey.get(ArchiveMirror.key(f1, f2));
  }
}

/** Exact set equality between the mirror and the archive endpoint points. */
export function sameFront(
  mirror: ArchiveMirror,
  archivePairs: readonly (readonly [number, number])[],
): boolean {
  const mine = mirror.pairs();
  if (mine.length !== archivePairs.length) return false;
  const want = new Set(archivePairs.map(([a, b]) => `${a},${b}`));
  return mine.every(([a, b]) => want.has(`${a},${b}`));
}
