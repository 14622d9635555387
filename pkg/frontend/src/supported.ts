/** Supported-point styling: which archive points sit on the convex frontier.
 *
 * The archive itself always comes from the server; this only derives the
 * hull membership of the points already streamed, with exact integer
 * cross products, to color supported and non-supported points apart.
 */

import type { Pair } from "./types.js";

function cross(o: Pair, a: Pair, b: Pair): number {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/** Flags aligned with the input, which must be sorted by rising f1. */
export function classifySupported(front: readonly Pair[]): boolean[] {
  if (front.length <= 2) return front.map(() => true);
  const hull: Pair[] = [];
  for (const p of front) {
    while (
      hull.length >= 2 &&
      cross(hull[hull.length - 2]!, hull[hull.length - 1]!, p) <= 0
    ) {
      hull.pop();
    }
    hull.push(p);
  }
  const flags: boolean[] = [];
  let edge = 0;
  for (const p of front) {
    while (edge + 1 < hull.length - 1 && hull[edge + 1]![0] <= p[0]) {
      edge += 1;
    }
    const a = hull[edge]!;
    const b = hull[edge + 1]!;
    flags.push(a[0] <= p[0] && p[0] <= b[0] && cross(a, b, p) === 0);
  }
  return flags;
}

/** Unexplored gaps between adjacent front points, for the box overlay. */
export function gapBoxes(front: readonly Pair[]): {
  upperLeft: Pair;
  lowerRight: Pair;
}[] {
  const boxes: { upperLeft: Pair; lowerRight: Pair }[] = [];
  for (let i = 0; i + 1 < front.length; i += 1) {
    const a = front[i]!;
    const b = front[i + 1]!;
    if (b[0] - a[0] >= 2 && a[1] - b[1] >= 2) {
      boxes.push({ upperLeft: a, lowerRight: b });
    }
  }
  return boxes;
}
