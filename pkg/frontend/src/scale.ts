/** Mapping from objective space to plot pixels.
 *
 * Axes are frozen to the root box spanned by the two lexicographic extremes
 * (the first two streamed points), so the spread of a partial front stays
 * visually judgeable while it fills in.  Cost grows rightward and
 * satisfaction (-f1) upward, so better is up for the decision maker.
 */

export interface PlotFrame {
  width: number;
  height: number;
  margin: number;
}

export interface RootBox {
  minCost: number;
  maxCost: number;
  minSat: number;
  maxSat: number;
}

export function rootBoxFrom(
  pairs: readonly (readonly [number, number])[],
): RootBox | null {
  if (pairs.length === 0) return null;
  let minCost = Infinity;
  let maxCost = -Infinity;
  let minSat = Infinity;
  let maxSat = -Infinity;
  for (const [f1, f2] of pairs) {
    const sat = 0 - f1; // subtraction avoids JS negative zero
    minCost = Math.min(minCost, f2);
    maxCost = Math.max(maxCost, f2);
    minSat = Math.min(minSat, sat);
    maxSat = Math.max(maxSat, sat);
  }
  if (minCost === maxCost) maxCost = minCost + 1;
  if (minSat === maxSat) maxSat = minSat + 1;
  return { minCost, maxCost, minSat, maxSat };
}

export class Scale {
  constructor(
    readonly box: RootBox,
    readonly frame: PlotFrame,
  ) {}

  x(cost: number): number {
    const { minCost, maxCost } = this.box;
    const usable = this.frame.width - 2 * this.frame.margin;
    return this.frame.margin + ((cost - minCost) / (maxCost - minCost)) * usable;
  }

  y(satisfaction: number): number {
    const { minSat, maxSat } = this.box;
    const usable = this.frame.height - 2 * this.frame.margin;
    // larger satisfaction sits higher, i.e. smaller pixel y
    return (
      this.frame.height -
      this.frame.margin -
      ((satisfaction - minSat) / (maxSat - minSat)) * usable
    );
  }

  /** Point position from the internal minimization pair. */
  position(f1: number, f2: number): { x: number; y: number } {
    return { x: this.x(f2), y: this.y(-f1) };
  }
}
