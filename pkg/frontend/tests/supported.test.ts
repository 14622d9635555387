import { describe, expect, it } from "vitest";

import { classifySupported, gapBoxes } from "../src/supported.js";

describe("classifySupported", () => {
  it("collinear front is fully supported", () => {
    expect(
      classifySupported([
        [-9, 9],
        [-5, 5],
        [-4, 4],
        [0, 0],
      ]),
    ).toEqual([true, true, true, true]);
  });

  it("points above the hull are non-supported", () => {
    expect(
      classifySupported([
        [0, 3],
        [2, 2],
        [3, 0],
      ]),
    ).toEqual([true, false, true]);
  });

  it("one or two points are trivially supported", () => {
    expect(classifySupported([[1, 1]])).toEqual([true]);
    expect(
      classifySupported([
        [0, 4],
        [4, 0],
      ]),
    ).toEqual([true, true]);
  });
});

describe("gapBoxes", () => {
  it("only gaps wide enough for an integer interior appear", () => {
    const boxes = gapBoxes([
      [-9, 9],
      [-5, 5],
      [-4, 4],
      [0, 0],
    ]);
    expect(boxes).toEqual([
      { upperLeft: [-9, 9], lowerRight: [-5, 5] },
      { upperLeft: [-4, 4], lowerRight: [0, 0] },
    ]);
  });

  it("empty fronts have no gaps", () => {
    expect(gapBoxes([])).toEqual([]);
    expect(gapBoxes([[0, 0]])).toEqual([]);
  });
});
