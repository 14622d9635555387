/** What-if edit assembly and field-level validation against the instance. */

import type { InstanceDoc } from "./types.js";

export interface WhatIfEdit {
  costs: Record<string, number>;
  weights: Record<string, number>;
}

export interface FieldError {
  field: string;
  message: string;
}

export interface EditResult {
  edit: WhatIfEdit | null;
  errors: FieldError[];
}

/** Build the whatif payload; entries equal to the current value are dropped. */
export function buildEdit(
  instance: InstanceDoc,
  costEntries: ReadonlyMap<number, number>,
  weightEntries: ReadonlyMap<number, number>,
): EditResult {
  const errors: FieldError[] = [];
  const costs: Record<string, number> = {};
  const weights: Record<string, number> = {};
  for (const [id, value] of costEntries) {
    if (!Number.isInteger(id) || id < 1 || id > instance.costs.length) {
      errors.push({ field: `cost-${id}`, message: `unknown requirement ${id}` });
      continue;
    }
    if (!Number.isInteger(value) || value < 0) {
      errors.push({
        field: `cost-${id}`,
        message: "cost must be a non-negative integer",
      });
      continue;
    }
    if (instance.costs[id - 1] !== value) costs[String(id)] = value;
  }
  for (const [id, value] of weightEntries) {
    if (!Number.isInteger(id) || id < 1 || id > instance.weights.length) {
      errors.push({ field: `weight-${id}`, message: `unknown stakeholder ${id}` });
      continue;
    }
    if (!Number.isInteger(value) || value < 1) {
      errors.push({
        field: `weight-${id}`,
        message: "weight must be a positive integer",
      });
      continue;
    }
    if (instance.weights[id - 1] !== value) weights[String(id)] = value;
  }
  if (errors.length > 0) return { edit: null, errors };
  return { edit: { costs, weights }, errors: [] };
}

export function isIdentity(edit: WhatIfEdit): boolean {
  return (
    Object.keys(edit.costs).length === 0 && Object.keys(edit.weights).length === 0
  );
}
