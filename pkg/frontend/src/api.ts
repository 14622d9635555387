/** Thin fetch client for the documented service endpoints. */

import type { ArchiveDoc, InstanceDoc, InstanceSummary, RunHandle } from "./types.js";
import type { WhatIfEdit } from "./whatif.js";

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new Error(detail);
  }
  return (await response.json()) as T;
}

export function listInstances(): Promise<InstanceSummary[]> {
  return request("/instances");
}

export function getInstance(id: string): Promise<InstanceDoc> {
  return request(`/instances/${id}`);
}

export function uploadInstance(doc: InstanceDoc): Promise<InstanceSummary> {
  return request("/instances", { method: "POST", body: JSON.stringify(doc) });
}

export function startRun(
  instanceId: string,
  algorithm: string,
  deadline: number | null,
): Promise<RunHandle> {
  return request("/runs", {
    method: "POST",
    body: JSON.stringify({
      instance_id: instanceId,
      algorithm,
      deadline: deadline ?? undefined,
    }),
  });
}

export function getRun(id: string): Promise<RunHandle> {
  return request(`/runs/${id}`);
}

export function getArchive(id: string): Promise<ArchiveDoc> {
  return request(`/runs/${id}/archive`);
}

export function control(
  id: string,
  action: "pause" | "resume" | "stop",
): Promise<{ status: string }> {
  return request(`/runs/${id}/control`, {
    method: "POST",
    body: JSON.stringify({ action }),
  });
}

export function forkWhatIf(id: string, edit: WhatIfEdit): Promise<RunHandle> {
  return request(`/runs/${id}/whatif`, {
    method: "POST",
    body: JSON.stringify(edit),
  });
}
