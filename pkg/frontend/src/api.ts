/** Thin fetch client for the annotation service endpoints. */

import { Report, SessionSnapshot } from "./types.js";

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const detail =
      typeof body.detail === "string" ? body.detail : `request failed (${response.status})`;
    throw new ServiceError(response.status, detail);
  }
  return body as T;
}

export interface CreatedSession {
  session_id: string;
  state: string;
  pending: { id: number; text: string }[];
  class_names: string[];
  progress: { labeled: number; budget: number };
}

export function createSession(config: unknown): Promise<CreatedSession> {
  return request("/sessions", { method: "POST", body: JSON.stringify(config) });
}

export function getSnapshot(sessionId: string): Promise<SessionSnapshot> {
  return request(`/sessions/${encodeURIComponent(sessionId)}`);
}

export function submitLabels(
  sessionId: string,
  labels: Record<string, string>,
): Promise<unknown> {
  return request(`/sessions/${encodeURIComponent(sessionId)}/labels`, {
    method: "POST",
    body: JSON.stringify(labels),
  });
}

export function getReport(sessionId: string): Promise<Report> {
  return request(`/sessions/${encodeURIComponent(sessionId)}/report`);
}
