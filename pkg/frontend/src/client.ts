// Thin client for the cooperation service: JSON over HTTP plus the
// WebSocket event stream with resume-from-version reconnects.

import type { EventRecord } from "./types.js";

export interface SessionInfo {
  id: string;
  scenario: string;
  mode: string;
  clock: string;
  t: number;
  version: number;
}

export interface EventSubscription {
  close(): void;
}

export class SessionClient {
  constructor(
    private readonly baseUrl: string,
    private readonly wsUrl = baseUrl.replace(/^http/, "ws"),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      const body = await response.text();
      throw new ApiError(response.status, body);
    }
    return (await response.json()) as T;
  }

  createSession(body: Record<string, unknown>): Promise<SessionInfo> {
    return this.request("/session", { method: "POST", body: JSON.stringify(body) });
  }

  sessionInfo(id: string): Promise<SessionInfo> {
    return this.request(`/session/${id}`);
  }

  triggerAction(id: string, action: string, at?: number): Promise<{ version: number }> {
    return this.request(`/session/${id}/action`, {
      method: "POST",
      body: JSON.stringify(at === undefined ? { action } : { action, at }),
    });
  }

  replayStream(
    id: string,
    samples: { t: number; acc: [number, number, number] }[],
  ): Promise<{ version: number }> {
    return this.request(`/session/${id}/stream`, {
      method: "POST",
      body: JSON.stringify({ samples }),
    });
  }

  advance(id: string, to: number): Promise<{ version: number }> {
    return this.request(`/session/${id}/advance`, {
      method: "POST",
      body: JSON.stringify({ to }),
    });
  }

  async fetchTrace(id: string): Promise<string> {
    const response = await fetch(`${this.baseUrl}/session/${id}/trace`);
    if (!response.ok) throw new ApiError(response.status, await response.text());
    return response.text();
  }

  // Live event stream.  Reconnects resume from the last delivered version, so
  // a dropped connection neither loses nor duplicates events.
  connectEvents(
    id: string,
    onRecord: (record: EventRecord) => void,
    fromVersion = 0,
  ): EventSubscription {
    let lastVersion = fromVersion;
    let closed = false;
    let socket: WebSocket | null = null;

    const open = () => {
      if (closed) return;
      socket = new WebSocket(`${this.wsUrl}/session/${id}/events?from=${lastVersion}`);
      socket.onmessage = (message: MessageEvent) => {
        const record = JSON.parse(
          typeof message.data === "string" ? message.data : String(message.data),
        ) as EventRecord;
        if (record.v > lastVersion) {
          lastVersion = record.v;
          onRecord(record);
        }
      };
      socket.onclose = () => {
        if (!closed) {
          setTimeout(open, 250);
        }
      };
      socket.onerror = () => {
        socket?.close();
      };
    };
    open();
    return {
      close() {
        closed = true;
        socket?.close();
      },
    };
  }
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    body: string,
  ) {
    super(`HTTP ${status}: ${body}`);
  }
}

export function parseTrace(text: string): EventRecord[] {
  return text
    .split("\n")
    .map((line) => line.trim())
    .filter((line) => line.length > 0)
    .map((line) => JSON.parse(line) as EventRecord);
}
