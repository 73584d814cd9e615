// Typed client for the housebot service. Every user action maps to exactly
// one request; the UI never mutates state locally.

import {
  CameraTile,
  MapPayload,
  NewPersonPayload,
  NewTaskPayload,
  PendingCard,
  PersonRow,
  ServerState,
  SmsRow,
  TaskRow,
} from "./types.js";

export class ApiError extends Error {
  constructor(public readonly status: number, message: string) {
    super(message);
  }
}

async function parseBody(response: Response): Promise<any> {
  try {
    return await response.json();
  } catch {
    return {};
  }
}

export class ApiClient {
  constructor(public readonly base: string) {}

  private async request(path: string, init?: RequestInit): Promise<any> {
    const response = await fetch(this.base + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    const body = await parseBody(response);
    if (!response.ok) {
      throw new ApiError(response.status, body.detail ?? response.statusText);
    }
    return body;
  }

  currentTasks(): Promise<{ rows: TaskRow[] }> {
    return this.request("/tasks/current");
  }

  addTask(payload: NewTaskPayload): Promise<{ task_id: number }> {
    return this.request("/tasks", { method: "POST", body: JSON.stringify(payload) });
  }

  sms(): Promise<{ log: SmsRow[]; pending: PendingCard[] }> {
    return this.request("/sms");
  }

  reply(messageId: number, option: number): Promise<{ resolved: boolean; option: number | null }> {
    return this.request(`/sms/${messageId}/reply`, {
      method: "POST",
      body: JSON.stringify({ text: String(option) }),
    });
  }

  prefs(): Promise<{ prefs: Record<string, boolean>; emergency_kinds: string[] }> {
    return this.request("/prefs");
  }

  setPref(kind: string, enabled: boolean): Promise<{ prefs: Record<string, boolean> }> {
    return this.request("/prefs", { method: "PUT", body: JSON.stringify({ [kind]: enabled }) });
  }

  people(): Promise<{ people: PersonRow[] }> {
    return this.request("/people");
  }

  addPerson(payload: NewPersonPayload): Promise<{ person_id: number }> {
    return this.request("/people", { method: "POST", body: JSON.stringify(payload) });
  }

  removePerson(personId: number): Promise<{ removed: number }> {
    return this.request(`/people/${personId}`, { method: "DELETE" });
  }

  map(): Promise<MapPayload> {
    return this.request("/map");
  }

  view(): Promise<{ now: string; cameras: CameraTile[] }> {
    return this.request("/view");
  }

  inject(kind: string, location: string, subject?: string): Promise<{ now: string }> {
    return this.request("/events", {
      method: "POST",
      body: JSON.stringify({ type: "inject", kind, location, subject }),
    });
  }

  advance(seconds: number): Promise<{ now: string }> {
    return this.request("/events", {
      method: "POST",
      body: JSON.stringify({ type: "advance", seconds }),
    });
  }

  state(): Promise<ServerState> {
    return this.request("/state");
  }

  wsUrl(): string {
    return this.base.replace(/^http/, "ws") + "/ws";
  }
}

/** Wrap an async action so repeat calls are ignored while one is in flight. */
export function singleFlight<A extends unknown[]>(
  action: (...args: A) => Promise<unknown>,
): (...args: A) => Promise<boolean> {
  let busy = false;
  return async (...args: A) => {
    if (busy) {
      return false;
    }
    busy = true;
    try {
      await action(...args);
      return true;
    } finally {
      busy = false;
    }
  };
}
