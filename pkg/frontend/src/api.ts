// Thin typed client for the session server.

import { CommandRequest, StateSnapshot, TerraformRequest } from "./types.js";

export interface ApiError {
  status: number;
  code: string;
  message: string;
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "error";
  let message = response.statusText;
  try {
    const body = await response.json();
    code = body?.error?.code ?? code;
    message = body?.error?.message ?? message;
  } catch {
    // non-JSON error body; keep the status text
  }
  return { status: response.status, code, message };
}

export class SessionApi {
  constructor(
    readonly baseUrl: string,
    readonly sessionId: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  static async create(
    baseUrl: string,
    options: { seed?: number; realtime?: boolean } = {},
    fetchFn: typeof fetch = fetch,
  ): Promise<SessionApi> {
    const response = await fetchFn(`${baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ seed: options.seed ?? 0, realtime: options.realtime ?? true }),
    });
    if (!response.ok) throw await parseError(response);
    const body = await response.json();
    return new SessionApi(baseUrl, body.session_id, fetchFn);
  }

  async state(): Promise<StateSnapshot> {
    const response = await this.fetchFn(`${this.baseUrl}/sessions/${this.sessionId}/state`);
    if (!response.ok) throw await parseError(response);
    return response.json();
  }

  async terraform(request: TerraformRequest): Promise<Response> {
    return this.fetchFn(`${this.baseUrl}/sessions/${this.sessionId}/terraform`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
  }

  async command(request: CommandRequest): Promise<Response> {
    return this.fetchFn(`${this.baseUrl}/sessions/${this.sessionId}/command`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
  }
}
