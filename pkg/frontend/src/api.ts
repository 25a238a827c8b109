/**
 * Thin fetch client for the session protocol. The fetch function is
 * injectable so tests can run against a stub or a live server alike.
 */

import type {
  ActionBody,
  ActionResponse,
  CreateSessionResponse,
  ProtocolError,
  StatePayload,
  SummaryPayload,
} from "./protocol.js";
import { assertStatePayload } from "./protocol.js";

export type ApiResult<T> =
  | { ok: true; data: T }
  | { ok: false; status: number; error: ProtocolError };

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<ApiResult<T>> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body !== undefined ? { "content-type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    if (!response.ok) {
      let error: ProtocolError;
      try {
        error = (await response.json()) as ProtocolError;
      } catch {
        error = { error: "http_error", detail: `status ${response.status}` };
      }
      return { ok: false, status: response.status, error };
    }
    return { ok: true, data: (await response.json()) as T };
  }

  async createSession(
    seed: number,
    config?: Record<string, unknown>,
  ): Promise<ApiResult<CreateSessionResponse>> {
    const body: Record<string, unknown> = { seed };
    if (config) body.config = config;
    const result = await this.request<CreateSessionResponse>("POST", "/v1/session", body);
    if (result.ok) assertStatePayload(result.data.state);
    return result;
  }

  async getState(sessionId: string): Promise<ApiResult<{ state: StatePayload }>> {
    const result = await this.request<{ state: StatePayload }>(
      "GET",
      `/v1/session/${sessionId}`,
    );
    if (result.ok) assertStatePayload(result.data.state);
    return result;
  }

  async postAction(
    sessionId: string,
    action: ActionBody,
  ): Promise<ApiResult<ActionResponse>> {
    const result = await this.request<ActionResponse>(
      "POST",
      `/v1/session/${sessionId}/action`,
      action,
    );
    if (result.ok) assertStatePayload(result.data.state);
    return result;
  }

  async getSummary(sessionId: string): Promise<ApiResult<SummaryPayload>> {
    return this.request<SummaryPayload>("GET", `/v1/session/${sessionId}/summary`);
  }

  async getLogText(sessionId: string): Promise<string> {
    const response = await this.fetchFn(`${this.baseUrl}/v1/session/${sessionId}/log`);
    if (!response.ok) {
      throw new Error(`log download failed: ${response.status}`);
    }
    return response.text();
  }
}
