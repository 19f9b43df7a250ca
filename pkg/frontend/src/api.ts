/** Thin typed client over the BCA admin HTTP API. The dashboard holds no
 * authoritative state: every mutation goes through these calls. */

import type {
  AdminUser,
  AnalyticsResponse,
  ChainHead,
  PolicyResponse,
  ThresholdPolicy,
} from "./types.js";

export interface ApiConfig {
  baseUrl: string;
  adminSecret: string;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class AdminApi {
  constructor(
    private readonly config: ApiConfig,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string): string {
    return this.config.baseUrl.replace(/\/$/, "") + path;
  }

  private adminHeaders(extra: Record<string, string> = {}): Record<string, string> {
    return { Authorization: `Bearer ${this.config.adminSecret}`, ...extra };
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await this.fetchFn(this.url(path), init);
    } catch (err) {
      throw new ApiError(0, `network error: ${String(err)}`);
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, detail);
    }
    return response;
  }

  /** True when the configured secret is accepted; false on 401. */
  async verifySecret(): Promise<boolean> {
    try {
      await this.request("/admin/policy", { headers: this.adminHeaders() });
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 401) {
        return false;
      }
      throw err;
    }
  }

  async listUsers(): Promise<AdminUser[]> {
    const response = await this.request("/admin/users", { headers: this.adminHeaders() });
    return (await response.json()) as AdminUser[];
  }

  async deleteUser(userId: string): Promise<void> {
    await this.request(`/admin/users/${encodeURIComponent(userId)}`, {
      method: "DELETE",
      headers: this.adminHeaders(),
    });
  }

  async getPolicy(): Promise<PolicyResponse> {
    const response = await this.request("/admin/policy", { headers: this.adminHeaders() });
    return (await response.json()) as PolicyResponse;
  }

  async putPolicy(policy: ThresholdPolicy): Promise<PolicyResponse> {
    const response = await this.request("/admin/policy", {
      method: "PUT",
      headers: this.adminHeaders({ "Content-Type": "application/json" }),
      body: JSON.stringify(policy),
    });
    return (await response.json()) as PolicyResponse;
  }

  async analytics(userId: string): Promise<AnalyticsResponse> {
    const query = new URLSearchParams({ user: userId });
    const response = await this.request(`/admin/analytics?${query}`, {
      headers: this.adminHeaders(),
    });
    return (await response.json()) as AnalyticsResponse;
  }

  async chainHead(): Promise<ChainHead> {
    const response = await this.request("/chain/head");
    return (await response.json()) as ChainHead;
  }

  async chainBytes(): Promise<ArrayBuffer> {
    const response = await this.request("/chain");
    return response.arrayBuffer();
  }
}
