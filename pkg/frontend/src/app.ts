/** Dashboard shell: login, tab navigation, render loop, and polling.
 *
 * All state changes flow through the admin API; the app only caches what it
 * last fetched so a render is always a function of server responses.
 */

import { AdminApi, ApiError } from "./api.js";
import { parseChain } from "./chainParser.js";
import { expectedFpir, formatFpirPercent } from "./fpir.js";
import type { AdminUser, AnalyticsResponse, ChainHead, PolicyResponse, ThresholdPolicy } from "./types.js";
import { hasErrors, validatePolicy } from "./validation.js";
import { renderAnalytics } from "./views/analytics.js";
import { esc } from "./views/html.js";
import { renderLedger } from "./views/ledger.js";
import { renderLogin } from "./views/login.js";
import { renderPolicyForm } from "./views/policy.js";
import { renderUsersTable } from "./views/users.js";

type Tab = "users" | "analytics" | "policy" | "ledger";

const TABS: Tab[] = ["users", "analytics", "policy", "ledger"];

export class DashboardApp {
  private api: AdminApi | null = null;
  private tab: Tab = "users";
  private users: AdminUser[] = [];
  private policy: PolicyResponse | null = null;
  private analyticsUser: string | null = null;
  private analyticsData: AnalyticsResponse | null = null;
  private chainHead: ChainHead = { index: -1, hash: "" };
  private chainBlocks: ReturnType<typeof parseChain> = [];
  private error: string | null = null;
  private savedAt: string | null = null;
  private pollTimer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly root: HTMLElement,
    private defaultBaseUrl = "http://127.0.0.1:8400",
    private readonly pollMs = 5000,
  ) {}

  start(): void {
    this.root.addEventListener("click", (ev) => void this.onClick(ev));
    this.root.addEventListener("submit", (ev) => void this.onSubmit(ev));
    this.root.addEventListener("change", (ev) => void this.onChange(ev));
    this.root.addEventListener("input", (ev) => this.onInput(ev));
    this.renderLoginView();
  }

  // -- rendering ---------------------------------------------------------------

  private renderLoginView(message: string | null = null): void {
    this.stopPolling();
    this.root.innerHTML = renderLogin(this.defaultBaseUrl, message);
  }

  private renderShell(): void {
    const nav = TABS.map(
      (t) =>
        `<button data-action="tab" data-tab="${t}" class="${t === this.tab ? "active" : ""}">${t}</button>`,
    ).join("");
    const banner = this.error
      ? `<p class="error-banner" role="alert">${esc(this.error)}
           <button data-action="dismiss-error">dismiss</button></p>`
      : "";
    this.root.innerHTML = `
      <nav class="tabs">${nav}
        <button data-action="logout" class="logout">sign out</button>
      </nav>
      ${banner}
      <main id="tab-content">${this.renderTab()}</main>`;
  }

  private renderTab(): string {
    switch (this.tab) {
      case "users":
        return renderUsersTable(this.users);
      case "analytics":
        return renderAnalytics(
          this.users.map((u) => u.user_id),
          this.analyticsUser,
          this.analyticsData,
        );
      case "policy": {
        if (!this.policy) {
          return `<p class="empty-state">Loading policy…</p>`;
        }
        const fpir = formatFpirPercent(this.policy.expected_fpir);
        return renderPolicyForm(this.policy, {}, fpir, this.savedAt);
      }
      case "ledger":
        return renderLedger(this.chainHead, this.chainBlocks);
    }
  }

  // -- data ----------------------------------------------------------------------

  private async refresh(): Promise<void> {
    if (!this.api) {
      return;
    }
    try {
      this.users = await this.api.listUsers();
      if (this.tab === "policy" || !this.policy) {
        this.policy = await this.api.getPolicy();
      }
      if (this.tab === "analytics" && this.analyticsUser) {
        this.analyticsData = await this.api.analytics(this.analyticsUser);
      }
      if (this.tab === "ledger") {
        this.chainHead = await this.api.chainHead();
        this.chainBlocks = parseChain(await this.api.chainBytes());
      }
      this.error = null;
    } catch (err) {
      this.error = err instanceof ApiError ? `API error: ${err.message}` : String(err);
    }
    this.renderShell();
  }

  private startPolling(): void {
    this.stopPolling();
    this.pollTimer = setInterval(() => void this.refresh(), this.pollMs);
  }

  private stopPolling(): void {
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }

  // -- events -----------------------------------------------------------------------

  private async onSubmit(ev: Event): Promise<void> {
    const form = ev.target as HTMLFormElement;
    if (form.id === "login-form") {
      ev.preventDefault();
      const data = new FormData(form);
      const baseUrl = String(data.get("baseUrl") ?? this.defaultBaseUrl);
      const secret = String(data.get("adminSecret") ?? "");
      this.defaultBaseUrl = baseUrl;
      const api = new AdminApi({ baseUrl, adminSecret: secret });
      try {
        if (!(await api.verifySecret())) {
          this.renderLoginView("The server rejected that admin secret.");
          return;
        }
      } catch (err) {
        this.renderLoginView(`Could not reach the server: ${String(err)}`);
        return;
      }
      this.api = api;
      await this.refresh();
      this.startPolling();
      return;
    }
    if (form.id === "policy-form") {
      ev.preventDefault();
      await this.savePolicy(form);
    }
  }

  private async savePolicy(form: HTMLFormElement): Promise<void> {
    if (!this.api || !this.policy) {
      return;
    }
    const data = new FormData(form);
    const candidate: ThresholdPolicy = {
      finger_threshold: Number(data.get("finger_threshold")),
      face_threshold: Number(data.get("face_threshold")),
      gender_threshold: Number(data.get("gender_threshold")),
      age_tolerance: Number(data.get("age_tolerance")),
      face_memory_limit_mb: Number(data.get("face_memory_limit_mb")),
      confidence_gate: Number(data.get("confidence_gate")),
    };
    const errors = validatePolicy(candidate);
    if (hasErrors(errors)) {
      const content = this.root.querySelector("#tab-content");
      if (content) {
        content.innerHTML = renderPolicyForm(
          candidate,
          errors,
          formatFpirPercent(expectedFpir(Math.max(1, Math.min(candidate.finger_threshold, 2147483646)))),
          null,
        );
      }
      return;
    }
    try {
      this.policy = await this.api.putPolicy(candidate);
      this.savedAt = new Date().toLocaleTimeString();
      this.error = null;
    } catch (err) {
      this.error = err instanceof ApiError ? `API error: ${err.message}` : String(err);
    }
    this.renderShell();
  }

  private async onClick(ev: Event): Promise<void> {
    const target = (ev.target as HTMLElement).closest("[data-action]");
    if (!target) {
      return;
    }
    const action = target.getAttribute("data-action");
    if (action === "tab") {
      this.tab = (target.getAttribute("data-tab") as Tab) ?? "users";
      await this.refresh();
    } else if (action === "delete-user") {
      const userId = target.getAttribute("data-user-id");
      if (userId && this.api && window.confirm(`Delete user ${userId}?`)) {
        try {
          await this.api.deleteUser(userId);
          if (this.analyticsUser === userId) {
            this.analyticsUser = null;
            this.analyticsData = null;
          }
        } catch (err) {
          this.error = err instanceof ApiError ? `API error: ${err.message}` : String(err);
        }
        await this.refresh();
      }
    } else if (action === "dismiss-error") {
      this.error = null;
      this.renderShell();
    } else if (action === "logout") {
      this.api = null;
      this.renderLoginView();
    }
  }

  private async onChange(ev: Event): Promise<void> {
    const target = ev.target as HTMLElement;
    if (target.getAttribute("data-action") === "select-analytics-user") {
      const value = (target as HTMLSelectElement).value;
      this.analyticsUser = value || null;
      this.analyticsData = null;
      await this.refresh();
    }
  }

  /** Live FPIR feedback while the finger threshold field is edited. */
  private onInput(ev: Event): void {
    const target = ev.target as HTMLInputElement;
    if (target.name !== "finger_threshold") {
      return;
    }
    const output = this.root.querySelector("#fpir-display");
    if (!output) {
      return;
    }
    const value = Number(target.value);
    if (Number.isInteger(value) && value > 0 && value < 2147483647) {
      output.textContent = `implied FPIR ${formatFpirPercent(expectedFpir(value))}`;
    } else {
      output.textContent = "implied FPIR —";
    }
  }
}
