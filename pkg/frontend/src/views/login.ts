import { esc } from "./html.js";

export function renderLogin(baseUrl: string, error: string | null = null): string {
  const banner = error ? `<p class="error-banner" role="alert">${esc(error)}</p>` : "";
  return `
  <form id="login-form" class="login-form">
    <h2>Administrator sign-in</h2>
    ${banner}
    <div class="field">
      <label for="login-base-url">BCA server URL</label>
      <input id="login-base-url" name="baseUrl" type="url" value="${esc(baseUrl)}" required/>
    </div>
    <div class="field">
      <label for="login-secret">Admin secret</label>
      <input id="login-secret" name="adminSecret" type="password" required/>
    </div>
    <button type="submit" data-action="login">Connect</button>
  </form>`;
}
