import type { AdminUser } from "../types.js";
import { esc } from "./html.js";

function levelCell(level: number | null): string {
  return level === null ? "&mdash;" : `${level.toFixed(1)}%`;
}

export function renderUsersTable(users: AdminUser[]): string {
  if (users.length === 0) {
    return `<p class="empty-state">No enrolled users.</p>`;
  }
  const rows = users
    .map(
      (u) => `
    <tr data-user-id="${esc(u.user_id)}">
      <td>${esc(u.user_id)}</td>
      <td>${esc(u.name)}</td>
      <td>${esc(u.declared_gender)}, ${esc(u.declared_age)}</td>
      <td>${esc(u.privileges.join(", "))}</td>
      <td class="num">${levelCell(u.level)}</td>
      <td class="num">${esc(u.transactions)}</td>
      <td class="num">#${esc(u.ledger_block)}</td>
      <td><button data-action="delete-user" data-user-id="${esc(u.user_id)}">delete</button></td>
    </tr>`,
    )
    .join("");
  return `
  <table class="users-table">
    <thead>
      <tr>
        <th>user id</th><th>name</th><th>profile</th><th>privileges</th>
        <th>confidence</th><th>transactions</th><th>ledger tx</th><th></th>
      </tr>
    </thead>
    <tbody>${rows}
    </tbody>
  </table>`;
}
