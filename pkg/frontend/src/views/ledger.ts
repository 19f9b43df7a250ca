import type { ChainHead, LedgerBlock } from "../types.js";
import { esc } from "./html.js";

function shortHash(hex: string): string {
  return hex.length > 16 ? `${hex.slice(0, 8)}…${hex.slice(-8)}` : hex;
}

function fmtDate(seconds: number): string {
  return new Date(seconds * 1000).toISOString().slice(0, 10);
}

export function renderLedger(head: ChainHead, blocks: LedgerBlock[]): string {
  const headline =
    head.index < 0
      ? `<p class="empty-state">The ledger is empty; enroll a user to mine the genesis block.</p>`
      : `<p class="chain-head">head #${esc(head.index)} <code>${esc(shortHash(head.hash))}</code></p>`;
  const rows = blocks
    .map((b) => {
      const txs = b.transactions
        .map(
          (t) =>
            `<li><code>${esc(t.userId)}</code> key <code>${esc(shortHash(t.keyHex))}</code> ` +
            `valid ${esc(fmtDate(t.startDate))} to ${esc(fmtDate(t.endDate))}</li>`,
        )
        .join("");
      return `
    <tr data-block-index="${b.index}">
      <td class="num">#${b.index}</td>
      <td><code>${esc(shortHash(b.hashHex))}</code></td>
      <td><code>${esc(shortHash(b.prevHashHex))}</code></td>
      <td class="num">${b.nonce}</td>
      <td><ul class="tx-list">${txs}</ul></td>
    </tr>`;
    })
    .join("");
  const table =
    blocks.length === 0
      ? ""
      : `
  <table class="ledger-table">
    <thead><tr><th>block</th><th>hash</th><th>previous</th><th>nonce</th><th>transactions</th></tr></thead>
    <tbody>${rows}
    </tbody>
  </table>`;
  return headline + table;
}
