/** Parser for the ledger's canonical byte format (GET /chain).
 *
 * Layout per block, all integers little-endian:
 *   index u64 | prev_hash 32 | tx_count u32 | txs | nonce u64 | hash 32
 * and per transaction:
 *   user_id_len u32 | user_id utf8 | timestamp i64 | key 32 | start i64 | end i64
 */

import type { LedgerBlock, LedgerTransaction } from "./types.js";

const HASH_LEN = 32;
const KEY_LEN = 32;

function toHex(bytes: Uint8Array): string {
  return Array.from(bytes, (b) => b.toString(16).padStart(2, "0")).join("");
}

class Reader {
  private offset = 0;
  private readonly view: DataView;
  private readonly bytes: Uint8Array;

  constructor(buffer: ArrayBuffer) {
    this.view = new DataView(buffer);
    this.bytes = new Uint8Array(buffer);
  }

  get done(): boolean {
    return this.offset >= this.bytes.length;
  }

  u32(): number {
    const value = this.view.getUint32(this.offset, true);
    this.offset += 4;
    return value;
  }

  u64(): number {
    const value = this.view.getBigUint64(this.offset, true);
    this.offset += 8;
    if (value > BigInt(Number.MAX_SAFE_INTEGER)) {
      throw new Error(`u64 ${value} exceeds safe integer range`);
    }
    return Number(value);
  }

  i64(): number {
    const value = this.view.getBigInt64(this.offset, true);
    this.offset += 8;
    return Number(value);
  }

  raw(length: number): Uint8Array {
    if (this.offset + length > this.bytes.length) {
      throw new Error("truncated chain bytes");
    }
    const out = this.bytes.slice(this.offset, this.offset + length);
    this.offset += length;
    return out;
  }

  utf8(length: number): string {
    return new TextDecoder("utf-8", { fatal: true }).decode(this.raw(length));
  }
}

function readTransaction(reader: Reader): LedgerTransaction {
  const userId = reader.utf8(reader.u32());
  const timestamp = reader.i64();
  const keyHex = toHex(reader.raw(KEY_LEN));
  const startDate = reader.i64();
  const endDate = reader.i64();
  return { userId, timestamp, keyHex, startDate, endDate };
}

export function parseChain(buffer: ArrayBuffer): LedgerBlock[] {
  const reader = new Reader(buffer);
  const blocks: LedgerBlock[] = [];
  while (!reader.done) {
    const index = reader.u64();
    const prevHashHex = toHex(reader.raw(HASH_LEN));
    const txCount = reader.u32();
    if (txCount === 0) {
      throw new Error(`block ${index} carries no transactions`);
    }
    const transactions: LedgerTransaction[] = [];
    for (let i = 0; i < txCount; i++) {
      transactions.push(readTransaction(reader));
    }
    const nonce = reader.u64();
    const hashHex = toHex(reader.raw(HASH_LEN));
    blocks.push({ index, prevHashHex, nonce, hashHex, transactions });
  }
  return blocks;
}
