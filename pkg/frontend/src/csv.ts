/** Parser for the simulation harness's confidence time-series CSV
 * (transaction_index,fused,level,granted; user_id prepended on multi-user
 * runs), so recorded runs can be charted directly. */

export interface Fig8Row {
  userId: string | null;
  transactionIndex: number;
  fused: number;
  level: number;
  granted: boolean;
}

export function parseFig8Csv(text: string): Fig8Row[] {
  const lines = text.trim().split(/\r?\n/);
  if (lines.length === 0) {
    return [];
  }
  const header = lines[0].split(",");
  const hasUser = header[0] === "user_id";
  const expected = (hasUser ? "user_id," : "") + "transaction_index,fused,level,granted";
  if (lines[0] !== expected) {
    throw new Error(`unexpected CSV header: ${lines[0]}`);
  }
  return lines.slice(1).map((line, i) => {
    const parts = line.split(",");
    if (parts.length !== header.length) {
      throw new Error(`row ${i + 1} has ${parts.length} columns, expected ${header.length}`);
    }
    const offset = hasUser ? 1 : 0;
    return {
      userId: hasUser ? parts[0] : null,
      transactionIndex: Number(parts[offset]),
      fused: Number(parts[offset + 1]),
      level: Number(parts[offset + 2]),
      granted: parts[offset + 3] === "1",
    };
  });
}
