/** Shapes of the BCA admin API responses consumed by the dashboard. */

export interface AdminUser {
  user_id: string;
  name: string;
  privileges: string[];
  declared_gender: string;
  declared_age: number;
  created_at: number;
  ledger_block: number;
  level: number | null;
  transactions: number;
}

export interface ThresholdPolicy {
  finger_threshold: number;
  face_threshold: number;
  gender_threshold: number;
  age_tolerance: number;
  face_memory_limit_mb: number;
  confidence_gate: number;
}

export interface PolicyResponse extends ThresholdPolicy {
  expected_fpir: number;
}

export interface HistoryRow {
  timestamp: number;
  fused: number;
  level: number;
  finger: boolean;
  face: boolean;
  gender: boolean;
  age: boolean;
}

export interface AnalyticsResponse {
  user_id: string;
  level: number | null;
  gate: number;
  history: HistoryRow[];
}

export interface ChainHead {
  index: number;
  hash: string;
}

export interface LedgerTransaction {
  userId: string;
  timestamp: number;
  keyHex: string;
  startDate: number;
  endDate: number;
}

export interface LedgerBlock {
  index: number;
  prevHashHex: string;
  nonce: number;
  hashHex: string;
  transactions: LedgerTransaction[];
}
