/** Client-side mirror of the server's threshold-policy invariants, so the
 * editor can flag fields before a round trip. */

import { MAXINT } from "./fpir.js";
import type { ThresholdPolicy } from "./types.js";

export type PolicyFieldErrors = Partial<Record<keyof ThresholdPolicy, string>>;

export function validatePolicy(policy: ThresholdPolicy): PolicyFieldErrors {
  const errors: PolicyFieldErrors = {};
  if (!Number.isInteger(policy.finger_threshold)) {
    errors.finger_threshold = "must be an integer";
  } else if (policy.finger_threshold <= 0 || policy.finger_threshold >= MAXINT) {
    errors.finger_threshold = `must be in (0, ${MAXINT})`;
  }
  if (!(policy.face_threshold > 0 && policy.face_threshold < 1)) {
    errors.face_threshold = "must be in (0, 1)";
  }
  if (!(policy.gender_threshold >= 0.5 && policy.gender_threshold <= 1)) {
    errors.gender_threshold = "must be in [0.5, 1]";
  }
  if (!Number.isInteger(policy.age_tolerance) || policy.age_tolerance < 0) {
    errors.age_tolerance = "must be a non-negative integer";
  }
  if (!Number.isInteger(policy.face_memory_limit_mb) || policy.face_memory_limit_mb <= 0) {
    errors.face_memory_limit_mb = "must be a positive integer";
  }
  if (!(policy.confidence_gate >= 0 && policy.confidence_gate <= 100)) {
    errors.confidence_gate = "must be in [0, 100]";
  }
  return errors;
}

export function hasErrors(errors: PolicyFieldErrors): boolean {
  return Object.keys(errors).length > 0;
}
