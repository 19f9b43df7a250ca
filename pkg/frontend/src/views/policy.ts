import type { ThresholdPolicy } from "../types.js";
import type { PolicyFieldErrors } from "../validation.js";
import { esc } from "./html.js";

interface FieldSpec {
  name: keyof ThresholdPolicy;
  label: string;
  step: string;
  hint: string;
}

const FIELDS: FieldSpec[] = [
  { name: "finger_threshold", label: "Finger threshold", step: "1", hint: "score scale [0, 2^31-1); match means score < T" },
  { name: "face_threshold", label: "Face threshold", step: "0.0001", hint: "similarity in (0, 1); match means similarity ≥ T" },
  { name: "gender_threshold", label: "Gender threshold", step: "0.01", hint: "probability mass required on the declared gender" },
  { name: "age_tolerance", label: "Age tolerance", step: "1", hint: "max |estimate - declared| in years" },
  { name: "face_memory_limit_mb", label: "Face memory limit (MB)", step: "1", hint: "informational; selects the documented FAR column" },
  { name: "confidence_gate", label: "Confidence gate (%)", step: "0.1", hint: "inclusive: levels at the gate pass" },
];

export function renderPolicyForm(
  policy: ThresholdPolicy,
  errors: PolicyFieldErrors,
  fpirDisplay: string,
  savedAt: string | null = null,
): string {
  const fields = FIELDS.map((f) => {
    const error = errors[f.name];
    const fpir =
      f.name === "finger_threshold"
        ? `<output id="fpir-display" for="policy-${f.name}">implied FPIR ${esc(fpirDisplay)}</output>`
        : "";
    return `
    <div class="field ${error ? "invalid" : ""}">
      <label for="policy-${f.name}">${esc(f.label)}</label>
      <input id="policy-${f.name}" name="${f.name}" type="number" step="${f.step}"
             value="${esc(policy[f.name])}" title="${esc(f.hint)}"/>
      ${fpir}
      ${error ? `<span class="field-error" data-field="${f.name}">${esc(error)}</span>` : ""}
    </div>`;
  }).join("");
  const saved = savedAt ? `<span class="saved-note">saved ${esc(savedAt)}</span>` : "";
  return `
  <form id="policy-form" class="policy-form">
    ${fields}
    <div class="actions">
      <button type="submit" data-action="save-policy">Save policy</button>
      ${saved}
    </div>
  </form>`;
}
