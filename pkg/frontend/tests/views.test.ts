import { describe, expect, it } from "vitest";

import { yForLevel, DEFAULT_GEOMETRY } from "../src/chart.js";
import { expectedFpir, formatFpirPercent } from "../src/fpir.js";
import { renderAnalytics } from "../src/views/analytics.js";
import { renderLedger } from "../src/views/ledger.js";
import { renderLogin } from "../src/views/login.js";
import { renderPolicyForm } from "../src/views/policy.js";
import { renderUsersTable } from "../src/views/users.js";
import { parseChain } from "../src/chainParser.js";
import { ANALYTICS, CHAIN_HEAD, POLICY, USERS, chainBuffer } from "./fixtures.js";

describe("users view", () => {
  it("renders one row per API user with a delete control", () => {
    const html = renderUsersTable(USERS);
    expect(html.match(/data-action="delete-user"/g)).toHaveLength(USERS.length);
    expect(html).toContain("fx-u0");
    expect(html).toContain("fx-u1");
    expect(html).toContain("73.0%");
    expect(html).toContain("&mdash;"); // fresh user has no level yet
  });

  it("shows the empty state with no users", () => {
    expect(renderUsersTable([])).toContain("empty-state");
  });

  it("escapes markup in user fields", () => {
    const hostile = { ...USERS[0], name: '<img src=x onerror="x">' };
    const html = renderUsersTable([hostile]);
    expect(html).not.toContain("<img");
    expect(html).toContain("&lt;img");
  });
});

describe("policy view", () => {
  it("shows the implied FPIR for the configured finger threshold", () => {
    const html = renderPolicyForm(POLICY, {}, formatFpirPercent(POLICY.expected_fpir));
    expect(html).toContain("implied FPIR .001%");
    expect(html).toContain('value="21474"');
  });

  it("marks invalid fields with their message", () => {
    const html = renderPolicyForm(
      { ...POLICY, face_threshold: 1.5 },
      { face_threshold: "must be in (0, 1)" },
      ".001%",
    );
    expect(html).toContain('data-field="face_threshold"');
    expect(html).toContain("must be in (0, 1)");
  });
});

describe("analytics view", () => {
  it("charts a real history with the gate line", () => {
    const html = renderAnalytics(["fx-u0"], "fx-u0", ANALYTICS);
    expect(html).toContain('class="gate-line"');
    expect(html).toContain(`data-gate="${ANALYTICS.gate}"`);
    expect(html).toContain("5 transactions");
  });

  it("shows an empty state for a user without history", () => {
    const html = renderAnalytics(["fx-u1"], "fx-u1", { ...ANALYTICS, user_id: "fx-u1", level: null, history: [] });
    expect(html).toContain("empty-state");
    expect(html).not.toContain("gate-line");
  });

  it("prompts for a selection when no user is chosen", () => {
    expect(renderAnalytics(["fx-u0"], null, null)).toContain("Select a user");
  });
});

describe("ledger view", () => {
  it("renders the head and one row per block", () => {
    const blocks = parseChain(chainBuffer());
    const html = renderLedger(CHAIN_HEAD, blocks);
    expect(html).toContain(`head #${CHAIN_HEAD.index}`);
    expect(html.match(/data-block-index=/g)).toHaveLength(blocks.length);
    expect(html).toContain("fx-u0");
  });

  it("shows the empty-ledger state", () => {
    expect(renderLedger({ index: -1, hash: "" }, [])).toContain("empty-state");
  });
});

describe("login view", () => {
  it("renders the rejection banner", () => {
    const html = renderLogin("http://127.0.0.1:8400", "The server rejected that admin secret.");
    expect(html).toContain("error-banner");
    expect(html).toContain("rejected");
  });
});

describe("gate line placement sanity", () => {
  it("uses the same y mapping the geometry module exposes", () => {
    const html = renderAnalytics(["fx-u0"], "fx-u0", ANALYTICS);
    const y = yForLevel(ANALYTICS.gate, DEFAULT_GEOMETRY).toFixed(2);
    expect(html).toContain(`y1="${y}"`);
  });
});
