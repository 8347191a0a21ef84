import { describe, expect, it } from "vitest";

import { CRITERIA, criterionFor, mappedFeatureNames } from "../src/criteria.js";

/* The dense feature names the prediction service emits. The table in
   criteria.ts must stay exactly in sync with this contract. */
const SERVICE_DENSE_FEATURES = [
  "token_len_diff", "char_len_diff", "comma_diff", "symbol_diff", "ne_diff",
  "lev_char", "lev_token", "kl_s1_s2", "kl_s2_s1", "bleu",
  "spelling_s1", "spelling_s2", "spelling_diff",
  "grammar_s1", "grammar_s2", "grammar_diff",
  "specificity_s1", "specificity_s2", "specificity_diff",
  "sbar_diff", "vp_diff", "np_diff", "height_diff",
];

describe("criterion table", () => {
  it("covers every dense feature the service emits, and nothing else", () => {
    expect(mappedFeatureNames().sort()).toEqual(
      [...SERVICE_DENSE_FEATURES].sort(),
    );
  });

  it("maps length signals to length and evidence", () => {
    expect(criterionFor("token_len_diff")).toBe(CRITERIA.evidence);
    expect(criterionFor("char_len_diff")).toBe(CRITERIA.evidence);
  });

  it("maps specificity and entity signals to precision", () => {
    expect(criterionFor("specificity_diff")).toBe(CRITERIA.precision);
    expect(criterionFor("specificity_s2")).toBe(CRITERIA.precision);
    expect(criterionFor("ne_diff")).toBe(CRITERIA.precision);
  });

  it("maps rewording and structure signals to fluency", () => {
    for (const name of ["bleu", "lev_char", "lev_token", "kl_s1_s2",
                        "kl_s2_s1", "sbar_diff", "vp_diff", "np_diff",
                        "height_diff", "comma_diff"]) {
      expect(criterionFor(name), name).toBe(CRITERIA.fluency);
    }
  });

  it("maps error counts to grammar and spelling", () => {
    for (const name of ["spelling_s1", "spelling_s2", "spelling_diff",
                        "grammar_s1", "grammar_s2", "grammar_diff",
                        "symbol_diff"]) {
      expect(criterionFor(name), name).toBe(CRITERIA.correctness);
    }
  });

  it("treats word n-gram slots as content changes", () => {
    expect(criterionFor("OnlyS2:1:the")).toBe(CRITERIA.evidence);
    expect(criterionFor("OnlyS1:2:in the")).toBe(CRITERIA.evidence);
    expect(criterionFor("Common:1:world")).toBe(CRITERIA.evidence);
  });

  it("returns null for names outside the table", () => {
    expect(criterionFor("mystery_feature")).toBeNull();
    expect(criterionFor("")).toBeNull();
    expect(criterionFor("OnlyS3:1:x")).toBeNull();
  });

  it("every criterion has a label and advice for the UI", () => {
    for (const criterion of Object.values(CRITERIA)) {
      expect(criterion.label.length).toBeGreaterThan(0);
      expect(criterion.advice.length).toBeGreaterThan(0);
    }
  });
});
