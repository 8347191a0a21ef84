/**
 * Static mapping from model feature names to the writing criteria the
 * feedback is phrased in, so a verdict reads as revision advice rather
 * than raw feature names.
 */

export type CriterionId = "evidence" | "precision" | "fluency" | "correctness";

export interface Criterion {
  id: CriterionId;
  label: string;
  advice: string;
}

export const CRITERIA: Record<CriterionId, Criterion> = {
  evidence: {
    id: "evidence",
    label: "Length and evidence",
    advice:
      "Adding information, justification, or wording that strengthens the " +
      "claim tends to read as an improvement.",
  },
  precision: {
    id: "precision",
    label: "Precision and specificity",
    advice: "More precise, specific statements tend to read as improvements.",
  },
  fluency: {
    id: "fluency",
    label: "Fluency and structure",
    advice:
      "Rewording and restructuring affect how easy the sentence is to " +
      "follow; cutting unnecessary words helps.",
  },
  correctness: {
    id: "correctness",
    label: "Grammar and spelling",
    advice: "Fixing grammar and spelling mistakes reads as an improvement.",
  },
};

/** Exact dense feature names emitted by the service, one criterion each. */
const DENSE_FEATURE_CRITERIA: Record<string, CriterionId> = {
  token_len_diff: "evidence",
  char_len_diff: "evidence",
  comma_diff: "fluency",
  symbol_diff: "correctness",
  ne_diff: "precision",
  lev_char: "fluency",
  lev_token: "fluency",
  kl_s1_s2: "fluency",
  kl_s2_s1: "fluency",
  bleu: "fluency",
  spelling_s1: "correctness",
  spelling_s2: "correctness",
  spelling_diff: "correctness",
  grammar_s1: "correctness",
  grammar_s2: "correctness",
  grammar_diff: "correctness",
  specificity_s1: "precision",
  specificity_s2: "precision",
  specificity_diff: "precision",
  sbar_diff: "fluency",
  vp_diff: "fluency",
  np_diff: "fluency",
  height_diff: "fluency",
};

/* Word n-gram features are named "<slot>:<n>:<gram>" where the slot says
   whether the wording is shared or unique to one side. */
const SLOT_PREFIX = /^(Common|OnlyS1|OnlyS2):/;

/**
 * The criterion a feature speaks to, or null for names outside the
 * static table (shown as a general signal).
 */
export function criterionFor(featureName: string): Criterion | null {
  const dense = DENSE_FEATURE_CRITERIA[featureName];
  if (dense !== undefined) {
    return CRITERIA[dense];
  }
  if (SLOT_PREFIX.test(featureName)) {
    // Added or removed wording is a content change.
    return CRITERIA.evidence;
  }
  return null;
}

/** Feature names the static table covers (for contract tests). */
export function mappedFeatureNames(): string[] {
  return Object.keys(DENSE_FEATURE_CRITERIA);
}
