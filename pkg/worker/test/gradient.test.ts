import * as tf from "@tensorflow/tfjs";
import { beforeAll, describe, expect, it } from "vitest";

import { Seq2Seq } from "../src/model";
import { softInitsOf, tune, vocabFor } from "../src/tune";
import { syntheticCorpus } from "../src/synthetic";
import { DEFAULT_MODEL, PromptTemplate, TuneParams } from "../src/types";

const TEMPLATE: PromptTemplate = {
  id: "sbp2_initialized",
  kind: "sbp_initialized",
  model_style: "generative",
  segments: [
    { t: "input" },
    { t: "lit", text: " " },
    { t: "soft", i: 0, init: "fixed" },
    { t: "soft", i: 1, init: "program" },
    { t: "soft", i: 2, init: "is" },
    { t: "lit", text: " " },
    { t: "mask" },
  ],
};

const RANDOM_TEMPLATE: PromptTemplate = {
  ...TEMPLATE,
  id: "sbp2_random",
  kind: "sbp_random",
  segments: TEMPLATE.segments.map((s) => (s.t === "soft" ? { t: "soft", i: s.i } : s)),
};

function params(overrides: Partial<TuneParams> = {}): TuneParams {
  return {
    optimizer: "adamw",
    epsilon: 1e-8,
    learning_rate: 5e-3,
    scheduler: "linear",
    epochs: 1,
    mode: "prompt_tune",
    ...overrides,
  };
}

beforeAll(async () => {
  await tf.setBackend("cpu");
});

describe("soft prompt table", () => {
  it("vocabulary-initialized rows equal the init-word embeddings bitwise", () => {
    const corpus = syntheticCorpus(8, 3);
    const vocab = vocabFor(corpus, [TEMPLATE]);
    const model = new Seq2Seq(DEFAULT_MODEL, vocab);
    model.initSoftTable(softInitsOf(TEMPLATE), DEFAULT_MODEL.seed);
    const table = model.softTable!.arraySync() as number[][];
    const embedding = model.vars.embedding.arraySync() as number[][];
    const words = ["fixed", "program", "is"];
    words.forEach((word, row) => {
      const id = vocab.tokenToId.get(word)!;
      expect(table[row]).toEqual(embedding[id]); // bitwise copy
    });
    model.dispose();
  });

  it("randomly initialized rows differ from every vocabulary embedding", () => {
    const corpus = syntheticCorpus(8, 3);
    const vocab = vocabFor(corpus, [RANDOM_TEMPLATE]);
    const model = new Seq2Seq(DEFAULT_MODEL, vocab);
    model.initSoftTable(softInitsOf(RANDOM_TEMPLATE), DEFAULT_MODEL.seed);
    const table = model.softTable!.arraySync() as number[][];
    const embedding = model.vars.embedding.arraySync() as number[][];
    for (const row of table) {
      for (const embRow of embedding) {
        expect(row).not.toEqual(embRow);
      }
    }
    model.dispose();
  });

  it("one prompt_tune step moves every soft row", () => {
    const corpus = syntheticCorpus(8, 3);
    let before: number[][] | null = null;
    let after: number[][] | null = null;
    const outcome = tune(
      corpus,
      params({ epochs: 1 }),
      { ...DEFAULT_MODEL, seed: 5 },
      [TEMPLATE],
      corpus.length, // one batch -> exactly one optimizer step per epoch
      () => undefined,
    );
    after = outcome.model.softTable!.arraySync() as number[][];
    // rebuild the untouched init table for comparison
    const vocab = vocabFor(corpus, [TEMPLATE]);
    const fresh = new Seq2Seq({ ...DEFAULT_MODEL, seed: 5 }, vocab);
    fresh.initSoftTable(softInitsOf(TEMPLATE), 5);
    before = fresh.softTable!.arraySync() as number[][];
    expect(outcome.stepsDone).toBe(1);
    for (let row = 0; row < before.length; row++) {
      const delta = before[row].map((x, i) => Math.abs(x - after![row][i]));
      expect(Math.max(...delta)).toBeGreaterThan(0); // nonzero update on every row
    }
    outcome.model.dispose();
    fresh.dispose();
  });

  it("fine_tune builds no soft table", () => {
    const corpus = syntheticCorpus(8, 3);
    const outcome = tune(corpus, params({ mode: "fine_tune", epochs: 1 }), DEFAULT_MODEL, []);
    expect(outcome.model.softTable).toBeNull();
    outcome.model.dispose();
  });

  it("training loss is finite and decreases over a short run", () => {
    const corpus = syntheticCorpus(16, 9);
    const outcome = tune(
      corpus,
      params({ epochs: 6, learning_rate: 1e-2, scheduler: "constant" }),
      { ...DEFAULT_MODEL, seed: 2 },
      [TEMPLATE],
      16,
    );
    expect(outcome.lossCurve).toHaveLength(6);
    for (const loss of outcome.lossCurve) expect(Number.isFinite(loss)).toBe(true);
    expect(outcome.lossCurve[5]).toBeLessThan(outcome.lossCurve[0]);
    outcome.model.dispose();
  });
});
