import { describe, expect, it } from "vitest";

import { assembleInput, assemblePlain } from "../src/assemble";
import { MASK, PAD, buildVocab, detokenize, tokenize } from "../src/tokenizer";
import { CompiledPrompt, DEFAULT_MODEL } from "../src/types";

const VOCAB_TEXT = ["return a - b ; fixed program is x = 0 ;"];

function prompt(segments: CompiledPrompt["segments"]): CompiledPrompt {
  return { instance_id: "t1", segments, truncated: false };
}

describe("tokenizer", () => {
  it("splits identifiers and punctuation", () => {
    expect(tokenize("return a-b;")).toEqual(["return", "a", "-", "b", ";"]);
  });

  it("round-trips through detokenize up to whitespace collapse", () => {
    const text = "if (x > 0) { y = x; }";
    const once = tokenize(text);
    expect(tokenize(detokenize(once))).toEqual(once);
  });
});

describe("assembleInput", () => {
  const vocab = buildVocab(VOCAB_TEXT);

  it("soft slots become embedding markers before the mask sentinel", () => {
    const assembled = assembleInput(
      prompt([
        { t: "lit", text: "return a - b ;", src: "input" },
        { t: "soft", i: 0, init: "fixed" },
        { t: "soft", i: 1, init: "program" },
        { t: "soft", i: 2, init: "is" },
        { t: "mask" },
      ]),
      vocab,
      { ...DEFAULT_MODEL, style: "infilling" },
    );
    expect(assembled.soft.filter((s) => s >= 0)).toEqual([0, 1, 2]);
    const softIds = assembled.ids.slice(5, 8);
    expect(softIds).toEqual([PAD, PAD, PAD]);
    expect(assembled.ids[assembled.ids.length - 1]).toBe(MASK);
  });

  it("adjacent soft slots stay contiguous around an empty literal", () => {
    const assembled = assembleInput(
      prompt([
        { t: "lit", text: "x", src: "input" },
        { t: "soft", i: 0 },
        { t: "soft", i: 1 },
        { t: "mask" },
      ]),
      vocab,
      DEFAULT_MODEL,
    );
    expect(assembled.soft).toEqual([-1, 0, 1, -1]);
  });

  it("generative style ends the sequence at the mask", () => {
    const assembled = assembleInput(
      prompt([
        { t: "lit", text: "x = 0 ;", src: "input" },
        { t: "mask" },
        { t: "lit", text: "is fixed program" },
      ]),
      vocab,
      { ...DEFAULT_MODEL, style: "generative" },
    );
    expect(assembled.ids).toHaveLength(4); // tail after the mask is dropped
    expect(assembled.maskPosition).toBe(4);
  });

  it("infilling style keeps the mask position", () => {
    const assembled = assembleInput(
      prompt([
        { t: "lit", text: "x = 0 ;", src: "input" },
        { t: "mask" },
        { t: "lit", text: "is fixed program" },
      ]),
      vocab,
      { ...DEFAULT_MODEL, style: "infilling" },
    );
    expect(assembled.ids[4]).toBe(MASK);
    expect(assembled.maskPosition).toBe(4);
  });

  it("detokenized literals reproduce the compiled text modulo whitespace", () => {
    const text = "return a - b ;";
    const assembled = assembleInput(
      prompt([{ t: "lit", text, src: "input" }, { t: "mask" }]),
      vocab,
      DEFAULT_MODEL,
    );
    const literalIds = assembled.ids.slice(0, -1);
    expect(detokenize(vocab.decode(literalIds))).toBe(detokenize(tokenize(text)));
  });

  it("truncates inside the input region only and flags it", () => {
    const long = Array.from({ length: 300 }, (_, i) => `tok${i}`).join(" ");
    const config = { ...DEFAULT_MODEL, contextLen: 64 };
    const assembled = assembleInput(
      prompt([
        { t: "lit", text: "prefix words", src: undefined },
        { t: "lit", text: long, src: "input" },
        { t: "lit", text: "suffix words" },
        { t: "mask" },
      ]),
      buildVocab([long, "prefix words suffix words"]),
      config,
    );
    expect(assembled.truncated).toBe(true);
    expect(assembled.ids).toHaveLength(64);
    // prefix and suffix survive whole
    const decoded = detokenize(buildVocab([long, "prefix words suffix words"]).decode(assembled.ids));
    expect(decoded.startsWith("prefix words")).toBe(true);
    expect(decoded.endsWith("suffix words")).toBe(true);
  });

  it("rejects prompts that cannot fit even after input truncation", () => {
    const config = { ...DEFAULT_MODEL, contextLen: 4 };
    expect(() =>
      assembleInput(
        prompt([
          { t: "lit", text: "one two three four five" },
          { t: "lit", text: "x", src: "input" },
          { t: "mask" },
        ]),
        vocab,
        config,
      ),
    ).toThrow(/context/);
  });

  it("fine-tune inputs carry no prompt tokens", () => {
    const assembled = assemblePlain("return a - b ;", vocab, DEFAULT_MODEL);
    expect(assembled.soft.every((s) => s === -1)).toBe(true);
    expect(assembled.ids).toHaveLength(5);
  });
});
