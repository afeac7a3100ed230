/**
 * Compiled prompt -> model input assembly.
 *
 * Literal segments are tokenized with the worker tokenizer; soft slots
 * become per-position markers resolved against the soft table at the
 * embedding layer; the mask maps to the <mask> token for infilling
 * models and to the end of the sequence for generative models (tokens
 * after the mask cannot influence a left-to-right model, so assembly
 * stops there). Over-length inputs are truncated inside the input-slot
 * region only and flagged.
 */

import { AssembledInput } from "./model";
import { MASK, PAD, Vocab, tokenize } from "./tokenizer";
import { CompiledPrompt, ModelConfig } from "./types";

export class AssemblyError extends Error {}

export interface Assembled extends AssembledInput {
  truncated: boolean;
  maskPosition: number; // index in ids, or ids.length for generative tail
}

export function assembleInput(
  prompt: CompiledPrompt,
  vocab: Vocab,
  config: ModelConfig,
): Assembled {
  interface Piece {
    ids: number[];
    soft: number[];
    isInput: boolean;
    isMask: boolean;
  }
  const pieces: Piece[] = [];
  for (const seg of prompt.segments) {
    if (seg.t === "lit") {
      const ids = vocab.encode(tokenize(seg.text));
      pieces.push({
        ids,
        soft: ids.map(() => -1),
        isInput: seg.src === "input",
        isMask: false,
      });
    } else if (seg.t === "soft") {
      pieces.push({ ids: [PAD], soft: [seg.i], isInput: false, isMask: false });
    } else {
      pieces.push({ ids: [MASK], soft: [-1], isInput: false, isMask: true });
    }
  }

  if (config.style === "generative") {
    const maskAt = pieces.findIndex((p) => p.isMask);
    if (maskAt >= 0) pieces.splice(maskAt); // drop the mask and whatever follows
  }

  let total = pieces.reduce((n, p) => n + p.ids.length, 0);
  let truncated = Boolean(prompt.truncated);
  if (total > config.contextLen) {
    const overflow = total - config.contextLen;
    const input = pieces.find((p) => p.isInput);
    if (input === undefined || input.ids.length <= overflow) {
      throw new AssemblyError(
        `prompt for ${prompt.instance_id} exceeds the ${config.contextLen}-token context ` +
          "even after input truncation",
      );
    }
    input.ids = input.ids.slice(0, input.ids.length - overflow);
    input.soft = input.soft.slice(0, input.ids.length);
    truncated = true;
    total = config.contextLen;
  }

  const ids: number[] = [];
  const soft: number[] = [];
  let maskPosition = -1;
  for (const piece of pieces) {
    if (piece.isMask) maskPosition = ids.length;
    ids.push(...piece.ids);
    soft.push(...piece.soft);
  }
  if (maskPosition < 0) maskPosition = ids.length; // generative tail
  return { ids, soft, truncated, maskPosition };
}

/** Fine-tune mode input: the plain buggy code with special tokens only. */
export function assemblePlain(buggy: string, vocab: Vocab, config: ModelConfig): Assembled {
  let ids = vocab.encode(tokenize(buggy));
  let truncated = false;
  if (ids.length > config.contextLen) {
    ids = ids.slice(0, config.contextLen);
    truncated = true;
  }
  return { ids, soft: ids.map(() => -1), truncated, maskPosition: ids.length };
}
