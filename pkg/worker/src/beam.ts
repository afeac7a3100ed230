/**
 * Deterministic beam search. With sample=false (the default) ties break
 * on token id, so a fixed checkpoint always yields identical output.
 * repetition_penalty follows the usual rescaling of logits for tokens
 * already generated.
 */

import * as tf from "@tensorflow/tfjs";

import { Assembled } from "./assemble";
import { Seq2Seq } from "./model";
import { BOS, EOS, detokenize } from "./tokenizer";
import { GenerationParams } from "./types";

interface Beam {
  tokens: number[];
  score: number;
  finished: boolean;
}

export function generateOne(
  model: Seq2Seq,
  input: Assembled,
  params: GenerationParams,
): string {
  const enc = tf.tidy(() => {
    const ids = tf.tensor2d([input.ids.length ? input.ids : [0]], undefined, "int32") as tf.Tensor2D;
    const soft = tf.tensor2d([input.soft.length ? input.soft : [-1]], undefined, "int32") as tf.Tensor2D;
    return model.encode(ids, soft);
  });

  const k = params.beam_count;
  let beams: Beam[] = [{ tokens: [], score: 0, finished: false }];
  // every live beam shares row layout with `states`
  let states = tf.tile(enc.last, [1, 1]) as tf.Tensor2D;

  const maxSteps = Math.min(params.max_new_tokens, model.config.maxTargetLen);
  for (let step = 0; step < maxSteps; step++) {
    if (beams.every((b) => b.finished)) break;
    const lastTokens = beams.map((b) => (b.tokens.length ? b.tokens[b.tokens.length - 1] : BOS));
    const { state: nextStates, logits } = model.stepDecode(states, lastTokens, enc);
    states.dispose();

    const vocab = model.vocab.size;
    const candidates: { beam: number; token: number; score: number }[] = [];
    beams.forEach((beam, bi) => {
      if (beam.finished) {
        candidates.push({ beam: bi, token: EOS, score: beam.score });
        return;
      }
      const row = logits.subarray(bi * vocab, (bi + 1) * vocab);
      const scores = rescore(row, beam.tokens, params);
      for (let t = 0; t < vocab; t++) {
        candidates.push({ beam: bi, token: t, score: beam.score + scores[t] });
      }
    });
    candidates.sort((a, b) => b.score - a.score || a.token - b.token || a.beam - b.beam);
    const chosen = candidates.slice(0, k);

    const keepRows = chosen.map((c) => c.beam);
    const newStates = tf.tidy(
      () => tf.gather(nextStates, tf.tensor1d(keepRows, "int32")) as tf.Tensor2D,
    );
    nextStates.dispose();
    states = newStates;
    beams = chosen.map((c) => {
      const src = beams[c.beam];
      if (src.finished) return src;
      return {
        tokens: [...src.tokens, c.token],
        score: c.score,
        finished: c.token === EOS,
      };
    });
  }
  states.dispose();
  enc.last.dispose();
  enc.states.dispose();
  enc.mask.dispose();

  const best = beams.reduce((a, b) => (b.score > a.score ? b : a));
  return detokenize(model.vocab.decode(best.tokens));
}

function rescore(logits: Float32Array, history: number[], params: GenerationParams): Float32Array {
  const adjusted = Float32Array.from(logits);
  if (params.repetition_penalty !== 1.0) {
    for (const t of new Set(history)) {
      adjusted[t] = adjusted[t] > 0 ? adjusted[t] / params.repetition_penalty : adjusted[t] * params.repetition_penalty;
    }
  }
  if (params.temperature !== 1.0) {
    for (let i = 0; i < adjusted.length; i++) adjusted[i] /= params.temperature;
  }
  // log-softmax so beam scores are comparable across steps
  let max = -Infinity;
  for (const x of adjusted) max = Math.max(max, x);
  let sum = 0;
  for (const x of adjusted) sum += Math.exp(x - max);
  const logZ = max + Math.log(sum);
  for (let i = 0; i < adjusted.length; i++) adjusted[i] -= logZ;
  return adjusted;
}
