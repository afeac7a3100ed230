/**
 * Tuning loop: fine_tune updates model weights on plain buggy->fixed
 * pairs; prompt_tune additionally routes every instance through the
 * prompt template and trains the soft-prompt table jointly with the
 * model weights.
 */

import * as tf from "@tensorflow/tfjs";

import { Assembled, assembleInput, assemblePlain } from "./assemble";
import { AdamW, Seq2Seq, maskedLoss } from "./model";
import { BOS, EOS, PAD, Vocab, buildVocab, tokenize } from "./tokenizer";
import {
  CompiledPrompt,
  ModelConfig,
  PromptTemplate,
  RepairInstance,
  TuneParams,
} from "./types";

export interface TuneOutcome {
  model: Seq2Seq;
  lossCurve: number[];
  stepsDone: number;
}

export class TuneError extends Error {}

export function compileTemplate(template: PromptTemplate, instance: RepairInstance): CompiledPrompt {
  const segments: CompiledPrompt["segments"] = [];
  for (const seg of template.segments) {
    if (seg.t === "lit") segments.push({ t: "lit", text: seg.text });
    else if (seg.t === "input") segments.push({ t: "lit", text: instance.buggy, src: "input" });
    else if (seg.t === "knowledge") {
      const text = instance.knowledge?.[seg.kind];
      if (text === undefined) {
        throw new TuneError(`instance ${instance.id} lacks ${seg.kind} knowledge`);
      }
      segments.push({ t: "lit", text, src: "knowledge", kind: seg.kind });
    } else if (seg.t === "soft") segments.push({ t: "soft", i: seg.i, init: seg.init });
    else segments.push({ t: "mask" });
  }
  return { instance_id: instance.id, segments, truncated: false };
}

export function vocabFor(
  instances: RepairInstance[],
  templates: PromptTemplate[],
): Vocab {
  const texts: string[] = [];
  for (const inst of instances) {
    texts.push(inst.buggy, inst.fixed);
    for (const v of Object.values(inst.knowledge ?? {})) texts.push(v);
  }
  for (const t of templates) {
    for (const seg of t.segments) {
      if (seg.t === "lit") texts.push(seg.text);
      if (seg.t === "soft" && seg.init) texts.push(seg.init);
    }
  }
  return buildVocab(texts);
}

export function softInitsOf(template: PromptTemplate | undefined): (string | null)[] {
  if (template === undefined) return [];
  const inits: (string | null)[] = [];
  for (const seg of template.segments) {
    if (seg.t === "soft") inits[seg.i] = seg.init ?? null;
  }
  return Array.from(inits, (v) => v ?? null);
}

interface Batch {
  ids: tf.Tensor2D;
  soft: tf.Tensor2D;
  decIn: tf.Tensor2D;
  target: tf.Tensor2D;
}

function padTo(rows: number[][], width: number, fill: number): number[][] {
  return rows.map((row) => {
    const out = row.slice(0, width);
    while (out.length < width) out.push(fill);
    return out;
  });
}

function makeBatch(inputs: Assembled[], targets: number[][], maxTarget: number): Batch {
  const width = Math.max(...inputs.map((a) => a.ids.length), 1);
  const tWidth = Math.min(Math.max(...targets.map((t) => t.length), 1) + 1, maxTarget + 1);
  const ids = padTo(inputs.map((a) => a.ids), width, PAD);
  const soft = padTo(inputs.map((a) => a.soft), width, -1);
  const decIn = padTo(targets.map((t) => [BOS, ...t]), tWidth, PAD);
  const target = padTo(targets.map((t) => [...t, EOS]), tWidth, PAD);
  return {
    ids: tf.tensor2d(ids, undefined, "int32") as tf.Tensor2D,
    soft: tf.tensor2d(soft, undefined, "int32") as tf.Tensor2D,
    decIn: tf.tensor2d(decIn, undefined, "int32") as tf.Tensor2D,
    target: tf.tensor2d(target, undefined, "int32") as tf.Tensor2D,
  };
}

export function tune(
  instances: RepairInstance[],
  params: TuneParams,
  config: ModelConfig,
  templates: PromptTemplate[] = [],
  batchSize = 8,
  onStep?: (step: number) => void,
): TuneOutcome {
  if (instances.length === 0) throw new TuneError("empty training manifest");
  if (params.mode === "prompt_tune" && templates.length === 0) {
    throw new TuneError("prompt_tune needs at least one template");
  }
  const template = params.mode === "prompt_tune" ? templates[0] : undefined;
  const vocab = vocabFor(instances, templates);
  const model = new Seq2Seq(config, vocab);
  if (params.mode === "prompt_tune") {
    model.initSoftTable(softInitsOf(template), config.seed);
  }

  const inputs = instances.map((inst) =>
    template !== undefined
      ? assembleInput(compileTemplate(template, inst), vocab, config)
      : assemblePlain(inst.buggy, vocab, config),
  );
  const targets = instances.map((inst) => vocab.encode(tokenize(inst.fixed)));

  const batches: Batch[] = [];
  for (let i = 0; i < inputs.length; i += batchSize) {
    batches.push(makeBatch(inputs.slice(i, i + batchSize), targets.slice(i, i + batchSize), config.maxTargetLen));
  }

  const totalSteps = params.epochs * batches.length;
  const optimizer = new AdamW(
    params.learning_rate,
    totalSteps,
    params.epsilon,
    0.9,
    0.999,
    0.0,
    params.scheduler === "linear" ? "linear" : "constant",
  );
  const variables = model.trainables(params.mode);

  const lossCurve: number[] = [];
  let steps = 0;
  try {
    for (let epoch = 0; epoch < params.epochs; epoch++) {
      let epochLoss = 0;
      for (const batch of batches) {
        const loss = optimizer.step(() => {
          const enc = model.encode(batch.ids, batch.soft);
          const logits = model.decodeTrain(enc, batch.decIn);
          return maskedLoss(logits, batch.target);
        }, variables);
        if (!Number.isFinite(loss)) {
          throw new TuneError(`training diverged at step ${steps} (loss ${loss})`);
        }
        epochLoss += loss;
        steps += 1;
        onStep?.(steps);
      }
      lossCurve.push(epochLoss / batches.length);
    }
  } finally {
    optimizer.dispose();
    batches.forEach((b) => {
      b.ids.dispose();
      b.soft.dispose();
      b.decIn.dispose();
      b.target.dispose();
    });
  }
  return { model, lossCurve, stepsDone: steps };
}
