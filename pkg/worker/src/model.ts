/**
 * Tiny GRU encoder-decoder with a trainable soft-prompt table.
 *
 * Prompt positions marked as soft slots are fed the corresponding rows
 * of the soft table at the embedding layer instead of vocabulary
 * embeddings; during prompt tuning the table receives gradients along
 * with every model weight. Everything is seeded, so tuning and
 * generation are deterministic on the CPU backend.
 */

import * as tf from "@tensorflow/tfjs";
import { createHash } from "node:crypto";

import { MASK, PAD, Vocab } from "./tokenizer";
import { ModelConfig } from "./types";

export interface AssembledInput {
  ids: number[]; // vocabulary ids; PAD at soft positions
  soft: number[]; // soft-table row per position, -1 when none
}

export class Seq2Seq {
  readonly vars: Record<string, tf.Variable> = {};
  softTable: tf.Variable | null = null;

  constructor(
    readonly config: ModelConfig,
    readonly vocab: Vocab,
    seedOffset = 0,
  ) {
    const { embedDim: e, hiddenDim: h, seed } = config;
    const v = vocab.size;
    const init = (shape: number[], s: number) =>
      tf.variable(tf.randomNormal(shape, 0, 0.08, "float32", seed + seedOffset + s));
    this.vars.embedding = init([v, e], 1);
    // encoder GRU
    this.vars.encW = init([e, 3 * h], 2);
    this.vars.encU = init([h, 3 * h], 3);
    this.vars.encB = tf.variable(tf.zeros([3 * h]));
    // decoder GRU
    this.vars.decW = init([e, 3 * h], 4);
    this.vars.decU = init([h, 3 * h], 5);
    this.vars.decB = tf.variable(tf.zeros([3 * h]));
    // attention combine + output projection
    this.vars.attnW = init([2 * h, h], 7);
    this.vars.outW = init([h, v], 6);
    this.vars.outB = tf.variable(tf.zeros([v]));
  }

  embeddingStd(): number {
    const data = this.vars.embedding.dataSync();
    let sum = 0;
    for (const x of data) sum += x;
    const mean = sum / data.length;
    let sq = 0;
    for (const x of data) sq += (x - mean) * (x - mean);
    return Math.sqrt(sq / data.length);
  }

  /** Soft rows init: vocabulary-embedding copies or seeded normal noise. */
  initSoftTable(inits: (string | null)[], seed: number): void {
    this.disposeSoftTable();
    if (inits.length === 0) return;
    const rows: tf.Tensor[] = [];
    const std = this.embeddingStd();
    inits.forEach((word, i) => {
      if (word !== null) {
        const ids = this.vocab.encode([word]);
        rows.push(tf.gather(this.vars.embedding, tf.tensor1d(ids, "int32")));
      } else {
        rows.push(tf.randomNormal([1, this.config.embedDim], 0, std, "float32", seed + 7_000 + i));
      }
    });
    this.softTable = tf.variable(tf.concat(rows, 0));
    rows.forEach((r) => r.dispose());
  }

  disposeSoftTable(): void {
    if (this.softTable !== null) {
      this.softTable.dispose();
      this.softTable = null;
    }
  }

  trainables(mode: "fine_tune" | "prompt_tune"): tf.Variable[] {
    const all = Object.values(this.vars);
    if (mode === "prompt_tune" && this.softTable !== null) all.push(this.softTable);
    return all;
  }

  /** [B,T] ids plus [B,T] soft markers -> [B,T,E] embeddings. */
  embed(ids: tf.Tensor2D, soft: tf.Tensor2D): tf.Tensor3D {
    return tf.tidy(() => {
      const base = tf.gather(this.vars.embedding, ids.cast("int32")) as tf.Tensor3D;
      if (this.softTable === null) return base;
      const sel = tf.expandDims(tf.greaterEqual(soft, 0).cast("float32"), -1) as tf.Tensor3D;
      const safe = tf.maximum(soft, 0).cast("int32");
      const softRows = tf.gather(this.softTable, safe) as tf.Tensor3D;
      return base.mul(tf.sub(1, sel)).add(softRows.mul(sel)) as tf.Tensor3D;
    });
  }

  /** Dot-product attention over encoder states; pads are masked out. */
  private attend(decState: tf.Tensor2D, enc: EncoderOut): tf.Tensor2D {
    return tf.tidy(() => {
      // scores [B,T] = decState . encStates_t
      const scores = tf.matMul(enc.states, decState.expandDims(2)).squeeze([2]) as tf.Tensor2D;
      const masked = scores.add(tf.sub(enc.mask, 1).mul(1e9));
      const alpha = tf.softmax(masked) as tf.Tensor2D;
      const context = tf
        .matMul(alpha.expandDims(1), enc.states)
        .squeeze([1]) as tf.Tensor2D;
      const combined = tf.tanh(
        tf.matMul(tf.concat([decState, context], 1), this.vars.attnW),
      ) as tf.Tensor2D;
      return combined;
    });
  }

  private logitsOf(combined: tf.Tensor2D): tf.Tensor2D {
    return tf.add(tf.matMul(combined, this.vars.outW), this.vars.outB) as tf.Tensor2D;
  }

  private gru(
    x: tf.Tensor3D,
    mask: tf.Tensor2D,
    W: tf.Variable,
    U: tf.Variable,
    b: tf.Variable,
    h0?: tf.Tensor2D,
  ): { states: tf.Tensor2D[]; last: tf.Tensor2D } {
    const [batch, time] = [x.shape[0], x.shape[1]];
    const h = this.config.hiddenDim;
    // one batched input projection for the whole sequence; the step loop
    // then only multiplies the recurrent term
    const xProj = tf.matMul(x.reshape([batch * time, -1]), W).add(b) as tf.Tensor2D;
    let state = h0 ?? (tf.zeros([batch, h]) as tf.Tensor2D);
    const states: tf.Tensor2D[] = [];
    for (let t = 0; t < time; t++) {
      state = tf.tidy(() => {
        const xt = tf.gather(
          xProj,
          tf.tensor1d(Array.from({ length: batch }, (_, i) => i * time + t), "int32"),
        ) as tf.Tensor2D;
        const rec = tf.matMul(state, U);
        const zr = tf.sigmoid(
          xt.slice([0, 0], [batch, 2 * h]).add(rec.slice([0, 0], [batch, 2 * h])),
        );
        const z = zr.slice([0, 0], [batch, h]);
        const r = zr.slice([0, h], [batch, h]);
        const cand = tf.tanh(
          xt.slice([0, 2 * h], [batch, h]).add(rec.slice([0, 2 * h], [batch, h]).mul(r)),
        );
        const next = tf.add(state.mul(tf.sub(1, z)), cand.mul(z)) as tf.Tensor2D;
        const keep = mask.slice([0, t], [batch, 1]);
        return tf.add(next.mul(keep), state.mul(tf.sub(1, keep))) as tf.Tensor2D;
      });
      states.push(state);
    }
    return { states, last: state };
  }

  /** Gate weights are packed [z r c]; slice once per step (see gru()). */
  encode(ids: tf.Tensor2D, soft: tf.Tensor2D): EncoderOut {
    const mask = tf.notEqual(ids, PAD).cast("float32") as tf.Tensor2D;
    // soft positions carry PAD ids on purpose; they are real content
    const softMask = tf.greaterEqual(soft, 0).cast("float32") as tf.Tensor2D;
    const keep = tf.maximum(mask, softMask) as tf.Tensor2D;
    const x = this.embed(ids, soft);
    const { states, last } = this.gru(x, keep, this.vars.encW, this.vars.encU, this.vars.encB);
    return { last, states: tf.stack(states, 1) as tf.Tensor3D, mask: keep };
  }

  /** Teacher-forced decoder logits: [B,T,V]. */
  decodeTrain(enc: EncoderOut, decIn: tf.Tensor2D): tf.Tensor3D {
    const mask = tf.ones(decIn.shape) as tf.Tensor2D;
    const zerosSoft = tf.fill(decIn.shape, -1) as tf.Tensor2D;
    const x = this.embed(decIn, zerosSoft);
    const { states } = this.gru(x, mask, this.vars.decW, this.vars.decU, this.vars.decB, enc.last);
    const perStep = states.map((s) => this.logitsOf(this.attend(s, enc)));
    return tf.stack(perStep, 1) as tf.Tensor3D;
  }

  /** One decoder step for beam search: state [K,H], token [K] -> next state and logits. */
  stepDecode(
    state: tf.Tensor2D,
    tokens: number[],
    enc: EncoderOut,
  ): { state: tf.Tensor2D; logits: Float32Array } {
    return tf.tidy(() => {
      const k = tokens.length;
      const ids = tf.tensor2d(tokens.map((t) => [t]), [k, 1], "int32") as tf.Tensor2D;
      const soft = tf.fill([k, 1], -1) as tf.Tensor2D;
      const x = this.embed(ids, soft);
      const mask = tf.ones([k, 1]) as tf.Tensor2D;
      const { last } = this.gru(x, mask, this.vars.decW, this.vars.decU, this.vars.decB, state);
      const encK: EncoderOut = {
        last: enc.last,
        states: enc.states.shape[0] === k ? enc.states : (tf.tile(enc.states, [k, 1, 1]) as tf.Tensor3D),
        mask: enc.mask.shape[0] === k ? enc.mask : (tf.tile(enc.mask, [k, 1]) as tf.Tensor2D),
      };
      const logits = this.logitsOf(this.attend(last, encK));
      return { state: tf.keep(last) as tf.Tensor2D, logits: logits.dataSync() as Float32Array };
    });
  }

  snapshot(): ModelSnapshot {
    const weights: Record<string, { shape: number[]; data: number[] }> = {};
    for (const [name, v] of Object.entries(this.vars)) {
      weights[name] = { shape: v.shape as number[], data: [...v.dataSync()] };
    }
    const soft =
      this.softTable === null
        ? null
        : { shape: this.softTable.shape as number[], data: [...this.softTable.dataSync()] };
    return { config: this.config, vocab: this.vocab.serialize(), weights, soft };
  }

  static restore(snap: ModelSnapshot): Seq2Seq {
    const model = new Seq2Seq(snap.config, Vocab.deserialize(snap.vocab));
    for (const [name, w] of Object.entries(snap.weights)) {
      model.vars[name].assign(tf.tensor(w.data, w.shape as [number, number]));
    }
    if (snap.soft !== null) {
      model.softTable = tf.variable(tf.tensor(snap.soft.data, snap.soft.shape as [number, number]));
    }
    return model;
  }

  dispose(): void {
    Object.values(this.vars).forEach((v) => v.dispose());
    this.disposeSoftTable();
  }
}

export interface EncoderOut {
  last: tf.Tensor2D;
  states: tf.Tensor3D; // [B,T,H]
  mask: tf.Tensor2D; // [B,T] 1 for real content
  [key: string]: tf.Tensor; // lets tf.tidy track the container
}

export interface ModelSnapshot {
  config: ModelConfig;
  vocab: string[];
  weights: Record<string, { shape: number[]; data: number[] }>;
  soft: { shape: number[]; data: number[] } | null;
}

export function snapshotDigest(snap: ModelSnapshot): string {
  const hash = createHash("sha256");
  hash.update(JSON.stringify(snap.vocab));
  for (const name of Object.keys(snap.weights).sort()) {
    hash.update(name);
    hash.update(Buffer.from(Float32Array.from(snap.weights[name].data).buffer));
  }
  if (snap.soft) hash.update(Buffer.from(Float32Array.from(snap.soft.data).buffer));
  return hash.digest("hex").slice(0, 16);
}

/** Decoupled-weight-decay Adam with a linear learning-rate schedule. */
export class AdamW {
  private m = new Map<tf.Variable, tf.Variable>();
  private v = new Map<tf.Variable, tf.Variable>();
  private t = 0;

  constructor(
    readonly baseLr: number,
    readonly totalSteps: number,
    readonly epsilon = 1e-8,
    readonly beta1 = 0.9,
    readonly beta2 = 0.999,
    readonly weightDecay = 0.0,
    readonly schedule: "linear" | "constant" = "linear",
  ) {}

  lr(): number {
    if (this.schedule === "constant" || this.totalSteps <= 1) return this.baseLr;
    const frac = Math.min(this.t / this.totalSteps, 1);
    return this.baseLr * Math.max(1 - frac, 1e-3);
  }

  step(lossFn: () => tf.Scalar, variables: tf.Variable[]): number {
    const lr = this.lr();
    this.t += 1;
    const { value, grads } = tf.variableGrads(lossFn, variables);
    const loss = value.dataSync()[0];
    value.dispose();
    for (const variable of variables) {
      const g = grads[variable.name];
      if (g === undefined) continue;
      if (!this.m.has(variable)) {
        this.m.set(variable, tf.variable(tf.zerosLike(variable)));
        this.v.set(variable, tf.variable(tf.zerosLike(variable)));
      }
      const m = this.m.get(variable)!;
      const v = this.v.get(variable)!;
      tf.tidy(() => {
        m.assign(m.mul(this.beta1).add(g.mul(1 - this.beta1)));
        v.assign(v.mul(this.beta2).add(g.square().mul(1 - this.beta2)));
        const mHat = m.div(1 - Math.pow(this.beta1, this.t));
        const vHat = v.div(1 - Math.pow(this.beta2, this.t));
        const update = mHat.div(vHat.sqrt().add(this.epsilon)).add(variable.mul(this.weightDecay));
        variable.assign(variable.sub(update.mul(lr)));
      });
      g.dispose();
    }
    return loss;
  }

  dispose(): void {
    for (const v of this.m.values()) v.dispose();
    for (const v of this.v.values()) v.dispose();
  }
}

/** Mean cross-entropy over non-pad target positions. */
export function maskedLoss(logits: tf.Tensor3D, targets: tf.Tensor2D): tf.Scalar {
  return tf.tidy(() => {
    const vocab = logits.shape[2];
    const oneHot = tf.oneHot(targets.cast("int32"), vocab);
    const logProbs = tf.logSoftmax(logits);
    const nll = tf.neg(tf.sum(oneHot.mul(logProbs), -1));
    const mask = tf.notEqual(targets, PAD).cast("float32");
    const total = tf.sum(nll.mul(mask));
    const count = tf.maximum(tf.sum(mask), 1);
    return total.div(count) as tf.Scalar;
  });
}

export { MASK };
