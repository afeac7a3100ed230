/** HTTP surface implementing the patchbench worker protocol. */

import express, { Express } from "express";
import { ZodError } from "zod";

import { assembleInput, AssemblyError } from "./assemble";
import { generateOne } from "./beam";
import { JobManager } from "./jobs";
import { Seq2Seq } from "./model";
import { buildVocab, tokenize } from "./tokenizer";
import {
  DEFAULT_MODEL,
  GenerateRequestSchema,
  GenerationParamsSchema,
  GenerationResult,
  ModelConfig,
  PROTOCOL_HEADER,
  PROTOCOL_VERSION,
  TuneRequestSchema,
} from "./types";

export function createApp(config: ModelConfig = DEFAULT_MODEL, jobs = new JobManager(config)): Express {
  const app = express();
  app.use(express.json({ limit: "32mb" }));
  app.use((_req, res, next) => {
    res.setHeader(PROTOCOL_HEADER, PROTOCOL_VERSION);
    next();
  });

  app.get("/v1/health", (_req, res) => {
    res.json({ ok: true, model_ids: jobs.modelIds() });
  });

  app.post("/v1/generate", (req, res) => {
    let request;
    try {
      request = GenerateRequestSchema.parse(req.body);
    } catch (err) {
      res.status(400).json({ error: describeError(err) });
      return;
    }
    const params = GenerationParamsSchema.parse(request.params ?? {});
    const snapshot = request.model_ref.startsWith("ckpt-")
      ? jobs.checkpoint(request.model_ref)
      : undefined;
    if (request.model_ref.startsWith("ckpt-") && snapshot === undefined) {
      res.status(400).json({ error: `unknown checkpoint ${request.model_ref}` });
      return;
    }

    let model: Seq2Seq;
    if (snapshot !== undefined) {
      model = Seq2Seq.restore(snapshot);
    } else {
      // no checkpoint: a fresh seeded model over the request's own tokens,
      // so repeated identical requests stay deterministic
      const texts: string[] = [];
      for (const p of request.prompts) {
        for (const seg of p.segments) if (seg.t === "lit") texts.push(seg.text);
      }
      model = new Seq2Seq(config, buildVocab(texts));
    }

    const results: GenerationResult[] = [];
    for (const prompt of request.prompts) {
      try {
        const assembled = assembleInput(prompt, model.vocab, model.config);
        results.push({ instance_id: prompt.instance_id, text: generateOne(model, assembled, params) });
      } catch (err) {
        if (err instanceof AssemblyError) {
          results.push({ instance_id: prompt.instance_id, error: err.message });
        } else {
          results.push({ instance_id: prompt.instance_id, error: describeError(err) });
        }
      }
    }
    model.dispose();
    res.json({ results });
  });

  app.post("/v1/tune", (req, res) => {
    let request;
    try {
      request = TuneRequestSchema.parse(req.body);
    } catch (err) {
      res.status(400).json({ error: describeError(err) });
      return;
    }
    if (request.mode === "prompt_tune" && request.templates.length === 0) {
      res.status(400).json({ error: "prompt_tune needs at least one template" });
      return;
    }
    res.json({ job_id: jobs.submit(request) });
  });

  app.get("/v1/jobs/:id", (req, res) => {
    const record = jobs.get(req.params.id);
    if (record === undefined) {
      res.status(404).json({ error: `unknown job id ${req.params.id}` });
      return;
    }
    const body: Record<string, unknown> = {
      status: record.status,
      steps_done: record.steps_done,
      loss_curve: record.loss_curve,
    };
    if (record.checkpoint_ref) body.checkpoint_ref = record.checkpoint_ref;
    if (record.reason) body.reason = record.reason;
    res.json(body);
  });

  app.use((_req, res) => {
    res.status(404).json({ error: "no such endpoint" });
  });

  return app;
}

function describeError(err: unknown): string {
  if (err instanceof ZodError) {
    const first = err.issues[0];
    return `malformed request: ${first.path.join(".") || "body"}: ${first.message}`;
  }
  return err instanceof Error ? err.message : String(err);
}

// keep the tokenizer reachable for tests that need raw token counts
export { tokenize };
