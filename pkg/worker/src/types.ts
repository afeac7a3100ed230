/** Wire-protocol types and validation for the patchbench worker. */

import { z } from "zod";

export const PROTOCOL_HEADER = "X-Patchbench-Proto";
export const PROTOCOL_VERSION = "1";

export const SegmentSchema = z.union([
  z.object({
    t: z.literal("lit"),
    text: z.string(),
    src: z.enum(["input", "knowledge"]).optional(),
    kind: z.string().optional(),
  }),
  z.object({ t: z.literal("soft"), i: z.number().int().nonnegative(), init: z.string().optional() }),
  z.object({ t: z.literal("mask") }),
]);
export type Segment = z.infer<typeof SegmentSchema>;

export const CompiledPromptSchema = z.object({
  instance_id: z.string(),
  segments: z.array(SegmentSchema).min(1),
  truncated: z.boolean().optional(),
});
export type CompiledPrompt = z.infer<typeof CompiledPromptSchema>;

export const GenerationParamsSchema = z.object({
  beam_count: z.number().int().min(1).default(5),
  temperature: z.number().positive().default(1.0),
  sample: z.boolean().default(false),
  top_p: z.number().gt(0).lte(1).default(0.9),
  repetition_penalty: z.number().positive().default(1.0),
  max_new_tokens: z.number().int().min(1).default(512),
});
export type GenerationParams = z.infer<typeof GenerationParamsSchema>;

export const TuneParamsSchema = z.object({
  optimizer: z.string().default("adamw"),
  epsilon: z.number().positive().default(1e-8),
  learning_rate: z.number().positive().default(5e-5),
  scheduler: z.string().default("linear"),
  epochs: z.number().int().min(1).default(10),
  mode: z.enum(["fine_tune", "prompt_tune"]),
});
export type TuneParams = z.infer<typeof TuneParamsSchema>;

export const TemplateSegmentSchema = z.union([
  z.object({ t: z.literal("lit"), text: z.string() }),
  z.object({ t: z.literal("input") }),
  z.object({ t: z.literal("mask") }),
  z.object({ t: z.literal("soft"), i: z.number().int().nonnegative(), init: z.string().optional() }),
  z.object({ t: z.literal("knowledge"), kind: z.string() }),
]);
export type TemplateSegment = z.infer<typeof TemplateSegmentSchema>;

export const TemplateSchema = z.object({
  id: z.string(),
  kind: z.string(),
  model_style: z.enum(["infilling", "generative"]),
  segments: z.array(TemplateSegmentSchema).min(1),
});
export type PromptTemplate = z.infer<typeof TemplateSchema>;

export const InstanceSchema = z.object({
  id: z.string(),
  language: z.string(),
  buggy: z.string().min(1),
  fixed: z.string().min(1),
  knowledge: z.record(z.string(), z.string()).optional(),
  dataset: z.string().optional(),
});
export type RepairInstance = z.infer<typeof InstanceSchema>;

export const GenerateRequestSchema = z.object({
  model_ref: z.string().default("default"),
  params: GenerationParamsSchema.partial().default({}),
  prompts: z.array(CompiledPromptSchema).min(1),
});
export type GenerateRequest = z.infer<typeof GenerateRequestSchema>;

export const TuneRequestSchema = z.object({
  mode: z.enum(["fine_tune", "prompt_tune"]),
  model_id: z.string().default("default"),
  tune_params: TuneParamsSchema.partial().default({}),
  templates: z.array(TemplateSchema).default([]),
  train: z.array(InstanceSchema).min(1),
  val: z.array(InstanceSchema).default([]),
});
export type TuneRequest = z.infer<typeof TuneRequestSchema>;

export type GenerationResult =
  | { instance_id: string; text: string }
  | { instance_id: string; error: string };

export type JobStatus = "queued" | "running" | "done" | "failed";

export interface JobRecord {
  job_id: string;
  status: JobStatus;
  steps_done: number;
  loss_curve: number[];
  checkpoint_ref?: string;
  reason?: string;
}

export interface ModelConfig {
  style: "infilling" | "generative";
  embedDim: number;
  hiddenDim: number;
  contextLen: number;
  maxTargetLen: number;
  seed: number;
}

export const DEFAULT_MODEL: ModelConfig = {
  style: "infilling",
  embedDim: 32,
  hiddenDim: 48,
  contextLen: 256,
  maxTargetLen: 64,
  seed: 1234,
};
