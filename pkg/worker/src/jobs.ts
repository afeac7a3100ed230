/**
 * Job registry and checkpoint store. One tuning job runs at a time;
 * checkpoints are kept in memory behind opaque content-hash refs.
 */

import { Seq2Seq, ModelSnapshot, snapshotDigest } from "./model";
import { tune } from "./tune";
import { DEFAULT_MODEL, JobRecord, ModelConfig, TuneRequest, TuneParamsSchema } from "./types";

export class JobManager {
  private jobs = new Map<string, JobRecord>();
  private checkpoints = new Map<string, ModelSnapshot>();
  private queue: Promise<void> = Promise.resolve();
  private counter = 0;

  constructor(readonly config: ModelConfig = DEFAULT_MODEL) {}

  submit(request: TuneRequest): string {
    const jobId = `job-${++this.counter}`;
    const record: JobRecord = { job_id: jobId, status: "queued", steps_done: 0, loss_curve: [] };
    this.jobs.set(jobId, record);
    this.queue = this.queue.then(() => this.run(jobId, request)).catch(() => undefined);
    return jobId;
  }

  private async run(jobId: string, request: TuneRequest): Promise<void> {
    const record = this.jobs.get(jobId)!;
    record.status = "running";
    await new Promise((resolve) => setImmediate(resolve)); // let submit return first
    let model: Seq2Seq | null = null;
    try {
      const params = TuneParamsSchema.parse({ ...request.tune_params, mode: request.mode });
      const outcome = tune(request.train, params, this.config, request.templates, 8, (step) => {
        record.steps_done = step;
      });
      model = outcome.model;
      record.loss_curve = outcome.lossCurve.map((x) => Number(x.toFixed(6)));
      const snapshot = model.snapshot();
      const ref = `ckpt-${snapshotDigest(snapshot)}`;
      this.checkpoints.set(ref, snapshot);
      record.checkpoint_ref = ref;
      record.status = "done";
    } catch (err) {
      record.status = "failed";
      record.reason = err instanceof Error ? err.message : String(err);
    } finally {
      model?.dispose();
    }
  }

  get(jobId: string): JobRecord | undefined {
    return this.jobs.get(jobId);
  }

  checkpoint(ref: string): ModelSnapshot | undefined {
    return this.checkpoints.get(ref);
  }

  async drain(): Promise<void> {
    await this.queue;
  }

  modelIds(): string[] {
    return ["tiny-seq2seq", ...this.checkpoints.keys()];
  }
}
