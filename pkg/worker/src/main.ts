/** Worker entry point: `node dist/main.js --port 8800 --model tiny-infilling`. */

import * as tf from "@tensorflow/tfjs";

import { createApp } from "./server";
import { DEFAULT_MODEL, ModelConfig } from "./types";

function parseArgs(argv: string[]): { port: number; model: string; device: string } {
  const out = { port: 8800, model: "tiny-infilling", device: "cpu" };
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--port") out.port = Number(argv[++i]);
    else if (argv[i] === "--model") out.model = argv[++i];
    else if (argv[i] === "--device") out.device = argv[++i];
  }
  return out;
}

async function main(): Promise<void> {
  const args = parseArgs(process.argv.slice(2));
  await tf.setBackend(args.device === "cpu" ? "cpu" : args.device);
  const config: ModelConfig = {
    ...DEFAULT_MODEL,
    style: args.model.endsWith("generative") ? "generative" : "infilling",
  };
  const app = createApp(config);
  app.listen(args.port, () => {
    console.log(`patchbench worker (${args.model}, ${tf.getBackend()}) on :${args.port}`);
  });
}

main().catch((err) => {
  console.error(err);
  process.exit(1);
});
