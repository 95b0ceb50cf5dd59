#!/usr/bin/env node
/**
 * zoosim-teleop --endpoint tcp:127.0.0.1:9000 --task cfg.json --trials 5
 *               --out session_dir
 *
 * The server must already run the task (`zoosim serve --task cfg.json`);
 * --task here is informational for the session log. Keys: WASD + Space +
 * C for navigation, arrow keys for tracking, q quits.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { KeySource, runSession } from "./teleop.js";
import { TerminalView } from "./view.js";

interface Args {
  endpoint: string;
  task: string;
  trials: number;
  out: string;
}

function parseArgs(argv: string[]): Args {
  const args: Args = {
    endpoint: "tcp:127.0.0.1:9000",
    task: "",
    trials: 5,
    out: "teleop_session",
  };
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (key === "--endpoint") args.endpoint = value;
    else if (key === "--task") args.task = value;
    else if (key === "--trials") args.trials = Number(value);
    else if (key === "--out") args.out = value;
    else throw new Error(`unknown argument ${key}`);
  }
  return args;
}

/** Live keyboard source: raw-mode stdin, keys held for one control tick. */
class StdinKeySource implements KeySource {
  private held = new Set<string>();
  private quit = false;

  constructor(private tickMs: number) {
    process.stdin.setRawMode?.(true);
    process.stdin.resume();
    process.stdin.on("data", (buf: Buffer) => {
      const s = buf.toString("utf-8");
      if (s === "q" || s === "\x03") {
        this.quit = true;
        return;
      }
      const key =
        s === "\x1b[A" ? "up" :
        s === "\x1b[B" ? "down" :
        s === "\x1b[C" ? "right" :
        s === "\x1b[D" ? "left" : s.toLowerCase();
      this.held.add(key);
    });
  }

  async next(_tick: number): Promise<Set<string> | null> {
    await new Promise((r) => setTimeout(r, this.tickMs));
    if (this.quit) {
      return null;
    }
    const sample = new Set(this.held);
    this.held.clear(); // keys are re-reported while held (terminal repeat)
    return sample;
  }
}

async function main(): Promise<number> {
  const args = parseArgs(process.argv.slice(2));
  fs.mkdirSync(args.out, { recursive: true });
  const outPath = path.join(args.out, "records.jsonl");
  const source = new StdinKeySource(100);
  const result = await runSession(source, {
    endpoint: args.endpoint,
    trials: args.trials,
    outPath,
    view: new TerminalView(),
    previewTicks: 10,
  });
  const valid = result.records.filter((r) => !r.failed).length;
  console.log(
    `\nsession done: ${result.records.length} trials ` +
    `(${valid} valid) -> ${outPath}`,
  );
  process.stdin.pause();
  return 0;
}

main().then(
  (code) => process.exit(code),
  (e) => {
    console.error(`error: ${e.message}`);
    process.exit(2);
  },
);
