/** Test helpers: spawn a zoosim server process and build task configs. */

import { ChildProcess, spawn, spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import * as readline from "node:readline";

export interface ServerHandle {
  endpoint: string;
  proc: ChildProcess;
  stop(): void;
}

export function tmpdir(prefix: string): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), prefix));
}

export function trackingConfig(overrides: Record<string, unknown> = {}) {
  return {
    env_name: "ts_client_test",
    scene: "generator:Flat:0:24x24",
    task: "Tracking",
    agents: {
      player: {
        class_name: "Human",
        cam_id: 1,
        relative_location: [20, 0, 0],
      },
      target: {
        class_name: "Human",
        internal_nav: true,
        policy: "random",
        speed: 80,
      },
    },
    observation: { modalities: [], width: 96, height: 72, far_clip: 2500 },
    safe_start: [[1200, 1200, 0]],
    reset_area: [200, 2200, 200, 2200, 0, 300],
    random_init: false,
    max_steps: 200,
    ...overrides,
  };
}

export function writeConfig(dir: string, doc: unknown): string {
  const p = path.join(dir, "task.json");
  fs.writeFileSync(p, JSON.stringify(doc, null, 2));
  return p;
}

export async function startServer(cfgPath: string): Promise<ServerHandle> {
  const proc = spawn(
    "python3",
    ["-m", "zoosim", "serve", "--task", cfgPath, "--tcp", "127.0.0.1:0"],
    { stdio: ["ignore", "pipe", "inherit"] },
  );
  const rl = readline.createInterface({ input: proc.stdout! });
  const endpoint = await new Promise<string>((resolve, reject) => {
    const timer = setTimeout(
      () => reject(new Error("server did not report readiness")),
      60_000,
    );
    rl.on("line", (line) => {
      const m = line.match(/serving on (tcp:\S+)/);
      if (m) {
        clearTimeout(timer);
        resolve(m[1]);
      }
    });
    proc.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`server exited early with code ${code}`));
    });
  });
  return {
    endpoint,
    proc,
    stop() {
      proc.kill("SIGTERM");
    },
  };
}

/** Run the in-process python reference for a scripted rollout. */
export function pythonReference(
  cfgPath: string,
  seeds: number[],
  actionTokens: [string, string][],
): Record<string, { rewards: number[]; terminated: boolean[]; truncated: boolean[] }> {
  const script = `
import json, sys
from zoosim.envapi import load_config, make_env

spec = json.load(open(sys.argv[1]))
env = make_env(load_config(spec["config"]))
out = {}
for seed in spec["seeds"]:
    env.reset(seed)
    rewards, term, trunc = [], [], []
    for ang_tok, lin_tok in spec["actions"]:
        r = env.step((float(ang_tok), float(lin_tok)))
        rewards.append(r.reward)
        term.append(r.terminated)
        trunc.append(r.truncated)
        if r.terminated or r.truncated:
            break
    out[str(seed)] = {"rewards": rewards, "terminated": term,
                      "truncated": trunc}
print(json.dumps(out))
`;
  const dir = tmpdir("zoosim-ref-");
  const specPath = path.join(dir, "spec.json");
  fs.writeFileSync(
    specPath,
    JSON.stringify({ config: cfgPath, seeds, actions: actionTokens }),
  );
  const res = spawnSync("python3", ["-c", script, specPath], {
    encoding: "utf-8",
    timeout: 240_000,
  });
  if (res.status !== 0) {
    throw new Error(`python reference failed: ${res.stderr}`);
  }
  return JSON.parse(res.stdout.trim());
}

/** Exact-decimal action script shared by both sides. */
export function actionScript(steps: number): [string, string][] {
  const out: [string, string][] = [];
  for (let k = 0; k < steps; k++) {
    const ang = ((k * 7) % 41) - 20; // integers, exactly representable
    const lin = (((k * 3) % 11) - 5) / 5; // multiples of 0.2
    out.push([String(ang), lin.toFixed(1)]);
  }
  return out;
}
