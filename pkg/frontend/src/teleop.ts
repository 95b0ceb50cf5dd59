/**
 * Human-in-the-loop session runner.
 *
 * Keys are sampled once per control tick and zero-order held by the env
 * between ticks; every control tick issues exactly one batched request.
 * Before each trial the session shows a free-roam top view and the
 * target's whereabouts. Records land in the bench JSONL format.
 */

import { Connection } from "./connection.js";
import { isFrame } from "./framing.js";
import {
  DEFAULT_BINDING,
  KeyBinding,
  navAction,
  trackingAction,
  validateBinding,
} from "./keymap.js";
import { EpisodeRecord, newRecord, saveRecords } from "./records.js";
import { RemoteEnv } from "./remoteEnv.js";
import { NullView, ViewSink, hudLine, renderAnsi } from "./view.js";

/** Held keys per control tick; null requests quitting the session. */
export interface KeySource {
  next(tick: number): Promise<Set<string> | null> | Set<string> | null;
}

/** Replays a fixed schedule of held keys (testing, demos). */
export class ScriptedKeySource implements KeySource {
  constructor(private schedule: (Set<string> | null)[]) {}

  next(tick: number): Set<string> | null {
    if (tick >= this.schedule.length) {
      return new Set();
    }
    return this.schedule[tick];
  }
}

export interface SessionOptions {
  endpoint: string;
  trials: number;
  outPath: string;
  binding?: KeyBinding;
  view?: ViewSink;
  seeds?: number[];
  previewTicks?: number;
}

export interface SessionResult {
  records: EpisodeRecord[];
  requestIds: number[];
  steps: number;
}

export async function runSession(
  source: KeySource,
  opts: SessionOptions,
): Promise<SessionResult> {
  const binding = opts.binding ?? DEFAULT_BINDING;
  validateBinding(binding);
  const view = opts.view ?? new NullView();
  const records: EpisodeRecord[] = [];
  const requestIds: number[] = [];
  let steps = 0;
  let quit = false;

  for (let trial = 0; trial < opts.trials && !quit; trial++) {
    const seed = opts.seeds?.[trial] ?? trial + 1;
    const record = newRecord(seed);
    const started = Date.now();
    let env: RemoteEnv | null = null;
    try {
      env = await RemoteEnv.connect(opts.endpoint);
      await showPreview(env, view, opts.previewTicks ?? 1);
      let obs = await env.reset(seed);
      const idBase = env.conn.idLog.length;
      for (;;) {
        const held = await source.next(record.length);
        if (held === null) {
          quit = true;
          record.failed = true;
          record.error = "session quit mid-trial";
          break;
        }
        const action =
          env.meta.action_space.type === "continuous"
            ? trackingAction(binding, held)
            : navAction(binding, held);
        const [nextObs, reward, terminated, truncated, info] =
          await env.step(action);
        obs = nextObs;
        record.ret += reward;
        record.length += 1;
        steps += 1;
        record.success = Boolean(info.success);
        record.path_length = Number(info.path_length ?? 0);
        const sl = Number(info.shortest_length ?? 0);
        record.shortest_length = Number.isFinite(sl) ? sl : 0;
        display(view, obs, record.length, reward);
        if (terminated || truncated) {
          break;
        }
      }
      requestIds.push(...env.conn.idLog.slice(idBase));
    } catch (e) {
      record.failed = true;
      record.error = `${(e as Error).message}`;
    } finally {
      record.wall_time = (Date.now() - started) / 1000;
      env?.close();
    }
    records.push(record);
  }
  saveRecords(records, opts.outPath);
  return { records, requestIds, steps };
}

/** Free-roam top view plus target whereabouts before the trial starts. */
async function showPreview(
  env: RemoteEnv,
  view: ViewSink,
  ticks: number,
): Promise<void> {
  for (let i = 0; i < ticks; i++) {
    const conn: Connection = env.conn;
    const { items } = await conn.request(
      ["vget /camera/0/color 96x72", "vget /env/obs"],
      true,
    );
    const frame = items.find(isFrame);
    const text = frame ? renderAnsi(frame) : "(no preview frame)";
    view.show(`${text}\nfree-roam preview: study the map, trial starts now`);
  }
}

function display(
  view: ViewSink,
  obs: { relstate: [number, number, number]; frames: Record<string, unknown> },
  step: number,
  reward: number,
): void {
  const frame = Object.values(obs.frames).find((f) => f !== undefined);
  const image = frame ? renderAnsi(frame as never) : "";
  view.show(
    `${image}\n${hudLine(step, obs.relstate[0], obs.relstate[1], reward)}`,
  );
}
