/**
 * Gym-style remote environment over the wire protocol.
 *
 * Each step is exactly one batched request: apply the action, fetch the
 * configured camera frames and the observation summary together, so all
 * parts of the observation reflect the same tick.
 */

import { Connection, ConnectError, Endpoint } from "./connection.js";
import { FramePayload, isFrame, Modality } from "./framing.js";

export class LifecycleError extends Error {}
export class RemoteCommandError extends Error {}

export interface ActionSpace {
  type: "continuous" | "discrete";
  low?: number[];
  high?: number[];
  n?: number;
  names?: string[];
}

export interface TaskMetadata {
  env_name: string;
  task: "Tracking" | "Navigation";
  action_space: ActionSpace;
  modalities: Modality[];
  resolution: [number, number];
  max_steps: number;
  control_interval: number;
  player_cam_id: number;
}

export interface StepInfo {
  [key: string]: unknown;
}

export interface Observation {
  relstate: [number, number, number];
  step: number;
  frames: Partial<Record<Modality, FramePayload>>;
}

export type StepTuple = [Observation, number, boolean, boolean, StepInfo];

export type Action = [number, number] | number | string;

function asText(item: string | FramePayload, context: string): string {
  if (isFrame(item)) {
    throw new RemoteCommandError(`${context}: expected text, got a frame`);
  }
  if (item.startsWith("error:")) {
    throw new RemoteCommandError(`${context}: ${item}`);
  }
  return item;
}

export class RemoteEnv {
  private done = true;

  private constructor(
    readonly conn: Connection,
    readonly meta: TaskMetadata,
  ) {}

  /** Connect and fetch task metadata; the server must run in task mode. */
  static async connect(endpoint: Endpoint | string): Promise<RemoteEnv> {
    const conn = await Connection.connect(endpoint);
    const info = JSON.parse(asText(await conn.ask("vget /env/info"),
                                   "vget /env/info"));
    if (!info.task) {
      conn.close();
      throw new ConnectError("server is not running a task config");
    }
    const meta = JSON.parse(asText(await conn.ask("vget /env/task"),
                                   "vget /env/task")) as TaskMetadata;
    return new RemoteEnv(conn, meta);
  }

  get roundTrips(): number {
    return this.conn.roundTrips;
  }

  private frameCommands(): string[] {
    const cam = this.meta.player_cam_id;
    const [w, h] = this.meta.resolution;
    return this.meta.modalities.map(
      (m) => `vget /camera/${cam}/${m} ${w}x${h}`,
    );
  }

  private collectObservation(
    items: (string | FramePayload)[],
    obsIndex: number,
  ): Observation {
    const summary = JSON.parse(asText(items[obsIndex], "vget /env/obs"));
    const frames: Partial<Record<Modality, FramePayload>> = {};
    for (const item of items) {
      if (isFrame(item)) {
        frames[item.modality] = item;
      }
    }
    return {
      relstate: summary.relstate as [number, number, number],
      step: summary.step as number,
      frames,
    };
  }

  async reset(seed: number): Promise<Observation> {
    const cmds = [
      `vset /env/reset ${seed}`,
      ...this.frameCommands(),
      "vget /env/obs",
    ];
    const { items } = await this.conn.request(cmds, true);
    asText(items[0], "vset /env/reset");
    this.done = false;
    return this.collectObservation(items, cmds.length - 1);
  }

  /** One batched request: action + frames + summary. */
  async step(action: Action): Promise<StepTuple> {
    if (this.done) {
      throw new LifecycleError("episode finished; call reset()");
    }
    const tokens = this.actionTokens(action);
    const cmds = [
      `vset /env/action ${tokens}`,
      ...this.frameCommands(),
      "vget /env/obs",
    ];
    const { items } = await this.conn.request(cmds, true);
    const result = JSON.parse(asText(items[0], "vset /env/action"));
    const obs = this.collectObservation(items, cmds.length - 1);
    this.done = result.terminated || result.truncated;
    return [obs, result.reward, result.terminated, result.truncated,
            result.info ?? {}];
  }

  private actionTokens(action: Action): string {
    if (this.meta.action_space.type === "continuous") {
      if (!Array.isArray(action) || action.length !== 2) {
        throw new RemoteCommandError(
          "continuous action needs [angular, linear]",
        );
      }
      return `${action[0]} ${action[1]}`;
    }
    return `${action}`;
  }

  close(): void {
    this.conn.close();
  }
}

/** Decode frame payloads into flat numeric arrays with shape metadata. */
export function frameToArray(frame: FramePayload): {
  shape: number[];
  data: Float32Array | Uint8Array;
} {
  const { width: w, height: h, pixels } = frame;
  if (frame.modality === "color" || frame.modality === "mask") {
    return { shape: [h, w, 3], data: new Uint8Array(pixels) };
  }
  const floats = new Float32Array(
    pixels.buffer.slice(pixels.byteOffset, pixels.byteOffset + pixels.length),
  );
  if (frame.modality === "depth") {
    return { shape: [h, w], data: floats };
  }
  return { shape: [h, w, 3], data: floats };
}
