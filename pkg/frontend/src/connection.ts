/**
 * Blocking-style TCP client: one outstanding request per connection,
 * monotonically increasing request ids, a round-trip counter for the
 * one-request-per-step assertions.
 */

import * as net from "node:net";

import {
  ProtocolError,
  Response,
  ResponseItem,
  ResponseReader,
  encodeRequest,
} from "./framing.js";

export class ConnectError extends Error {}
export class ProtocolViolation extends Error {}
export class TimeoutError extends Error {}

export interface Endpoint {
  host: string;
  port: number;
}

export function parseEndpoint(text: string): Endpoint {
  const stripped = text.startsWith("tcp:") ? text.slice(4) : text;
  const idx = stripped.lastIndexOf(":");
  if (idx < 0) {
    throw new ConnectError(`endpoint must be host:port, got ${text}`);
  }
  return { host: stripped.slice(0, idx) || "127.0.0.1",
           port: Number(stripped.slice(idx + 1)) };
}

export class Connection {
  private socket: net.Socket;
  private reader = new ResponseReader();
  private pending: {
    resolve: (r: Response) => void;
    reject: (e: Error) => void;
  } | null = null;
  private nextId = 1;
  private closed = false;
  roundTrips = 0;
  readonly idLog: number[] = [];

  private constructor(socket: net.Socket, private timeoutMs: number) {
    this.socket = socket;
    socket.on("data", (chunk: Buffer) => {
      let responses: Response[];
      try {
        responses = this.reader.push(chunk);
      } catch (e) {
        this.failPending(e as Error);
        return;
      }
      for (const r of responses) {
        const p = this.pending;
        this.pending = null;
        if (p) {
          p.resolve(r);
        }
      }
    });
    socket.on("error", (e) => this.failPending(e));
    socket.on("close", () => {
      this.closed = true;
      this.failPending(new ConnectError("connection closed"));
    });
  }

  static connect(endpoint: Endpoint | string, timeoutMs = 30_000):
      Promise<Connection> {
    const ep = typeof endpoint === "string" ? parseEndpoint(endpoint)
                                            : endpoint;
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ host: ep.host, port: ep.port });
      socket.setNoDelay(true);
      const onError = (e: Error) =>
        reject(new ConnectError(`cannot connect to ${ep.host}:${ep.port}: ${e.message}`));
      socket.once("error", onError);
      socket.once("connect", () => {
        socket.removeListener("error", onError);
        resolve(new Connection(socket, timeoutMs));
      });
    });
  }

  private failPending(e: Error) {
    const p = this.pending;
    this.pending = null;
    if (p) {
      p.reject(e);
    }
  }

  async request(commands: string[] | string, batch?: boolean):
      Promise<{ status: number; items: ResponseItem[] }> {
    const cmds = typeof commands === "string" ? [commands] : commands;
    if (this.pending) {
      throw new ProtocolError("one outstanding request per connection");
    }
    if (this.closed) {
      throw new ConnectError("connection closed");
    }
    const id = this.nextId++;
    this.idLog.push(id);
    const raw = encodeRequest(id, cmds, batch);
    const response = await new Promise<Response>((resolve, reject) => {
      const timer = setTimeout(
        () => {
          this.pending = null;
          reject(new TimeoutError(`no response within ${this.timeoutMs} ms`));
        },
        this.timeoutMs,
      );
      this.pending = {
        resolve: (r) => {
          clearTimeout(timer);
          resolve(r);
        },
        reject: (e) => {
          clearTimeout(timer);
          reject(e);
        },
      };
      this.socket.write(raw);
    });
    this.roundTrips += 1;
    if (response.requestId !== id) {
      throw new ProtocolViolation(
        `response id ${response.requestId} does not match request id ${id}`,
      );
    }
    return { status: response.status, items: response.items };
  }

  async ask(command: string): Promise<ResponseItem> {
    const { items } = await this.request([command]);
    return items[0];
  }

  close(): void {
    this.closed = true;
    this.socket.destroy();
  }
}
