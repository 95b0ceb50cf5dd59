/**
 * Binary framing for the zoosim wire protocol (little-endian).
 *
 * request:  "UZP1" | id u32 | flags u8 (bit0 batch) | count u32 |
 *           count x (len u32 | command utf-8)
 * response: "UZR1" | id u32 | status u8 | count u32 | count x item
 * item:     kind u8 (0 text, 1 frame) | len u32 | payload
 * frame payload: modality u8 | width u32 | height u32 | pixels
 */

export const REQUEST_MAGIC = "UZP1";
export const RESPONSE_MAGIC = "UZR1";
export const PAYLOAD_CAP = 16 * 1024 * 1024;

export const STATUS_OK = 0;
export const STATUS_PARTIAL = 1;
export const STATUS_ERROR = 2;

export const MODALITIES = ["color", "mask", "depth", "normal"] as const;
export type Modality = (typeof MODALITIES)[number];

export class ProtocolError extends Error {}
export class BadMagic extends ProtocolError {}
export class Truncated extends ProtocolError {}
export class Oversize extends ProtocolError {}

export interface FramePayload {
  modality: Modality;
  width: number;
  height: number;
  pixels: Buffer;
}

export type ResponseItem = string | FramePayload;

export interface Response {
  requestId: number;
  status: number;
  items: ResponseItem[];
}

export function encodeRequest(
  requestId: number,
  commands: string[],
  batch?: boolean,
): Buffer {
  if (commands.length === 0) {
    throw new ProtocolError("at least one command required");
  }
  const useBatch = batch ?? commands.length > 1;
  const bodies = commands.map((c) => Buffer.from(c, "utf-8"));
  const total =
    13 + bodies.reduce((acc, b) => acc + 4 + b.length, 0);
  const out = Buffer.alloc(total);
  out.write(REQUEST_MAGIC, 0, "ascii");
  out.writeUInt32LE(requestId >>> 0, 4);
  out.writeUInt8(useBatch ? 1 : 0, 8);
  out.writeUInt32LE(commands.length, 9);
  let off = 13;
  for (const b of bodies) {
    out.writeUInt32LE(b.length, off);
    b.copy(out, off + 4);
    off += 4 + b.length;
  }
  return out;
}

export function decodeResponse(data: Buffer): Response {
  if (data.length < 13) {
    throw new Truncated("response shorter than its fixed header");
  }
  if (data.toString("ascii", 0, 4) !== RESPONSE_MAGIC) {
    throw new BadMagic(`bad response magic ${data.toString("hex", 0, 4)}`);
  }
  const requestId = data.readUInt32LE(4);
  const status = data.readUInt8(8);
  const count = data.readUInt32LE(9);
  const items: ResponseItem[] = [];
  let off = 13;
  for (let i = 0; i < count; i++) {
    if (off + 5 > data.length) {
      throw new Truncated("response ends inside an item header");
    }
    const kind = data.readUInt8(off);
    const len = data.readUInt32LE(off + 1);
    if (len > PAYLOAD_CAP) {
      throw new Oversize(`declared item length ${len} exceeds cap`);
    }
    off += 5;
    if (off + len > data.length) {
      throw new Truncated("response ends inside an item");
    }
    const payload = data.subarray(off, off + len);
    off += len;
    if (kind === 1) {
      if (len < 9) {
        throw new Truncated("frame payload shorter than its header");
      }
      items.push({
        modality: MODALITIES[payload.readUInt8(0)],
        width: payload.readUInt32LE(1),
        height: payload.readUInt32LE(5),
        pixels: Buffer.from(payload.subarray(9)),
      });
    } else {
      items.push(payload.toString("utf-8"));
    }
  }
  if (off !== data.length) {
    throw new Truncated("trailing bytes after the declared items");
  }
  return { requestId, status, items };
}

/**
 * Incremental reader: feed stream chunks, pop complete response frames.
 * The header declares the item count; each item carries its own length.
 */
export class ResponseReader {
  private buf: Buffer = Buffer.alloc(0);

  push(chunk: Buffer): Response[] {
    this.buf = this.buf.length === 0 ? chunk : Buffer.concat([this.buf, chunk]);
    const out: Response[] = [];
    for (;;) {
      const frameLen = this.completeFrameLength();
      if (frameLen < 0) {
        break;
      }
      const frame = this.buf.subarray(0, frameLen);
      this.buf = Buffer.from(this.buf.subarray(frameLen));
      out.push(decodeResponse(frame));
    }
    return out;
  }

  private completeFrameLength(): number {
    if (this.buf.length < 13) {
      return -1;
    }
    if (this.buf.toString("ascii", 0, 4) !== RESPONSE_MAGIC) {
      throw new BadMagic(
        `bad response magic ${this.buf.toString("hex", 0, 4)}`,
      );
    }
    const count = this.buf.readUInt32LE(9);
    let off = 13;
    for (let i = 0; i < count; i++) {
      if (off + 5 > this.buf.length) {
        return -1;
      }
      const len = this.buf.readUInt32LE(off + 1);
      if (len > PAYLOAD_CAP) {
        throw new Oversize(`declared item length ${len} exceeds cap`);
      }
      off += 5 + len;
      if (off > this.buf.length) {
        return -1;
      }
    }
    return off;
  }
}

export function isFrame(item: ResponseItem): item is FramePayload {
  return typeof item !== "string";
}
