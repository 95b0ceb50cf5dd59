/**
 * Terminal frame display: ANSI half-block rendering plus a HUD line.
 * Depth frames toggle to normalized grayscale.
 */

import { FramePayload } from "./framing.js";

const RESET = "\x1b[0m";

function colorAt(
  frame: FramePayload,
  x: number,
  y: number,
): [number, number, number] {
  const { width: w, height: h, pixels } = frame;
  const xi = Math.min(w - 1, Math.floor((x / 1.0)));
  const yi = Math.min(h - 1, Math.floor((y / 1.0)));
  if (frame.modality === "color" || frame.modality === "mask") {
    const o = (yi * w + xi) * 3;
    return [pixels[o], pixels[o + 1], pixels[o + 2]];
  }
  // depth -> grayscale against the maximum value in the frame
  const floats = new Float32Array(
    pixels.buffer.slice(pixels.byteOffset, pixels.byteOffset + pixels.length),
  );
  const stride = frame.modality === "depth" ? 1 : 3;
  const v = floats[(yi * w + xi) * stride];
  let max = 1e-6;
  for (let i = 0; i < floats.length; i += stride) {
    if (floats[i] > max) {
      max = floats[i];
    }
  }
  const g = Math.max(0, Math.min(255, Math.round((1 - v / max) * 255)));
  return [g, g, g];
}

/** Render a frame as ANSI half-blocks, two image rows per text row. */
export function renderAnsi(frame: FramePayload, cols = 64): string {
  const aspect = frame.height / frame.width;
  const outW = Math.min(cols, frame.width);
  const outH = Math.max(2, Math.round(outW * aspect));
  const lines: string[] = [];
  for (let row = 0; row < outH - 1; row += 2) {
    let line = "";
    for (let col = 0; col < outW; col++) {
      const xs = (col / outW) * frame.width;
      const yTop = (row / outH) * frame.height;
      const yBot = ((row + 1) / outH) * frame.height;
      const [tr, tg, tb] = colorAt(frame, xs, yTop);
      const [br, bg, bb] = colorAt(frame, xs, yBot);
      line += `\x1b[38;2;${tr};${tg};${tb}m\x1b[48;2;${br};${bg};${bb}m▀`;
    }
    lines.push(line + RESET);
  }
  return lines.join("\n");
}

export function hudLine(
  step: number,
  distance: number,
  direction: number,
  reward: number,
): string {
  return (
    `step ${String(step).padStart(4)}  ` +
    `distance ${distance.toFixed(2)} m  ` +
    `direction ${direction.toFixed(1)} deg  ` +
    `reward ${reward.toFixed(3)}`
  );
}

export interface ViewSink {
  show(text: string): void;
}

export class TerminalView implements ViewSink {
  show(text: string): void {
    process.stdout.write("\x1b[H\x1b[2J" + text + "\n");
  }
}

export class NullView implements ViewSink {
  show(_text: string): void {}
}
