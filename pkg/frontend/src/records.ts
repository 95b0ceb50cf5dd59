/**
 * Episode records in the bench JSONL format, consumable by the server
 * side's metrics tooling (`zoosim metrics --records <file>`).
 */

import * as fs from "node:fs";

export interface EpisodeRecord {
  ret: number;
  length: number;
  success: boolean;
  path_length: number;
  shortest_length: number;
  seed: number;
  wall_time: number;
  failed: boolean;
  error: string;
}

export function newRecord(seed: number): EpisodeRecord {
  return {
    ret: 0,
    length: 0,
    success: false,
    path_length: 0,
    shortest_length: 0,
    seed,
    wall_time: 0,
    failed: false,
    error: "",
  };
}

export function saveRecords(records: EpisodeRecord[], path: string): void {
  const lines = records.map((r) => JSON.stringify(sortKeys(r))).join("\n");
  fs.writeFileSync(path, lines + "\n", "utf-8");
}

export function loadRecords(path: string): EpisodeRecord[] {
  return fs
    .readFileSync(path, "utf-8")
    .split("\n")
    .filter((l) => l.trim().length > 0)
    .map((l) => JSON.parse(l) as EpisodeRecord);
}

function sortKeys<T extends object>(obj: T): T {
  return Object.fromEntries(
    Object.entries(obj).sort(([a], [b]) => (a < b ? -1 : 1)),
  ) as T;
}
