export { Connection, ConnectError, ProtocolViolation, TimeoutError,
         parseEndpoint } from "./connection.js";
export { encodeRequest, decodeResponse, ResponseReader, isFrame,
         BadMagic, Truncated, Oversize, STATUS_OK, STATUS_PARTIAL,
         STATUS_ERROR } from "./framing.js";
export type { FramePayload, Modality, ResponseItem } from "./framing.js";
export { RemoteEnv, LifecycleError, RemoteCommandError,
         frameToArray } from "./remoteEnv.js";
export type { Action, Observation, StepTuple, TaskMetadata } from "./remoteEnv.js";
export { DEFAULT_BINDING, DISCRETE_ACTIONS, navAction, trackingAction,
         validateBinding } from "./keymap.js";
export type { DiscreteAction, KeyBinding } from "./keymap.js";
export { newRecord, saveRecords, loadRecords } from "./records.js";
export type { EpisodeRecord } from "./records.js";
export { runSession, ScriptedKeySource } from "./teleop.js";
export type { KeySource, SessionOptions, SessionResult } from "./teleop.js";
export { renderAnsi, hudLine, TerminalView, NullView } from "./view.js";
