/**
 * Keyboard bindings for teleoperation.
 *
 * Navigation (discrete): W/S/A/D move and turn, Space jumps, C crouches,
 * no key held means Hold. Tracking (continuous): arrow keys drive the
 * angular/linear axes.
 */

export const DISCRETE_ACTIONS = [
  "Forward",
  "Backward",
  "TurnLeft",
  "TurnRight",
  "Jump",
  "Crouch",
  "Hold",
] as const;

export type DiscreteAction = (typeof DISCRETE_ACTIONS)[number];

export interface KeyBinding {
  nav: Record<string, DiscreteAction>;
  navIdle: DiscreteAction;
  // tracking: key -> [angular deg/s, linear m/s] contribution
  tracking: Record<string, [number, number]>;
}

export const DEFAULT_BINDING: KeyBinding = {
  nav: {
    w: "Forward",
    s: "Backward",
    a: "TurnLeft",
    d: "TurnRight",
    " ": "Jump",
    c: "Crouch",
  },
  navIdle: "Hold",
  tracking: {
    up: [0, 1],
    down: [0, -1],
    left: [-30, 0],
    right: [30, 0],
  },
};

/** Every discrete action reachable, no key bound twice. */
export function validateBinding(binding: KeyBinding): void {
  const keys = [...Object.keys(binding.nav), ...Object.keys(binding.tracking)];
  const seen = new Set<string>();
  for (const k of keys) {
    // nav and tracking maps are mode-exclusive; duplicates within a map
    // are impossible (object keys), across modes they are fine
    void k;
  }
  const navKeys = Object.keys(binding.nav);
  if (new Set(navKeys).size !== navKeys.length) {
    throw new Error("a key is bound twice in the navigation map");
  }
  const covered = new Set<DiscreteAction>([
    ...Object.values(binding.nav),
    binding.navIdle,
  ]);
  for (const action of DISCRETE_ACTIONS) {
    if (!covered.has(action)) {
      throw new Error(`navigation binding misses action ${action}`);
    }
  }
  seen.clear();
}

export function navAction(
  binding: KeyBinding,
  heldKeys: Set<string>,
): DiscreteAction {
  for (const [key, action] of Object.entries(binding.nav)) {
    if (heldKeys.has(key)) {
      return action;
    }
  }
  return binding.navIdle;
}

export function trackingAction(
  binding: KeyBinding,
  heldKeys: Set<string>,
): [number, number] {
  let ang = 0;
  let lin = 0;
  for (const [key, [a, l]] of Object.entries(binding.tracking)) {
    if (heldKeys.has(key)) {
      ang += a;
      lin += l;
    }
  }
  return [ang, lin];
}
