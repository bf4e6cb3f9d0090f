import { StateSnapshot } from "../src/types.js";

export function emptySnapshot(): StateSnapshot {
  const zeros = () => Array.from({ length: 40 }, () => Array.from({ length: 40 }, () => 0));
  return {
    tick: 0,
    outcome: "ongoing",
    day_index: 0,
    boss_timer_remaining_s: 120,
    world: zeros(),
    boss_occupied: Array.from({ length: 16 }, () => false),
    rock_heights: zeros(),
    water_masks: zeros(),
    villagers: [],
    monsters: [],
    inventory: {},
    pool_queue: [],
    counters: {},
  };
}
