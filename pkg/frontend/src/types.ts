// Wire types mirroring the session server's snapshot and request bodies.

export interface TaskInfo {
  kind: string;
  cell?: [number, number];
  monster_id?: number;
}

export interface VillagerInfo {
  id: number;
  kind: "fighter" | "archer" | "worker";
  hp: number;
  max_hp: number;
  level: number;
  xp: number;
  x: number;
  y: number;
  task: TaskInfo;
}

export interface MonsterInfo {
  id: number;
  kind: "boss" | "minion";
  hp: number;
  max_hp: number;
  grid_index: number;
  x: number;
  y: number;
}

export interface StateSnapshot {
  tick: number;
  outcome: "ongoing" | "win" | "lose";
  day_index: number;
  boss_timer_remaining_s: number;
  world: number[][];
  boss_occupied: boolean[];
  rock_heights: number[][];
  water_masks: number[][];
  villagers: VillagerInfo[];
  monsters: MonsterInfo[];
  inventory: Record<string, number>;
  pool_queue: string[];
  counters: Record<string, number>;
}

export interface TerraformRequest {
  grid_index: number;
  words: string[];
}

export interface CommandRequest {
  villager_id: number;
  task: "move" | "chop" | "attack" | "collect";
  args: { cell?: [number, number]; monster_id?: number };
}

export const WORLD_SIZE = 40;
export const SUBGRID_SIZE = 10;

export function subgridIndex(x: number, y: number): number {
  return Math.floor(y / SUBGRID_SIZE) * 4 + Math.floor(x / SUBGRID_SIZE);
}
