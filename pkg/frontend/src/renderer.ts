// Scene building and canvas drawing.
//
// buildScene is pure (snapshot in, draw ops out) so rendering decisions
// are unit-testable without a canvas; drawScene rasterizes the ops.

import { rockScale, spriteConnects, TILE_COLORS, waterSpriteVariant } from "./sprites.js";
import { StateSnapshot, SUBGRID_SIZE, WORLD_SIZE } from "./types.js";

export const WATER_TILE = 9;
export const ROCK_TILE = 5;

export interface TileOp {
  kind: "tile";
  x: number;
  y: number;
  tile: number;
  /** water connection variant (0-15); 0 for non-water tiles */
  variant: number;
  /** draw scale; >1 only for rocks with neighbors */
  scale: number;
}

export interface UnitOp {
  kind: "unit";
  unit: "villager" | "monster";
  id: number;
  x: number;
  y: number;
  hpRatio: number;
  label: string;
  selected: boolean;
}

export interface OutlineOp {
  kind: "outline";
  gridIndex: number;
  style: "boss" | "selection";
}

export type SceneOp = TileOp | UnitOp | OutlineOp;

export function buildScene(
  snapshot: StateSnapshot,
  selection?: { gridIndex: number | null; villagerId: number | null },
): SceneOp[] {
  const ops: SceneOp[] = [];
  for (let y = 0; y < WORLD_SIZE; y++) {
    for (let x = 0; x < WORLD_SIZE; x++) {
      const tile = snapshot.world[y][x];
      ops.push({
        kind: "tile",
        x,
        y,
        tile,
        variant: tile === WATER_TILE ? waterSpriteVariant(snapshot.water_masks[y][x]) : 0,
        scale: tile === ROCK_TILE ? rockScale(snapshot.rock_heights[y][x]) : 1,
      });
    }
  }
  snapshot.boss_occupied.forEach((held, gridIndex) => {
    if (held) ops.push({ kind: "outline", gridIndex, style: "boss" });
  });
  if (selection && selection.gridIndex !== null) {
    ops.push({ kind: "outline", gridIndex: selection.gridIndex, style: "selection" });
  }
  for (const v of snapshot.villagers) {
    ops.push({
      kind: "unit",
      unit: "villager",
      id: v.id,
      x: v.x,
      y: v.y,
      hpRatio: v.max_hp > 0 ? v.hp / v.max_hp : 0,
      label: v.kind[0].toUpperCase(),
      selected: selection?.villagerId === v.id,
    });
  }
  for (const m of snapshot.monsters) {
    ops.push({
      kind: "unit",
      unit: "monster",
      id: m.id,
      x: m.x,
      y: m.y,
      hpRatio: m.max_hp > 0 ? m.hp / m.max_hp : 0,
      label: m.kind === "boss" ? "B" : "m",
      selected: false,
    });
  }
  return ops;
}

const UNIT_COLORS = { villager: "#ffffff", monster: "#2b2b2b" };

export function drawScene(ctx: CanvasRenderingContext2D, ops: SceneOp[], cell: number): void {
  ctx.clearRect(0, 0, WORLD_SIZE * cell, WORLD_SIZE * cell);
  for (const op of ops) {
    if (op.kind !== "tile") continue;
    const px = op.x * cell;
    const py = op.y * cell;
    ctx.fillStyle = TILE_COLORS[op.tile];
    if (op.tile === WATER_TILE) {
      // base water, then shoreline on unconnected edges
      ctx.fillRect(px, py, cell, cell);
      ctx.strokeStyle = "#9cc3dd";
      ctx.lineWidth = 2;
      ctx.beginPath();
      if (!spriteConnects(op.variant, "N")) { ctx.moveTo(px, py + 1); ctx.lineTo(px + cell, py + 1); }
      if (!spriteConnects(op.variant, "S")) { ctx.moveTo(px, py + cell - 1); ctx.lineTo(px + cell, py + cell - 1); }
      if (!spriteConnects(op.variant, "W")) { ctx.moveTo(px + 1, py); ctx.lineTo(px + 1, py + cell); }
      if (!spriteConnects(op.variant, "E")) { ctx.moveTo(px + cell - 1, py); ctx.lineTo(px + cell - 1, py + cell); }
      ctx.stroke();
    } else if (op.scale > 1) {
      // rocks grow with height level
      const grow = (op.scale - 1) * cell * 0.5;
      ctx.fillStyle = TILE_COLORS[0];
      ctx.fillRect(px, py, cell, cell);
      ctx.fillStyle = TILE_COLORS[op.tile];
      ctx.fillRect(px - grow, py - grow, cell + 2 * grow, cell + 2 * grow);
    } else {
      ctx.fillRect(px, py, cell, cell);
    }
  }
  for (const op of ops) {
    if (op.kind !== "outline") continue;
    const gx = (op.gridIndex % 4) * SUBGRID_SIZE * cell;
    const gy = Math.floor(op.gridIndex / 4) * SUBGRID_SIZE * cell;
    ctx.strokeStyle = op.style === "boss" ? "#c03434" : "#ffe24a";
    ctx.lineWidth = op.style === "boss" ? 3 : 2;
    ctx.strokeRect(gx + 1, gy + 1, SUBGRID_SIZE * cell - 2, SUBGRID_SIZE * cell - 2);
  }
  for (const op of ops) {
    if (op.kind !== "unit") continue;
    const px = op.x * cell;
    const py = op.y * cell;
    const r = cell * 0.38;
    ctx.beginPath();
    ctx.arc(px, py, r, 0, Math.PI * 2);
    ctx.fillStyle = UNIT_COLORS[op.unit];
    ctx.fill();
    if (op.selected) {
      ctx.strokeStyle = "#ffe24a";
      ctx.lineWidth = 2;
      ctx.stroke();
    }
    ctx.fillStyle = op.unit === "villager" ? "#222" : "#eee";
    ctx.font = `${Math.round(cell * 0.6)}px monospace`;
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(op.label, px, py);
    // hp bar
    ctx.fillStyle = "#400";
    ctx.fillRect(px - r, py - r - 4, 2 * r, 3);
    ctx.fillStyle = "#4bd34b";
    ctx.fillRect(px - r, py - r - 4, 2 * r * Math.max(0, Math.min(1, op.hpRatio)), 3);
  }
}
