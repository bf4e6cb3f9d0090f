// Tile palette and sprite-variant selection.
//
// Tiles render as colored cells; water picks one of 16 connection
// variants from its 4-bit neighbor mask (bit 0=N, 1=E, 2=S, 3=W) so
// adjacent water reads as one body, and rocks scale with their height
// level (1 + 0.1 * height) so clusters read as mountains.

export const TILE_COLORS: readonly string[] = [
  "#6abe30", // 0 grass
  "#d95763", // 1 flowers
  "#37946e", // 2 bushes
  "#c8a06e", // 3 path
  "#e8d282", // 4 sand
  "#847e87", // 5 rock
  "#8a6f30", // 6 fence
  "#6e5a1e", // 7 post
  "#1d6b33", // 8 tree
  "#3978a8", // 9 water
  "#9a5b3c", // 10 house door
  "#b8864e", // 11 house window
  "#a0522d", // 12 house roof
  "#f0c94a", // 13 treasure ball
  "#8fce57", // 14 tall grass
  "#5d4a3a", // 15 dead tree
];

export const BIT_N = 1;
export const BIT_E = 2;
export const BIT_S = 4;
export const BIT_W = 8;

export type Direction = "N" | "E" | "S" | "W";

const DIRECTION_BITS: Record<Direction, number> = { N: BIT_N, E: BIT_E, S: BIT_S, W: BIT_W };

/** Water sprite variant: one per 4-bit connection mask. */
export function waterSpriteVariant(mask: number): number {
  return mask & 0xf;
}

/** Whether a water sprite variant visually connects through an edge. */
export function spriteConnects(variant: number, direction: Direction): boolean {
  return (variant & DIRECTION_BITS[direction]) !== 0;
}

/** Two variants on adjacent cells join when both open the shared edge. */
export function edgesJoin(variantA: number, aToB: Direction, variantB: number): boolean {
  const opposite: Record<Direction, Direction> = { N: "S", S: "N", E: "W", W: "E" };
  return spriteConnects(variantA, aToB) && spriteConnects(variantB, opposite[aToB]);
}

/** Rock render scale from its height level. */
export function rockScale(height: number): number {
  return 1 + 0.1 * height;
}
