// Client-side state: latest snapshot plus selection being composed.
//
// The in-progress word list can never exceed the inventory (the engine
// would 409 anyway; the panel simply refuses the click), and everything
// drawn derives from the latest snapshot — the only optimistic state is
// the selection itself.

import { CommandRequest, StateSnapshot, subgridIndex, TerraformRequest } from "./types.js";

export interface WordPanelEntry {
  word: string;
  /** count still available = inventory minus in-progress usage */
  available: number;
  owned: number;
}

export class ViewModel {
  snapshot: StateSnapshot | null = null;
  selectedGrid: number | null = null;
  selectedVillager: number | null = null;
  promptWords: string[] = [];
  terraformPending = false;
  toast: string | null = null;

  applySnapshot(snapshot: StateSnapshot): void {
    this.snapshot = snapshot;
    if (this.selectedVillager !== null && !snapshot.villagers.some((v) => v.id === this.selectedVillager)) {
      this.selectedVillager = null;
    }
    this.prunePrompt();
  }

  /** Drop prompt words the inventory no longer covers. */
  private prunePrompt(): void {
    if (!this.snapshot) return;
    const budget: Record<string, number> = { ...this.snapshot.inventory };
    this.promptWords = this.promptWords.filter((word) => {
      if ((budget[word] ?? 0) > 0) {
        budget[word] -= 1;
        return true;
      }
      return false;
    });
  }

  usedCount(word: string): number {
    return this.promptWords.filter((w) => w === word).length;
  }

  /** Word-bank panel rows; owned counts always mirror the snapshot. */
  wordPanel(): WordPanelEntry[] {
    if (!this.snapshot) return [];
    return Object.entries(this.snapshot.inventory)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([word, owned]) => ({ word, owned, available: owned - this.usedCount(word) }));
  }

  addPromptWord(word: string): boolean {
    if (!this.snapshot) return false;
    const owned = this.snapshot.inventory[word] ?? 0;
    if (owned - this.usedCount(word) <= 0) return false;
    this.promptWords.push(word);
    return true;
  }

  removePromptWord(index: number): void {
    this.promptWords.splice(index, 1);
  }

  /** Request body for the terraform submit, or null when blocked client-side. */
  terraformRequest(): TerraformRequest | null {
    if (this.selectedGrid === null || this.promptWords.length === 0 || this.terraformPending) {
      return null;
    }
    return { grid_index: this.selectedGrid, words: [...this.promptWords] };
  }

  /** 2xx clears the composed prompt; errors keep it so the player can retry. */
  resolveTerraform(status: number, errorMessage?: string): void {
    this.terraformPending = false;
    if (status >= 200 && status < 300) {
      this.promptWords = [];
      this.selectedGrid = null;
      this.toast = null;
    } else {
      this.toast = errorMessage ?? `terraform failed (${status})`;
    }
  }

  /** Map a world click plus the current selection onto a command body. */
  commandForClick(cell: [number, number]): CommandRequest | null {
    if (!this.snapshot || this.selectedVillager === null) return null;
    const villager = this.snapshot.villagers.find((v) => v.id === this.selectedVillager);
    if (!villager) return null;
    const [x, y] = cell;
    const monster = this.snapshot.monsters.find(
      (m) => Math.floor(m.x) === x && Math.floor(m.y) === y,
    );
    if (monster && villager.kind !== "worker") {
      return { villager_id: villager.id, task: "attack", args: { monster_id: monster.id } };
    }
    const tile = this.snapshot.world[y][x];
    if (tile === 8 && villager.kind === "worker") {
      return { villager_id: villager.id, task: "chop", args: { cell } };
    }
    if (tile === 13) {
      return { villager_id: villager.id, task: "collect", args: { cell } };
    }
    return { villager_id: villager.id, task: "move", args: { cell } };
  }

  selectGridAt(cell: [number, number]): void {
    this.selectedGrid = subgridIndex(cell[0], cell[1]);
  }
}
