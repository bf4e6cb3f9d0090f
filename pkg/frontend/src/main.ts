// Entry point: wires the canvas, the word-bank panel, and the 5 Hz poll.

import { SessionApi } from "./api.js";
import { buildScene, drawScene } from "./renderer.js";
import { ViewModel } from "./viewmodel.js";
import { WORLD_SIZE } from "./types.js";

const CELL = 16;
const POLL_MS = 200; // 5 Hz

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function start(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const apiBase = params.get("api") ?? "http://127.0.0.1:8000";
  const seed = Number(params.get("seed") ?? "0");

  const canvas = el<HTMLCanvasElement>("world");
  canvas.width = WORLD_SIZE * CELL;
  canvas.height = WORLD_SIZE * CELL;
  const ctx = canvas.getContext("2d")!;
  const status = el<HTMLDivElement>("status");
  const toast = el<HTMLDivElement>("toast");
  const wordPanel = el<HTMLDivElement>("words");
  const promptBox = el<HTMLDivElement>("prompt");
  const terraformButton = el<HTMLButtonElement>("terraform");
  const submitButton = el<HTMLButtonElement>("submit");

  const vm = new ViewModel();
  let pickingGrid = false;
  const api = await SessionApi.create(apiBase, { seed, realtime: true });

  function cellFromEvent(event: MouseEvent): [number, number] {
    const rect = canvas.getBoundingClientRect();
    const x = Math.floor(((event.clientX - rect.left) / rect.width) * WORLD_SIZE);
    const y = Math.floor(((event.clientY - rect.top) / rect.height) * WORLD_SIZE);
    return [Math.max(0, Math.min(WORLD_SIZE - 1, x)), Math.max(0, Math.min(WORLD_SIZE - 1, y))];
  }

  function redraw(): void {
    if (!vm.snapshot) return;
    drawScene(
      ctx,
      buildScene(vm.snapshot, { gridIndex: vm.selectedGrid, villagerId: vm.selectedVillager }),
      CELL,
    );
    const s = vm.snapshot;
    status.textContent =
      `tick ${s.tick}  day ${s.day_index}  next boss ${s.boss_timer_remaining_s.toFixed(0)}s  ` +
      `villagers ${s.villagers.length}  outcome ${s.outcome}`;
    toast.textContent = vm.toast ?? "";
    renderWordPanel();
  }

  function renderWordPanel(): void {
    wordPanel.replaceChildren(
      ...vm.wordPanel().map((entry) => {
        const button = document.createElement("button");
        button.textContent = `${entry.word} ×${entry.owned}`;
        button.disabled = entry.available <= 0;
        button.onclick = () => {
          vm.addPromptWord(entry.word);
          redraw();
        };
        return button;
      }),
    );
    promptBox.replaceChildren(
      ...vm.promptWords.map((word, index) => {
        const chip = document.createElement("button");
        chip.textContent = word;
        chip.title = "remove";
        chip.onclick = () => {
          vm.removePromptWord(index);
          redraw();
        };
        return chip;
      }),
    );
    submitButton.disabled = vm.terraformRequest() === null;
  }

  terraformButton.onclick = () => {
    pickingGrid = true;
    vm.toast = "pick a sub-grid to terraform";
    redraw();
  };

  submitButton.onclick = async () => {
    const request = vm.terraformRequest();
    if (!request) return;
    vm.terraformPending = true;
    const response = await api.terraform(request);
    if (response.ok) {
      vm.resolveTerraform(response.status);
    } else {
      let message = `terraform failed (${response.status})`;
      try {
        const body = await response.json();
        message = body?.error?.message ?? message;
      } catch {
        // keep default message
      }
      vm.resolveTerraform(response.status, message);
    }
    redraw();
  };

  canvas.onclick = async (event) => {
    const cell = cellFromEvent(event);
    if (pickingGrid) {
      vm.selectGridAt(cell);
      pickingGrid = false;
      vm.toast = null;
      redraw();
      return;
    }
    if (!vm.snapshot) return;
    const villager = vm.snapshot.villagers.find(
      (v) => Math.floor(v.x) === cell[0] && Math.floor(v.y) === cell[1],
    );
    if (villager) {
      vm.selectedVillager = villager.id;
      redraw();
      return;
    }
    const command = vm.commandForClick(cell);
    if (command) {
      const response = await api.command(command);
      if (!response.ok) {
        try {
          const body = await response.json();
          vm.toast = body?.error?.message ?? `command failed (${response.status})`;
        } catch {
          vm.toast = `command failed (${response.status})`;
        }
      }
      redraw();
    }
  };

  setInterval(async () => {
    try {
      vm.applySnapshot(await api.state());
      redraw();
    } catch {
      status.textContent = "server unreachable";
    }
  }, POLL_MS);
}

start().catch((error) => {
  document.body.textContent = `failed to start: ${error?.message ?? error}`;
});
