// Nearest-neighbor drill-down: list GET /nearest-neighbors hits for one
// node; clicking a hit adds it to the comparison.

import type { ApiClient } from '../api.js';
import { ApiError } from '../api.js';
import type { NodeRef } from '../state.js';

export interface NeighborPanelOptions {
  api: ApiClient;
  onAdd: (ref: NodeRef) => void;
}

export interface NeighborPanel {
  root: HTMLElement;
  show(qnode: string, label: string): void;
}

export function createNeighborPanel(opts: NeighborPanelOptions): NeighborPanel {
  const root = document.createElement('aside');
  root.className = 'neighbor-panel';
  root.hidden = true;

  const title = document.createElement('h3');
  const slider = document.createElement('input');
  slider.type = 'range';
  slider.min = '1';
  slider.max = '25';
  slider.value = '5';
  const sliderLabel = document.createElement('span');
  sliderLabel.className = 'k-value';
  sliderLabel.textContent = 'k = 5';
  const list = document.createElement('ol');
  list.className = 'neighbors';
  const notice = document.createElement('p');
  notice.className = 'notice';
  notice.hidden = true;
  root.append(title, slider, sliderLabel, list, notice);

  let current: string | null = null;
  let requestSeq = 0;

  async function refresh(): Promise<void> {
    if (!current) return;
    const qnode = current;
    const k = Number(slider.value);
    sliderLabel.textContent = `k = ${k}`;
    const seq = ++requestSeq;
    try {
      const hits = await opts.api.neighbors(qnode, k);
      if (seq !== requestSeq) return;
      notice.hidden = true;
      list.textContent = '';
      for (const hit of hits) {
        const item = document.createElement('li');
        item.dataset.qnode = hit.qnode;
        item.textContent = `${hit.label || hit.qnode} (${hit.score.toFixed(3)})`;
        item.title = 'add to comparison';
        item.addEventListener('click', () =>
          opts.onAdd({ qnode: hit.qnode, label: hit.label }),
        );
        list.append(item);
      }
    } catch (err) {
      if (seq !== requestSeq) return;
      list.textContent = '';
      notice.textContent =
        err instanceof ApiError && err.status === 404
          ? 'node has no embedding'
          : 'loading neighbors failed';
      notice.hidden = false;
    }
  }

  slider.addEventListener('input', () => void refresh());

  return {
    root,
    show(qnode: string, label: string): void {
      current = qnode;
      root.hidden = false;
      title.textContent = `nearest neighbors of ${label || qnode}`;
      void refresh();
    },
  };
}
