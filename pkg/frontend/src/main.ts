// Workbench wiring: search picks nodes, the table compares them, the
// panel drills into neighbors. All state that identifies the comparison
// lives in the URL.

import { ApiClient } from './api.js';
import type { SimilarityReport } from './api.js';
import { ComparisonStore } from './state.js';
import { createSearchBox } from './components/search-box.js';
import { renderScoreTable } from './components/score-table.js';
import { createNeighborPanel } from './components/neighbor-panel.js';

export interface AppOptions {
  api?: ApiClient;
  syncUrl?: boolean;
  debounceMs?: number;
}

export function mountApp(root: HTMLElement, options: AppOptions = {}): ComparisonStore {
  const api = options.api ?? new ApiClient();
  const store = new ComparisonStore(options.syncUrl ?? true);

  const heading = document.createElement('h1');
  heading.textContent = 'node similarity workbench';
  const primaryLine = document.createElement('p');
  primaryLine.className = 'primary-line';
  const searchBox = createSearchBox({
    api,
    placeholder: 'search labels and aliases…',
    debounceMs: options.debounceMs,
    onSelect(ref) {
      if (!store.get().primary) store.setPrimary(ref);
      else store.addSecondary(ref);
    },
  });
  const tableHost = document.createElement('div');
  tableHost.className = 'table-host';
  const panel = createNeighborPanel({
    api,
    onAdd(ref) {
      store.addSecondary(ref);
    },
  });
  root.append(heading, searchBox, primaryLine, tableHost, panel.root);

  let reports: SimilarityReport[] | 'error' = [];
  let fetchSeq = 0;

  async function loadReports(): Promise<void> {
    const { primary, secondaries } = store.get();
    if (!primary || secondaries.length === 0) {
      reports = [];
      render();
      return;
    }
    const seq = ++fetchSeq;
    try {
      const fetched = await api.similarity(
        primary.qnode,
        secondaries.map((s) => s.qnode),
      );
      if (seq !== fetchSeq) return;
      reports = fetched;
      // A URL-restored state has empty labels; backfill from the reports.
      for (const report of fetched) {
        if (!primary.label) primary.label = report.labels[primary.qnode] ?? '';
        const ref = secondaries.find((s) => s.qnode === report.qnode2);
        if (ref && !ref.label) ref.label = report.labels[report.qnode2] ?? '';
      }
    } catch {
      if (seq !== fetchSeq) return;
      reports = 'error';
    }
    render();
  }

  function render(): void {
    const state = store.get();
    primaryLine.textContent = state.primary
      ? `primary: ${state.primary.label || state.primary.qnode}`
      : 'no primary node selected';
    renderScoreTable(tableHost, state, reports, {
      onSort: (alg) => store.setSortKey(alg),
      onRemove: (qnode) => store.removeSecondary(qnode),
      onInspect: (qnode) => {
        const state = store.get();
        const ref =
          state.secondaries.find((s) => s.qnode === qnode) ?? state.primary;
        panel.show(qnode, ref?.qnode === qnode ? ref.label : '');
      },
      onRetry: () => void loadReports(),
    });
  }

  let lastKey = '';
  store.subscribe((state) => {
    const key =
      (state.primary?.qnode ?? '') +
      '|' +
      state.secondaries.map((s) => s.qnode).join(',');
    if (key !== lastKey) {
      lastKey = key;
      void loadReports();
    }
    render();
  });

  // Initial paint (possibly restored from the URL).
  const initial = store.get();
  lastKey =
    (initial.primary?.qnode ?? '') +
    '|' +
    initial.secondaries.map((s) => s.qnode).join(',');
  void loadReports();
  render();
  return store;
}

declare global {
  interface Window {
    __kgsimTest?: boolean;
  }
}

if (typeof window !== 'undefined' && !window.__kgsimTest) {
  const host = document.getElementById('app');
  if (host) mountApp(host);
}
