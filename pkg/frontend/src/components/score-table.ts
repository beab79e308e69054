// One row per secondary node, one column per algorithm; header clicks
// re-sort descending by that algorithm with nulls last.

import type { AlgorithmName, SimilarityReport } from '../api.js';
import { ALGORITHMS } from '../api.js';
import type { ComparisonState } from '../state.js';
import { formatScore, fullPrecision, orderRows } from '../table.js';

export interface ScoreTableOptions {
  onSort: (key: AlgorithmName) => void;
  onRemove: (qnode: string) => void;
  onInspect: (qnode: string) => void;
  onRetry?: () => void;
}

function cell(tag: 'th' | 'td', text: string): HTMLTableCellElement {
  const el = document.createElement(tag);
  el.textContent = text;
  return el;
}

export function renderScoreTable(
  container: HTMLElement,
  state: ComparisonState,
  reports: SimilarityReport[] | 'error',
  opts: ScoreTableOptions,
): void {
  container.textContent = '';
  if (!state.primary || state.secondaries.length === 0) {
    const hint = document.createElement('p');
    hint.className = 'hint';
    hint.textContent = state.primary
      ? 'add secondary nodes to compare'
      : 'search for a primary node to start';
    container.append(hint);
    return;
  }
  if (reports === 'error') {
    const retry = document.createElement('button');
    retry.className = 'retry';
    retry.textContent = 'loading scores failed — retry';
    retry.addEventListener('click', () => opts.onRetry?.());
    container.append(retry);
    return;
  }

  const table = document.createElement('table');
  table.className = 'score-table';
  const thead = document.createElement('thead');
  const head = document.createElement('tr');
  head.append(cell('th', `vs ${state.primary.label || state.primary.qnode}`));
  for (const alg of ALGORITHMS) {
    const th = cell('th', alg);
    th.classList.add('sortable');
    if (state.sortKey === alg) th.classList.add('sorted');
    th.dataset.alg = alg;
    th.addEventListener('click', () => opts.onSort(alg));
    head.append(th);
  }
  head.append(cell('th', ''));
  thead.append(head);

  const body = document.createElement('tbody');
  for (const report of orderRows(reports, state.sortKey)) {
    const row = document.createElement('tr');
    row.dataset.qnode = report.qnode2;
    const name = cell('td', '');
    const open = document.createElement('a');
    open.href = '#';
    open.textContent = report.labels[report.qnode2] || report.qnode2;
    open.title = 'show nearest neighbors';
    open.addEventListener('click', (ev) => {
      ev.preventDefault();
      opts.onInspect(report.qnode2);
    });
    name.append(open);
    row.append(name);
    for (const alg of ALGORITHMS) {
      const td = cell('td', formatScore(report.scores[alg]));
      td.title = fullPrecision(report.scores[alg]);
      row.append(td);
    }
    const actions = cell('td', '');
    const remove = document.createElement('button');
    remove.textContent = '×';
    remove.title = 'remove row';
    remove.addEventListener('click', () => opts.onRemove(report.qnode2));
    actions.append(remove);
    row.append(actions);
    body.append(row);
  }
  table.append(thead, body);
  container.append(table);
}
