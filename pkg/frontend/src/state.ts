// Comparison state with URL-querystring persistence.
//
// The URL is the source of truth for which nodes are compared
// (?primary=Q_x&secondaries=Q_a,Q_b&sort=class), so a refresh or a shared
// link reconstructs the same table. Labels and scores are re-fetched.

import type { AlgorithmName } from './api.js';
import { ALGORITHMS } from './api.js';

export interface NodeRef {
  qnode: string;
  label: string;
}

export interface ComparisonState {
  primary: NodeRef | null;
  secondaries: NodeRef[];
  sortKey: AlgorithmName | null;
}

export type Listener = (state: ComparisonState) => void;

export function emptyState(): ComparisonState {
  return { primary: null, secondaries: [], sortKey: null };
}

export function serializeState(state: ComparisonState): string {
  const params = new URLSearchParams();
  if (state.primary) params.set('primary', state.primary.qnode);
  if (state.secondaries.length) {
    params.set('secondaries', state.secondaries.map((s) => s.qnode).join(','));
  }
  if (state.sortKey) params.set('sort', state.sortKey);
  return params.toString();
}

export function parseState(query: string): ComparisonState {
  const params = new URLSearchParams(query);
  const primaryId = params.get('primary');
  const primary = primaryId ? { qnode: primaryId, label: '' } : null;
  const secondaries = (params.get('secondaries') ?? '')
    .split(',')
    .filter((id) => id && id !== primaryId)
    .map((qnode) => ({ qnode, label: '' }));
  const sort = params.get('sort');
  const sortKey = ALGORITHMS.includes(sort as AlgorithmName)
    ? (sort as AlgorithmName)
    : null;
  return { primary, secondaries: dedupe(secondaries), sortKey };
}

function dedupe(refs: NodeRef[]): NodeRef[] {
  const seen = new Set<string>();
  return refs.filter((r) => !seen.has(r.qnode) && seen.add(r.qnode) !== undefined);
}

export class ComparisonStore {
  private state = emptyState();
  private listeners: Listener[] = [];

  constructor(private syncUrl = true) {
    if (this.syncUrl) {
      this.state = parseState(window.location.search);
      window.addEventListener('popstate', () => {
        this.state = parseState(window.location.search);
        this.notify();
      });
    }
  }

  get(): ComparisonState {
    return this.state;
  }

  setPrimary(ref: NodeRef): void {
    const secondaries = this.state.secondaries.filter((s) => s.qnode !== ref.qnode);
    this.update({ ...this.state, primary: ref, secondaries });
  }

  /** Appends once; the primary never becomes a secondary. */
  addSecondary(ref: NodeRef): void {
    if (this.state.primary?.qnode === ref.qnode) return;
    if (this.state.secondaries.some((s) => s.qnode === ref.qnode)) return;
    this.update({
      ...this.state,
      secondaries: [...this.state.secondaries, ref],
    });
  }

  removeSecondary(qnode: string): void {
    this.update({
      ...this.state,
      secondaries: this.state.secondaries.filter((s) => s.qnode !== qnode),
    });
  }

  setSortKey(key: AlgorithmName | null): void {
    this.update({ ...this.state, sortKey: key });
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private update(next: ComparisonState): void {
    this.state = next;
    if (this.syncUrl) {
      const query = serializeState(next);
      const url = query ? `?${query}` : window.location.pathname;
      window.history.pushState(null, '', url);
    }
    this.notify();
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }
}
