import { beforeEach, describe, expect, it } from 'vitest';

import {
  ComparisonStore,
  emptyState,
  parseState,
  serializeState,
} from '../src/state.js';

describe('serializeState / parseState', () => {
  it('round-trips a full state', () => {
    const state = {
      primary: { qnode: 'Q_motorcycle', label: 'motorcycle' },
      secondaries: [
        { qnode: 'Q_bus', label: 'bus' },
        { qnode: 'Q_cheese', label: 'cheese' },
      ],
      sortKey: 'class' as const,
    };
    const parsed = parseState(serializeState(state));
    expect(parsed.primary?.qnode).toBe('Q_motorcycle');
    expect(parsed.secondaries.map((s) => s.qnode)).toEqual(['Q_bus', 'Q_cheese']);
    expect(parsed.sortKey).toBe('class');
  });

  it('round-trips the empty state', () => {
    expect(parseState(serializeState(emptyState()))).toEqual(emptyState());
  });

  it('drops duplicates and the primary from secondaries', () => {
    const parsed = parseState(
      'primary=Q_a&secondaries=Q_a,Q_b,Q_b,Q_c&sort=transe',
    );
    expect(parsed.secondaries.map((s) => s.qnode)).toEqual(['Q_b', 'Q_c']);
  });

  it('ignores unknown sort keys', () => {
    expect(parseState('sort=bogus').sortKey).toBeNull();
  });
});

describe('ComparisonStore', () => {
  let store: ComparisonStore;

  beforeEach(() => {
    store = new ComparisonStore(false);
  });

  it('never duplicates a secondary', () => {
    store.setPrimary({ qnode: 'Q_m', label: 'm' });
    store.addSecondary({ qnode: 'Q_b', label: 'b' });
    store.addSecondary({ qnode: 'Q_b', label: 'b' });
    expect(store.get().secondaries).toHaveLength(1);
  });

  it('never lets the primary appear as a secondary', () => {
    store.setPrimary({ qnode: 'Q_m', label: 'm' });
    store.addSecondary({ qnode: 'Q_m', label: 'm' });
    expect(store.get().secondaries).toHaveLength(0);

    store.addSecondary({ qnode: 'Q_b', label: 'b' });
    store.setPrimary({ qnode: 'Q_b', label: 'b' });
    expect(store.get().primary?.qnode).toBe('Q_b');
    expect(store.get().secondaries).toHaveLength(0);
  });

  it('removes secondaries by id', () => {
    store.setPrimary({ qnode: 'Q_m', label: 'm' });
    store.addSecondary({ qnode: 'Q_b', label: 'b' });
    store.addSecondary({ qnode: 'Q_c', label: 'c' });
    store.removeSecondary('Q_b');
    expect(store.get().secondaries.map((s) => s.qnode)).toEqual(['Q_c']);
  });

  it('notifies subscribers on every change', () => {
    const seen: number[] = [];
    store.subscribe((s) => seen.push(s.secondaries.length));
    store.setPrimary({ qnode: 'Q_m', label: 'm' });
    store.addSecondary({ qnode: 'Q_b', label: 'b' });
    expect(seen).toEqual([0, 1]);
  });

  it('writes the URL when syncing is on', () => {
    const synced = new ComparisonStore(true);
    synced.setPrimary({ qnode: 'Q_m', label: 'm' });
    synced.addSecondary({ qnode: 'Q_b', label: 'b' });
    synced.setSortKey('class');
    expect(window.location.search).toContain('primary=Q_m');
    expect(window.location.search).toContain('secondaries=Q_b');
    expect(window.location.search).toContain('sort=class');
  });
});
