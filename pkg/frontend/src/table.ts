// Pure row-ordering and formatting logic for the score table.

import type { AlgorithmName, SimilarityReport } from './api.js';

/**
 * Descending by the sort column; null/absent scores all sort after any
 * number; ties keep insertion order (Array.sort is stable).
 */
export function orderRows(
  reports: SimilarityReport[],
  sortKey: AlgorithmName | null,
): SimilarityReport[] {
  if (!sortKey) return reports.slice();
  const value = (r: SimilarityReport) => {
    const v = r.scores[sortKey];
    return v === null || v === undefined ? -Infinity : v;
  };
  return reports.slice().sort((a, b) => value(b) - value(a));
}

/** Two decimals for display; an em dash for missing scores. */
export function formatScore(value: number | null | undefined): string {
  if (value === null || value === undefined) return '—';
  return value.toFixed(2);
}

/** Full precision for hover tooltips. */
export function fullPrecision(value: number | null | undefined): string {
  if (value === null || value === undefined) return 'not available';
  return String(value);
}
