// Typed client for the three GET endpoints of the similarity service.

export type AlgorithmName = 'class' | 'transe' | 'complex' | 'text';

export const ALGORITHMS: AlgorithmName[] = ['class', 'transe', 'complex', 'text'];

export interface SimilarityReport {
  qnode1: string;
  qnode2: string;
  scores: Partial<Record<AlgorithmName, number | null>>;
  labels: Record<string, string>;
  shared_parents?: { qnode: string; label: string; idf: number }[];
}

export interface NeighborHit {
  qnode: string;
  score: number;
  label: string;
}

export interface SearchHit {
  qnode: string;
  label: string;
  description: string;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function getJson<T>(url: string): Promise<T> {
  const resp = await fetch(url);
  const body = await resp.json();
  if (!resp.ok) {
    throw new ApiError(resp.status, body?.error ?? resp.statusText);
  }
  return body as T;
}

export class ApiClient {
  constructor(private baseUrl = '') {}

  search(query: string, limit = 8): Promise<SearchHit[]> {
    const q = encodeURIComponent(query);
    return getJson(`${this.baseUrl}/search?q=${q}&limit=${limit}`);
  }

  similarity(q1: string, q2: string[]): Promise<SimilarityReport[]> {
    const ids = q2.map(encodeURIComponent).join(',');
    return getJson(`${this.baseUrl}/similarity?q1=${encodeURIComponent(q1)}&q2=${ids}`);
  }

  neighbors(qnode: string, k: number): Promise<NeighborHit[]> {
    return getJson(
      `${this.baseUrl}/nearest-neighbors?qnode=${encodeURIComponent(qnode)}&k=${k}`,
    );
  }
}
