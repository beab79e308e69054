// Typeahead over GET /search; selecting a suggestion hands a node to the
// caller (which decides primary vs secondary).

import type { ApiClient, SearchHit } from '../api.js';
import { debounce } from '../debounce.js';
import type { NodeRef } from '../state.js';

export interface SearchBoxOptions {
  api: ApiClient;
  placeholder: string;
  onSelect: (ref: NodeRef) => void;
  debounceMs?: number;
}

export function createSearchBox(opts: SearchBoxOptions): HTMLElement {
  const root = document.createElement('div');
  root.className = 'search-box';

  const input = document.createElement('input');
  input.type = 'search';
  input.placeholder = opts.placeholder;

  const list = document.createElement('ul');
  list.className = 'suggestions';
  list.hidden = true;

  const banner = document.createElement('div');
  banner.className = 'error-banner';
  banner.hidden = true;

  let requestSeq = 0;

  function render(hits: SearchHit[]): void {
    list.textContent = '';
    list.hidden = hits.length === 0;
    for (const hit of hits) {
      const item = document.createElement('li');
      item.dataset.qnode = hit.qnode;
      const label = document.createElement('strong');
      label.textContent = hit.label || hit.qnode;
      const id = document.createElement('span');
      id.className = 'qnode-id';
      id.textContent = ` ${hit.qnode}`;
      item.append(label, id);
      if (hit.description) {
        const desc = document.createElement('em');
        desc.textContent = ` ${hit.description}`;
        item.append(desc);
      }
      item.addEventListener('click', () => {
        opts.onSelect({ qnode: hit.qnode, label: hit.label });
        input.value = '';
        list.hidden = true;
      });
      list.append(item);
    }
  }

  async function runSearch(query: string): Promise<void> {
    const seq = ++requestSeq;
    try {
      const hits = await opts.api.search(query);
      if (seq !== requestSeq) return; // superseded by a newer keystroke
      banner.hidden = true;
      render(hits);
    } catch {
      if (seq !== requestSeq) return;
      banner.textContent = 'search failed; check that the service is up';
      banner.hidden = false;
    }
  }

  const scheduled = debounce(runSearch, opts.debounceMs ?? 200);
  input.addEventListener('input', () => {
    const query = input.value.trim();
    if (!query) {
      requestSeq++; // cancel any in-flight result
      list.hidden = true;
      return;
    }
    scheduled(query);
  });

  root.append(input, banner, list);
  return root;
}
