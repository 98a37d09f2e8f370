/* Filtering over catalog cards: AND across facets, OR within one facet,
 * plus a free-text query over title and keywords. Pure functions only;
 * the state also round-trips through the URL hash so sessions can be
 * shared by link. */

import type { Card, FacetsBundle } from "./types.js";

export interface FilterState {
  selections: Map<string, Set<string>>;
  query: string;
}

export function emptyState(): FilterState {
  return { selections: new Map(), query: "" };
}

export function cloneState(state: FilterState): FilterState {
  const selections = new Map<string, Set<string>>();
  for (const [facet, ids] of state.selections) {
    selections.set(facet, new Set(ids));
  }
  return { selections, query: state.query };
}

/* Add or remove one value; empty facet sets are dropped so an empty
 * state compares and encodes cleanly. */
export function toggleValue(state: FilterState, facet: string, valueId: string): FilterState {
  const next = cloneState(state);
  const ids = next.selections.get(facet) ?? new Set<string>();
  if (ids.has(valueId)) {
    ids.delete(valueId);
  } else {
    ids.add(valueId);
  }
  if (ids.size > 0) {
    next.selections.set(facet, ids);
  } else {
    next.selections.delete(facet);
  }
  return next;
}

export function isSelected(state: FilterState, facet: string, valueId: string): boolean {
  return state.selections.get(facet)?.has(valueId) ?? false;
}

function matchesFacets(card: Card, state: FilterState): boolean {
  for (const [facet, wanted] of state.selections) {
    if (wanted.size === 0) continue;
    const own = card.facet_values[facet] ?? [];
    if (!own.some((id) => wanted.has(id))) return false;
  }
  return true;
}

function matchesQuery(card: Card, query: string): boolean {
  const needle = query.trim().toLowerCase();
  if (!needle) return true;
  const haystack = [card.factual.title ?? "", ...card.factual.keywords]
    .join(" ")
    .toLowerCase();
  return haystack.includes(needle);
}

export function applyFilters(cards: Card[], state: FilterState): Card[] {
  return cards.filter((card) => matchesFacets(card, state) && matchesQuery(card, state.query));
}

/* Count shown next to a facet value: the size of the result set if that
 * value were additionally selected on top of the current state. */
export function liveCounts(
  cards: Card[],
  facets: FacetsBundle,
  state: FilterState,
): Map<string, Map<string, number>> {
  const counts = new Map<string, Map<string, number>>();
  for (const [facet, values] of Object.entries(facets.facets)) {
    const perValue = new Map<string, number>();
    for (const value of values) {
      const withValue = cloneState(state);
      const ids = withValue.selections.get(facet) ?? new Set<string>();
      ids.add(value.value_id);
      withValue.selections.set(facet, ids);
      perValue.set(value.value_id, applyFilters(cards, withValue).length);
    }
    counts.set(facet, perValue);
  }
  return counts;
}

/* Hash codec. Layout: one "s.<facet>" parameter per selected facet with
 * comma-joined value ids, plus "q" for the text query. Facets and ids
 * are emitted sorted so equal states encode identically. */
export function encodeHash(state: FilterState): string {
  const params = new URLSearchParams();
  for (const facet of [...state.selections.keys()].sort()) {
    const ids = [...(state.selections.get(facet) ?? [])].sort();
    if (ids.length > 0) params.set(`s.${facet}`, ids.join(","));
  }
  if (state.query.trim()) params.set("q", state.query.trim());
  const encoded = params.toString();
  return encoded ? `#${encoded}` : "";
}

export function decodeHash(hash: string): FilterState {
  const state = emptyState();
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  if (!raw) return state;
  const params = new URLSearchParams(raw);
  for (const [key, value] of params) {
    if (key === "q") {
      state.query = value;
    } else if (key.startsWith("s.")) {
      const ids = value.split(",").filter((id) => id.length > 0);
      if (ids.length > 0) state.selections.set(key.slice(2), new Set(ids));
    }
  }
  return state;
}
