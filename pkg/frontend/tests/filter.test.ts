import { describe, expect, it } from "vitest";

import {
  applyFilters,
  decodeHash,
  emptyState,
  encodeHash,
  liveCounts,
  toggleValue,
} from "../src/filter.js";
import { catalogFixture, facetsFixture, facetValue } from "./helpers.js";

const catalog = catalogFixture();
const facets = facetsFixture();

const ids = (cards: { item_id: string }[]) => cards.map((c) => c.item_id).sort();

describe("facet filtering", () => {
  it("keeps every card when nothing is selected", () => {
    expect(applyFilters(catalog.cards, emptyState())).toHaveLength(catalog.cards.length);
  });

  it("selecting one Period value keeps exactly the items the facet index lists", () => {
    const value = facetValue(facets, "period", "xvii-secolo");
    const state = toggleValue(emptyState(), "period", "xvii-secolo");
    const result = applyFilters(catalog.cards, state);
    expect(result).toHaveLength(value.count);
    expect(ids(result)).toEqual([...value.item_ids].sort());
  });

  it("agrees with the facet index item lists for every single-value selection", () => {
    for (const [facet, values] of Object.entries(facets.facets)) {
      for (const value of values) {
        const state = toggleValue(emptyState(), facet, value.value_id);
        const result = applyFilters(catalog.cards, state);
        expect(ids(result), `${facet}=${value.value_id}`).toEqual([...value.item_ids].sort());
        expect(result, `${facet}=${value.value_id} count`).toHaveLength(value.count);
      }
    }
  });

  it("intersects selections made in different facets", () => {
    const pittura = facetValue(facets, "typology", "pittura");
    const didone = facetValue(facets, "category", "didone");
    const expected = pittura.item_ids.filter((id) => didone.item_ids.includes(id)).sort();

    let state = toggleValue(emptyState(), "typology", "pittura");
    state = toggleValue(state, "category", "didone");
    expect(ids(applyFilters(catalog.cards, state))).toEqual(expected);
  });

  it("unions selections inside one facet", () => {
    const affresco = facetValue(facets, "typology", "affresco");
    const scultura = facetValue(facets, "typology", "scultura");
    const expected = [...new Set([...affresco.item_ids, ...scultura.item_ids])].sort();

    let state = toggleValue(emptyState(), "typology", "affresco");
    state = toggleValue(state, "typology", "scultura");
    expect(ids(applyFilters(catalog.cards, state))).toEqual(expected);
  });

  it("matches the text query against titles and keywords, case-insensitive", () => {
    const expected = catalog.cards
      .filter((card) =>
        [card.factual.title ?? "", ...card.factual.keywords]
          .join(" ")
          .toLowerCase()
          .includes("didone"),
      )
      .map((c) => c.item_id)
      .sort();
    expect(expected.length).toBeGreaterThan(0);

    const state = { ...emptyState(), query: "DiDoNe" };
    expect(ids(applyFilters(catalog.cards, state))).toEqual(expected);
  });

  it("is order-independent in the selection sequence", () => {
    const a1 = toggleValue(
      toggleValue(toggleValue(emptyState(), "typology", "pittura"), "category", "didone"),
      "interpreter",
      "rossi-paola",
    );
    const a2 = toggleValue(
      toggleValue(toggleValue(emptyState(), "interpreter", "rossi-paola"), "typology", "pittura"),
      "category",
      "didone",
    );
    expect(ids(applyFilters(catalog.cards, a1))).toEqual(ids(applyFilters(catalog.cards, a2)));
  });

  it("toggling a value twice removes it again", () => {
    let state = toggleValue(emptyState(), "typology", "pittura");
    state = toggleValue(state, "typology", "pittura");
    expect(state.selections.size).toBe(0);
    expect(applyFilters(catalog.cards, state)).toHaveLength(catalog.cards.length);
  });
});

describe("live counts", () => {
  const states = [
    emptyState(),
    toggleValue(emptyState(), "period", "xvii-secolo"),
    toggleValue(toggleValue(emptyState(), "typology", "pittura"), "category", "didone"),
    { ...toggleValue(emptyState(), "source_type", "fonteClassica"), query: "didone" },
  ];

  it("every shown count equals the size of the would-be result set", () => {
    for (const state of states) {
      const counts = liveCounts(catalog.cards, facets, state);
      for (const [facet, values] of Object.entries(facets.facets)) {
        for (const value of values) {
          const withValue = toggleValue(state, facet, value.value_id);
          const expected = state.selections.get(facet)?.has(value.value_id)
            ? undefined // toggling off, not the "additional selection" case
            : applyFilters(catalog.cards, withValue).length;
          if (expected !== undefined) {
            expect(counts.get(facet)?.get(value.value_id), `${facet}=${value.value_id}`).toBe(
              expected,
            );
          }
        }
      }
    }
  });

  it("equals the facet index counts when nothing is selected", () => {
    const counts = liveCounts(catalog.cards, facets, emptyState());
    for (const [facet, values] of Object.entries(facets.facets)) {
      for (const value of values) {
        expect(counts.get(facet)?.get(value.value_id), `${facet}=${value.value_id}`).toBe(
          value.count,
        );
      }
    }
  });
});

describe("hash codec", () => {
  it("round-trips a populated state", () => {
    let state = toggleValue(emptyState(), "typology", "pittura");
    state = toggleValue(state, "typology", "scultura");
    state = toggleValue(state, "category", "didone");
    state = { ...state, query: "morte di Didone" };

    const decoded = decodeHash(encodeHash(state));
    expect(decoded.query).toBe("morte di Didone");
    expect([...decoded.selections.keys()].sort()).toEqual(["category", "typology"]);
    expect([...(decoded.selections.get("typology") ?? [])].sort()).toEqual([
      "pittura",
      "scultura",
    ]);
    expect([...(decoded.selections.get("category") ?? [])]).toEqual(["didone"]);
  });

  it("encodes the empty state as an empty string", () => {
    expect(encodeHash(emptyState())).toBe("");
  });

  it("encodes equal states identically regardless of insertion order", () => {
    const a = toggleValue(toggleValue(emptyState(), "typology", "pittura"), "category", "didone");
    const b = toggleValue(toggleValue(emptyState(), "category", "didone"), "typology", "pittura");
    expect(encodeHash(a)).toBe(encodeHash(b));
  });

  it("ignores junk and yields the empty state", () => {
    expect(decodeHash("").selections.size).toBe(0);
    expect(decodeHash("#").selections.size).toBe(0);
    const junk = decodeHash("#nonsense=1&s.=,,");
    expect(junk.selections.size).toBe(0);
    expect(junk.query).toBe("");
  });
});
