/* Faceted catalog view: a sidebar of facet values with live counts and
 * one card per museal object, its metadata grouped under the three
 * model-level headings. */

import type { Card, CatalogBundle, FacetsBundle, PersonRef } from "./types.js";
import {
  FilterState,
  applyFilters,
  isSelected,
  liveCounts,
  toggleValue,
} from "./filter.js";

export const LEVEL_HEADINGS: Record<string, string> = {
  factual: "Factual Data",
  assertion: "Assertion",
  provenance: "Provenance",
};

export const FACET_TITLES: Record<string, string> = {
  typology: "Typology",
  period: "Period",
  category: "Category",
  source_type: "Source type",
  interpreter: "Interpreter",
};

export const PERSEUS_LINK_TEXT = "Go to the Perseus resource of this reference";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function field(label: string, value: string): HTMLElement {
  const row = el("div", "field");
  row.appendChild(el("span", "field-label", label));
  row.appendChild(el("span", "field-value", value));
  return row;
}

function personSpan(person: PersonRef): HTMLElement {
  const span = el("span", "person", person.label);
  if (person.viaf) {
    const badge = el("a", "viaf-badge", "VIAF");
    badge.href = `https://viaf.org/viaf/${encodeURIComponent(person.viaf)}`;
    badge.target = "_blank";
    badge.rel = "noopener";
    span.appendChild(document.createTextNode(" "));
    span.appendChild(badge);
  }
  return span;
}

function factualSection(card: Card): HTMLElement {
  const section = el("section", "level level-factual");
  section.appendChild(el("h4", "level-heading", LEVEL_HEADINGS["factual"]));
  const f = card.factual;
  if (f.author) {
    const row = el("div", "field");
    row.appendChild(el("span", "field-label", "Author"));
    row.appendChild(personSpan(f.author));
    section.appendChild(row);
  }
  if (f.typology.length > 0) section.appendChild(field("Typology", f.typology.join("; ")));
  const colloc = [f.collocation.institution, f.collocation.city, f.collocation.country]
    .filter((part): part is string => !!part)
    .join(", ");
  if (colloc) section.appendChild(field("Collocation", colloc));
  if (f.period) section.appendChild(field("Period", f.period.label));
  if (f.keywords.length > 0) section.appendChild(field("Keywords", f.keywords.join(", ")));
  if (f.description) section.appendChild(field("Description", f.description));
  if (f.image) {
    const img = el("img", "artwork-image");
    img.src = f.image;
    img.alt = f.title ?? "";
    section.appendChild(img);
  }
  if (f.see_also) {
    const link = el("a", "see-also", "Museum record");
    link.href = f.see_also;
    link.target = "_blank";
    link.rel = "noopener";
    section.appendChild(link);
  }
  return section;
}

function assertionSection(card: Card): HTMLElement {
  const section = el("section", "level level-assertion");
  section.appendChild(el("h4", "level-heading", LEVEL_HEADINGS["assertion"]));
  const a = card.assertion;
  if (a.categories.length > 0) section.appendChild(field("Theme", a.categories.join("; ")));
  for (const citation of a.canonical_citations) {
    const row = el("div", "field citation");
    row.appendChild(el("span", "field-label", "Canonical citation"));
    row.appendChild(el("span", "field-value", citation.label));
    if (citation.perseus_url) {
      const link = el("a", "perseus-link", PERSEUS_LINK_TEXT);
      link.href = citation.perseus_url;
      link.target = "_blank";
      link.rel = "noopener";
      row.appendChild(link);
    }
    section.appendChild(row);
  }
  for (const ref of a.general_references) {
    const row = el("div", "field reference");
    row.appendChild(el("span", "field-label", ref.type ?? "Reference"));
    row.appendChild(el("span", "field-value", ref.label));
    if (ref.author) row.appendChild(personSpan(ref.author));
    if (ref.related_work) row.appendChild(el("span", "related-work", `related to ${ref.related_work}`));
    section.appendChild(row);
  }
  if (
    a.categories.length === 0 &&
    a.canonical_citations.length === 0 &&
    a.general_references.length === 0
  ) {
    section.appendChild(el("p", "empty-note", "No recorded assertion."));
  }
  return section;
}

function provenanceSection(card: Card): HTMLElement {
  const section = el("section", "level level-provenance");
  section.appendChild(el("h4", "level-heading", LEVEL_HEADINGS["provenance"]));
  const p = card.provenance;
  if (p.performer) section.appendChild(field("Interpretation performer", p.performer));
  if (p.interpretation_criterion) {
    section.appendChild(field("Interpretation criterion", p.interpretation_criterion));
  }
  if (p.interpretation_type) section.appendChild(field("Interpretation type", p.interpretation_type));
  if (!p.performer && !p.interpretation_criterion && !p.interpretation_type) {
    section.appendChild(el("p", "empty-note", "No recorded provenance."));
  }
  return section;
}

export function renderCard(card: Card): HTMLElement {
  const article = el("article", "card");
  article.dataset.itemId = card.item_id;
  const header = el("header", "card-header");
  header.appendChild(el("h3", "card-title", card.factual.title ?? `Object ${card.item_id}`));
  header.appendChild(el("span", "card-id", card.item_id));
  article.appendChild(header);
  article.appendChild(factualSection(card));
  article.appendChild(assertionSection(card));
  article.appendChild(provenanceSection(card));
  return article;
}

export function renderSidebar(
  facets: FacetsBundle,
  counts: Map<string, Map<string, number>>,
  state: FilterState,
  onToggle: (facet: string, valueId: string) => void,
): HTMLElement {
  const aside = el("aside", "facet-sidebar");
  for (const [level, facetNames] of Object.entries(facets.levels)) {
    const group = el("div", "facet-level");
    group.appendChild(el("h3", "facet-level-heading", LEVEL_HEADINGS[level] ?? level));
    for (const facet of facetNames) {
      const block = el("div", "facet");
      block.dataset.facet = facet;
      block.appendChild(el("h4", "facet-title", FACET_TITLES[facet] ?? facet));
      const list = el("ul", "facet-values");
      for (const value of facets.facets[facet] ?? []) {
        const item = el("li");
        const button = el("button", "facet-value");
        button.type = "button";
        button.dataset.facet = facet;
        button.dataset.valueId = value.value_id;
        if (isSelected(state, facet, value.value_id)) button.classList.add("selected");
        button.appendChild(el("span", "facet-value-label", value.value_label));
        const count = counts.get(facet)?.get(value.value_id) ?? 0;
        button.appendChild(el("span", "facet-count", String(count)));
        button.addEventListener("click", () => onToggle(facet, value.value_id));
        item.appendChild(button);
        list.appendChild(item);
      }
      block.appendChild(list);
      group.appendChild(block);
    }
    aside.appendChild(group);
  }
  return aside;
}

/* Mount the whole catalog view. Re-renders on every interaction and
 * reports each new state so the caller can mirror it into the URL. */
export function mountCatalog(
  root: HTMLElement,
  catalog: CatalogBundle,
  facets: FacetsBundle,
  initial: FilterState,
  onStateChange?: (state: FilterState) => void,
): void {
  let state = initial;

  const render = () => {
    root.textContent = "";
    root.className = "catalog-view";

    const searchRow = el("div", "search-row");
    const search = el("input", "search-box");
    search.type = "search";
    search.placeholder = "Search titles and keywords";
    search.value = state.query;
    search.addEventListener("input", () => {
      state = { ...state, query: search.value };
      onStateChange?.(state);
      rerenderResults();
    });
    searchRow.appendChild(search);
    root.appendChild(searchRow);

    const body = el("div", "catalog-body");
    root.appendChild(body);

    const rerenderResults = () => {
      body.textContent = "";
      const visible = applyFilters(catalog.cards, state);
      const counts = liveCounts(catalog.cards, facets, state);
      body.appendChild(
        renderSidebar(facets, counts, state, (facet, valueId) => {
          state = toggleValue(state, facet, valueId);
          onStateChange?.(state);
          rerenderResults();
        }),
      );
      const main = el("div", "card-list");
      main.appendChild(
        el("p", "result-count", `${visible.length} of ${catalog.cards.length} objects match`),
      );
      for (const card of visible) main.appendChild(renderCard(card));
      if (visible.length === 0) main.appendChild(el("p", "empty-note", "No object matches."));
      body.appendChild(main);
    };
    rerenderResults();
  };

  render();
}
