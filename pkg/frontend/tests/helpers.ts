import { readFileSync } from "node:fs";
import { resolve } from "node:path";

import type { CatalogBundle, FacetsBundle, StorytellingBundle } from "../src/types.js";

export function loadFixture<T>(name: string): T {
  const path = resolve(process.cwd(), "tests", "fixtures", name);
  return JSON.parse(readFileSync(path, "utf-8")) as T;
}

export const catalogFixture = (): CatalogBundle => loadFixture<CatalogBundle>("catalog.json");
export const facetsFixture = (): FacetsBundle => loadFixture<FacetsBundle>("facets.json");
export const storyFixture = (): StorytellingBundle =>
  loadFixture<StorytellingBundle>("storytelling-virgil-aeneis.json");

export function facetValue(facets: FacetsBundle, facet: string, valueId: string) {
  const value = (facets.facets[facet] ?? []).find((v) => v.value_id === valueId);
  if (!value) throw new Error(`fixture misses facet value ${facet}/${valueId}`);
  return value;
}
