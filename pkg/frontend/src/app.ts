/* Entry point: fetches the three bundles from the configured base path,
 * gates them on the schema version and mounts the two views. The host
 * element carries the configuration as data attributes. */

import { mountCatalog } from "./catalog.js";
import { decodeHash, encodeHash, FilterState } from "./filter.js";
import { renderStorytelling, MapOptions } from "./storytelling.js";
import {
  CatalogBundle,
  FacetsBundle,
  SchemaMismatch,
  StorytellingBundle,
  checkSchema,
} from "./types.js";

export interface AppConfig {
  bundleBase: string;
  workSlug: string;
  tileTemplate?: string;
}

export type JsonFetcher = (url: string) => Promise<unknown>;

export function readConfig(host: HTMLElement): AppConfig {
  return {
    bundleBase: host.dataset.bundles ?? "./bundles",
    workSlug: host.dataset.work ?? "virgil-aeneis",
    tileTemplate: host.dataset.tiles || undefined,
  };
}

export function renderErrorBanner(root: HTMLElement, message: string): void {
  root.textContent = "";
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.setAttribute("role", "alert");
  banner.textContent = message;
  root.appendChild(banner);
}

async function defaultFetcher(url: string): Promise<unknown> {
  const response = await fetch(url);
  if (!response.ok) {
    throw new Error(`could not load ${url}: HTTP ${response.status}`);
  }
  return response.json();
}

export async function bootstrap(
  root: HTMLElement,
  fetchJson: JsonFetcher = defaultFetcher,
): Promise<void> {
  const config = readConfig(root);
  root.textContent = "";
  const loading = document.createElement("p");
  loading.className = "loading";
  loading.textContent = "Loading collection data";
  root.appendChild(loading);

  let catalog: CatalogBundle;
  let facets: FacetsBundle;
  let story: StorytellingBundle;
  try {
    const [rawCatalog, rawFacets, rawStory] = await Promise.all([
      fetchJson(`${config.bundleBase}/catalog.json`),
      fetchJson(`${config.bundleBase}/facets.json`),
      fetchJson(`${config.bundleBase}/storytelling-${config.workSlug}.json`),
    ]);
    catalog = rawCatalog as CatalogBundle;
    facets = rawFacets as FacetsBundle;
    story = rawStory as StorytellingBundle;
    checkSchema(catalog, "catalog.json");
    checkSchema(facets, "facets.json");
    checkSchema(story, `storytelling-${config.workSlug}.json`);
  } catch (error) {
    const reason =
      error instanceof SchemaMismatch || error instanceof Error
        ? error.message
        : String(error);
    renderErrorBanner(root, reason);
    return;
  }

  root.textContent = "";
  const nav = document.createElement("nav");
  nav.className = "view-switch";
  const catalogButton = document.createElement("button");
  catalogButton.type = "button";
  catalogButton.textContent = "Catalog";
  const storyButton = document.createElement("button");
  storyButton.type = "button";
  storyButton.textContent = "Storytelling";
  nav.appendChild(catalogButton);
  nav.appendChild(storyButton);
  const host = document.createElement("div");
  host.className = "view-host";
  root.appendChild(nav);
  root.appendChild(host);

  const mapOptions: MapOptions = { tileTemplate: config.tileTemplate };
  const showCatalog = () => {
    catalogButton.classList.add("active");
    storyButton.classList.remove("active");
    const state: FilterState = decodeHash(window.location.hash);
    mountCatalog(host, catalog, facets, state, (next) => {
      history.replaceState(null, "", encodeHash(next) || "#");
    });
  };
  const showStory = () => {
    storyButton.classList.add("active");
    catalogButton.classList.remove("active");
    renderStorytelling(host, story, mapOptions);
  };
  catalogButton.addEventListener("click", showCatalog);
  storyButton.addEventListener("click", showStory);
  showCatalog();
}

const appRoot = typeof document !== "undefined" ? document.getElementById("app") : null;
if (appRoot) {
  void bootstrap(appRoot);
}
