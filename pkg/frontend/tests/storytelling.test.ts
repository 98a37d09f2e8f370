// @vitest-environment jsdom
import { beforeEach, describe, expect, it } from "vitest";

import {
  clusterPoints,
  forceLayout,
  renderMap,
  renderStorytelling,
  renderTimeline,
  renderWhat,
  renderWho,
} from "../src/storytelling.js";
import type { MapPoint, StorytellingBundle } from "../src/types.js";
import { storyFixture } from "./helpers.js";

const bundle = storyFixture();

let root: HTMLElement;
beforeEach(() => {
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.appendChild(root);
});

const click = (node: Element | null) => {
  node?.dispatchEvent(new MouseEvent("click", { bubbles: true }));
};

describe("tabbed dashboard", () => {
  it("offers the four views and starts on the timeline", () => {
    renderStorytelling(root, bundle);
    const tabs = [...root.querySelectorAll(".tab")].map((t) => t.textContent);
    expect(tabs).toEqual(["When", "Where", "What", "Who"]);
    expect(root.querySelector(".timeline-panel")).not.toBeNull();
    expect(root.querySelector(".work-heading")?.textContent).toBe(bundle.work.label);
  });

  it("renders non-empty timeline, map, heatmap and network panels from the fixture", () => {
    renderStorytelling(root, bundle);
    const tabButtons = [...root.querySelectorAll<HTMLButtonElement>(".tab")];

    expect(root.querySelectorAll(".timeline-entry").length).toBe(bundle.timeline.length);
    expect(bundle.timeline.length).toBeGreaterThan(0);

    tabButtons[1]?.click();
    expect(root.querySelectorAll(".map-marker").length).toBeGreaterThan(0);

    tabButtons[2]?.click();
    const nonzero = root.querySelectorAll(".heatmap-cell.nonzero");
    expect(nonzero.length).toBe(bundle.heatmap.length);
    expect(nonzero.length).toBeGreaterThan(0);

    tabButtons[3]?.click();
    expect(root.querySelectorAll(".network-node").length).toBe(
      bundle.work_network.nodes.length + bundle.artist_network.nodes.length,
    );
    expect(root.querySelectorAll(".network-edge").length).toBe(
      bundle.work_network.edges.length + bundle.artist_network.edges.length,
    );
  });
});

describe("timeline", () => {
  it("lists entries in bundle order and opens a detail panel on click", () => {
    root.appendChild(renderTimeline(bundle));
    const entries = [...root.querySelectorAll<HTMLElement>(".timeline-entry")];
    expect(entries.map((e) => e.dataset.itemId)).toEqual(bundle.timeline.map((t) => t.item_id));

    const third = bundle.timeline[2];
    click(entries[2] ?? null);
    const detail = root.querySelector(".timeline-detail");
    expect(detail?.querySelector(".detail-title")?.textContent).toBe(third?.title);
    expect(detail?.querySelector(".detail-author")?.textContent).toBe(third?.author);
  });

  it("names the objects left out for missing time-spans", () => {
    root.appendChild(renderTimeline(bundle));
    const note = root.querySelector(".omissions-note");
    expect(note).not.toBeNull();
    for (const id of bundle.omissions["timeline"] ?? []) {
      expect(note?.textContent).toContain(id);
    }
  });

  it("renders an explicit empty state without entries", () => {
    const empty: StorytellingBundle = { ...bundle, timeline: [], omissions: { timeline: [], map: [] } };
    root.appendChild(renderTimeline(empty));
    expect(root.querySelector(".no-data")).not.toBeNull();
    expect(root.querySelectorAll(".timeline-entry").length).toBe(0);
  });
});

describe("map", () => {
  it("draws one marker per location at street-level zoom and popups on click", () => {
    root.appendChild(renderMap(bundle));
    click(root.querySelector(".zoom-in"));
    click(root.querySelector(".zoom-in"));
    const markers = root.querySelectorAll(".map-marker");
    expect(markers.length).toBe(bundle.map_points.length);

    click(markers[0] ?? null);
    const popup = root.querySelector(".map-popup");
    expect(popup?.textContent).toContain(bundle.map_points[0]?.institution ?? "");
  });

  it("shows the omissions notice for objects without coordinates", () => {
    root.appendChild(renderMap(bundle));
    const note = root.querySelector(".omissions-note");
    expect(note).not.toBeNull();
    for (const id of bundle.omissions["map"] ?? []) {
      expect(note?.textContent).toContain(id);
    }
  });

  it("renders an explicit empty state when no point carries coordinates", () => {
    const empty: StorytellingBundle = { ...bundle, map_points: [] };
    root.appendChild(renderMap(empty));
    expect(root.querySelector(".no-data")).not.toBeNull();
    expect(root.querySelectorAll(".map-marker").length).toBe(0);
  });

  it("draws a tile layer only when a template is configured", () => {
    root.appendChild(renderMap(bundle, { tileTemplate: "https://tiles.example/{z}/{x}/{y}.png" }));
    const images = root.querySelectorAll(".tile-layer image");
    expect(images.length).toBeGreaterThan(0);
    expect(images[0]?.getAttribute("href")).toMatch(/^https:\/\/tiles\.example\/\d+\/\d+\/\d+\.png$/);

    root.textContent = "";
    root.appendChild(renderMap(bundle));
    expect(root.querySelectorAll(".tile-layer").length).toBe(0);
  });
});

describe("proximity clustering", () => {
  const point = (id: string, lat: number, lon: number): MapPoint => ({
    item_id: id,
    lat,
    lon,
    institution: id,
    title: id,
  });

  it("merges neighbours at low zoom and splits them while zooming in", () => {
    const twoMuseums = [point("a", 48.86, 2.337), point("b", 48.861, 2.339)];
    const low = clusterPoints(twoMuseums, 4);
    expect(low.length).toBe(1);
    expect(low[0]?.points.length).toBe(2);

    const high = clusterPoints(twoMuseums, 15);
    expect(high.length).toBe(2);
  });

  it("keeps the fixture's transatlantic museums apart at the default zoom", () => {
    const clusters = clusterPoints(bundle.map_points, 2);
    expect(clusters.length).toBe(bundle.map_points.length);
  });

  it("positions a cluster at the centroid of its members", () => {
    const merged = clusterPoints([point("a", 10, 20), point("b", 12, 22)], 0);
    expect(merged.length).toBe(1);
    expect(merged[0]?.lat).toBeCloseTo(11);
    expect(merged[0]?.lon).toBeCloseTo(21);
  });
});

describe("concepts panel", () => {
  it("ranks themes and keywords with exactly the bundle's numbers", () => {
    root.appendChild(renderWhat(bundle));
    const charts = [...root.querySelectorAll(".bar-chart")];
    expect(charts.length).toBe(2);

    const themeRows = [...(charts[0]?.querySelectorAll(".bar-row") ?? [])].map((row) => [
      row.querySelector(".bar-label")?.textContent,
      row.querySelector(".bar-count")?.textContent,
    ]);
    expect(themeRows).toEqual(bundle.top10_themes.map((t) => [t.theme, String(t.count)]));

    const keywordRows = [...(charts[1]?.querySelectorAll(".bar-row") ?? [])].map((row) => [
      row.querySelector(".bar-label")?.textContent,
      row.querySelector(".bar-count")?.textContent,
    ]);
    expect(keywordRows).toEqual(bundle.top10_keywords.map((k) => [k.keyword, String(k.count)]));
  });

  it("sizes the wordcloud from the bundle counts", () => {
    root.appendChild(renderWhat(bundle));
    const words = [...root.querySelectorAll(".word-cloud .cloud-word")].map(
      (w) => w.textContent,
    );
    for (const theme of bundle.themes) expect(words).toContain(theme.theme);
    for (const keyword of bundle.keywords) expect(words).toContain(keyword.keyword);
  });

  it("keeps the heatmap cell for book 4, lines 301-350, populated", () => {
    root.appendChild(renderWhat(bundle));
    const cell = root.querySelector<HTMLElement>(
      '.heatmap-cell[data-book="4"][data-bucket-start="301"]',
    );
    expect(cell).not.toBeNull();
    expect(Number(cell?.dataset.count)).toBeGreaterThan(0);

    const fromBundle = bundle.heatmap.find((c) => c.book === 4 && c.bucket_start === 301);
    expect(cell?.dataset.count).toBe(String(fromBundle?.count));
  });

  it("explains a heatmap cell on click, themes included", () => {
    root.appendChild(renderWhat(bundle));
    const cell = root.querySelector<HTMLElement>(
      '.heatmap-cell[data-book="4"][data-bucket-start="301"]',
    );
    click(cell);
    const summary = root.querySelector(".heatmap-detail .cell-summary")?.textContent ?? "";
    expect(summary).toContain("book 4");
    expect(summary).toContain("301-350");
    const fromBundle = bundle.heatmap.find((c) => c.book === 4 && c.bucket_start === 301);
    for (const theme of fromBundle?.themes ?? []) expect(summary).toContain(theme);
  });

  it("gives bookless citations their own row", () => {
    root.appendChild(renderWhat(bundle));
    const rowHeads = [...root.querySelectorAll(".heatmap-table tr > th:first-child")].map(
      (th) => th.textContent,
    );
    expect(rowHeads).toContain("(no book)");
  });
});

describe("networks", () => {
  it("draws every node and edge of both bundle networks", () => {
    root.appendChild(renderWho(bundle));
    const blocks = [...root.querySelectorAll(".network")];
    expect(blocks.length).toBe(2);
    expect(blocks[0]?.querySelectorAll(".network-node").length).toBe(
      bundle.work_network.nodes.length,
    );
    expect(blocks[0]?.querySelectorAll(".network-edge").length).toBe(
      bundle.work_network.edges.length,
    );
    expect(blocks[1]?.querySelectorAll(".network-node").length).toBe(
      bundle.artist_network.nodes.length,
    );
  });

  it("distinguishes theme nodes from the others", () => {
    root.appendChild(renderWho(bundle));
    const themes = root.querySelectorAll(".network-node.kind-theme").length;
    const expected =
      bundle.work_network.nodes.filter((n) => n.kind === "theme").length +
      bundle.artist_network.nodes.filter((n) => n.kind === "theme").length;
    expect(themes).toBe(expected);
  });

  it("lays out deterministically", () => {
    const first = forceLayout(bundle.work_network);
    const second = forceLayout(bundle.work_network);
    for (const [id, node] of first) {
      expect(second.get(id)?.x).toBe(node.x);
      expect(second.get(id)?.y).toBe(node.y);
    }
  });

  it("zooms the viewBox through the controls", () => {
    root.appendChild(renderWho(bundle));
    const svg = root.querySelector(".network-canvas");
    const before = svg?.getAttribute("viewBox");
    click(root.querySelector(".network-controls .zoom-in"));
    expect(svg?.getAttribute("viewBox")).not.toBe(before);
  });

  it("renders an explicit empty state for an empty network", () => {
    const none = { nodes: [], edges: [] };
    const empty: StorytellingBundle = { ...bundle, work_network: none, artist_network: none };
    root.appendChild(renderWho(empty));
    expect(root.querySelectorAll(".no-data").length).toBe(2);
  });
});
