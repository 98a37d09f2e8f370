/* Storytelling dashboard for one focus work: four tabs covering time,
 * place, concepts and agents. Every figure shown is taken verbatim from
 * the bundle or aggregated client-side from its arrays. */

import type {
  HeatmapCell,
  MapPoint,
  Network,
  StorytellingBundle,
  TimelineEntry,
} from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

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

function svgEl(tag: string, attrs: Record<string, string | number>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, String(value));
  }
  return node;
}

function noData(message: string): HTMLElement {
  return el("p", "no-data", message);
}

function omissionsNote(section: string, ids: string[]): HTMLElement {
  return el(
    "p",
    "omissions-note",
    `${ids.length} object(s) left out of the ${section} for missing data: ${ids.join(", ")}`,
  );
}

// -------------------------------------------------------------- timeline

export function renderTimeline(bundle: StorytellingBundle): HTMLElement {
  const section = el("section", "tab-panel timeline-panel");
  section.appendChild(el("h3", "panel-heading", "When"));
  const omitted = bundle.omissions["timeline"] ?? [];

  if (bundle.timeline.length === 0) {
    section.appendChild(noData("No object carries a usable time-span."));
    if (omitted.length > 0) section.appendChild(omissionsNote("timeline", omitted));
    return section;
  }

  const strip = el("div", "timeline-strip");
  const detail = el("div", "timeline-detail");
  detail.appendChild(el("p", "hint", "Select an artwork."));

  const showDetail = (entry: TimelineEntry) => {
    detail.textContent = "";
    detail.appendChild(el("h4", "detail-title", entry.title ?? `Object ${entry.item_id}`));
    detail.appendChild(el("p", "detail-author", entry.author ?? "Author unknown"));
    detail.appendChild(el("p", "detail-span", `${entry.begin} to ${entry.end}`));
    if (entry.image) {
      const img = el("img", "detail-image");
      img.src = entry.image;
      img.alt = entry.title ?? "";
      detail.appendChild(img);
    }
  };

  for (const entry of bundle.timeline) {
    const button = el("button", "timeline-entry");
    button.type = "button";
    button.dataset.itemId = entry.item_id;
    button.appendChild(el("span", "entry-begin", entry.begin.slice(0, entry.begin.indexOf("-", 1))));
    button.appendChild(el("span", "entry-title", entry.title ?? entry.item_id));
    button.addEventListener("click", () => showDetail(entry));
    strip.appendChild(button);
  }

  section.appendChild(strip);
  section.appendChild(detail);
  if (omitted.length > 0) section.appendChild(omissionsNote("timeline", omitted));
  return section;
}

// ------------------------------------------------------------------- map

export interface Cluster {
  lat: number;
  lon: number;
  points: MapPoint[];
}

/* Greedy proximity clustering. The merge radius shrinks as the zoom
 * level grows, so markers split apart while zooming in. Radius is in
 * degrees on the equirectangular plane. */
export function clusterPoints(points: MapPoint[], zoom: number): Cluster[] {
  const radius = 64 / 2 ** zoom;
  const clusters: Cluster[] = [];
  for (const point of points) {
    let home: Cluster | undefined;
    for (const cluster of clusters) {
      const d = Math.hypot(cluster.lat - point.lat, cluster.lon - point.lon);
      if (d <= radius) {
        home = cluster;
        break;
      }
    }
    if (home) {
      home.points.push(point);
      const n = home.points.length;
      home.lat += (point.lat - home.lat) / n;
      home.lon += (point.lon - home.lon) / n;
    } else {
      clusters.push({ lat: point.lat, lon: point.lon, points: [point] });
    }
  }
  return clusters;
}

export interface MapOptions {
  /* Slippy-map tile URL template with {z}/{x}/{y} placeholders; no tile
   * layer is drawn when absent. */
  tileTemplate?: string;
}

function tileLayer(template: string, zoom: number): SVGElement {
  const layer = svgEl("g", { class: "tile-layer" });
  const z = Math.max(0, Math.min(4, Math.round(zoom)));
  const n = 2 ** z;
  for (let x = 0; x < n; x++) {
    for (let y = 0; y < n; y++) {
      const url = template
        .replace("{z}", String(z))
        .replace("{x}", String(x))
        .replace("{y}", String(y));
      const image = svgEl("image", {
        x: (360 / n) * x,
        y: (180 / n) * y,
        width: 360 / n,
        height: 180 / n,
      });
      image.setAttribute("href", url);
      layer.appendChild(image);
    }
  }
  return layer;
}

export function renderMap(bundle: StorytellingBundle, options: MapOptions = {}): HTMLElement {
  const section = el("section", "tab-panel map-panel");
  section.appendChild(el("h3", "panel-heading", "Where"));
  const omitted = bundle.omissions["map"] ?? [];

  if (bundle.map_points.length === 0) {
    section.appendChild(noData("No object carries coordinates."));
    if (omitted.length > 0) section.appendChild(omissionsNote("map", omitted));
    return section;
  }

  let zoom = 2;
  let centerLon = bundle.map_points.reduce((acc, p) => acc + p.lon, 0) / bundle.map_points.length;
  let centerLat = bundle.map_points.reduce((acc, p) => acc + p.lat, 0) / bundle.map_points.length;

  const svg = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("class", "map-canvas");
  svg.setAttribute("preserveAspectRatio", "xMidYMid meet");
  const popup = el("div", "map-popup");

  const project = (p: { lat: number; lon: number }) => ({ x: p.lon + 180, y: 90 - p.lat });

  const draw = () => {
    svg.textContent = "";
    const width = 360 / 2 ** zoom;
    const height = 180 / 2 ** zoom;
    const c = project({ lat: centerLat, lon: centerLon });
    svg.setAttribute(
      "viewBox",
      `${c.x - width / 2} ${c.y - height / 2} ${width} ${height}`,
    );
    if (options.tileTemplate) svg.appendChild(tileLayer(options.tileTemplate, zoom));
    for (const cluster of clusterPoints(bundle.map_points, zoom)) {
      const pos = project(cluster);
      const marker = svgEl("g", { class: "map-marker", transform: `translate(${pos.x},${pos.y})` });
      const many = cluster.points.length > 1;
      marker.appendChild(
        svgEl("circle", { r: many ? 6 / 2 ** (zoom / 2) : 3 / 2 ** (zoom / 2), class: many ? "cluster" : "single" }),
      );
      if (many) {
        const label = svgEl("text", { class: "cluster-size", "text-anchor": "middle", dy: 1 });
        label.textContent = String(cluster.points.length);
        marker.appendChild(label);
      }
      marker.addEventListener("click", () => {
        popup.textContent = "";
        for (const point of cluster.points) {
          const entry = el("div", "popup-entry");
          entry.appendChild(el("strong", "popup-institution", point.institution ?? "Unknown place"));
          entry.appendChild(el("span", "popup-title", point.title ?? point.item_id));
          popup.appendChild(entry);
        }
      });
      svg.appendChild(marker);
    }
  };

  let dragging: { x: number; y: number } | null = null;
  svg.addEventListener("pointerdown", (event) => {
    dragging = { x: event.clientX, y: event.clientY };
  });
  svg.addEventListener("pointermove", (event) => {
    if (!dragging) return;
    const scale = 360 / 2 ** zoom / Math.max(1, svg.clientWidth || 360);
    centerLon -= (event.clientX - dragging.x) * scale;
    centerLat += (event.clientY - dragging.y) * scale;
    dragging = { x: event.clientX, y: event.clientY };
    draw();
  });
  svg.addEventListener("pointerup", () => {
    dragging = null;
  });

  const controls = el("div", "map-controls");
  const zoomIn = el("button", "zoom-in", "+");
  zoomIn.type = "button";
  zoomIn.addEventListener("click", () => {
    zoom = Math.min(8, zoom + 1);
    draw();
  });
  const zoomOut = el("button", "zoom-out", "-");
  zoomOut.type = "button";
  zoomOut.addEventListener("click", () => {
    zoom = Math.max(0, zoom - 1);
    draw();
  });
  controls.appendChild(zoomIn);
  controls.appendChild(zoomOut);

  draw();
  section.appendChild(controls);
  section.appendChild(svg);
  section.appendChild(popup);
  if (omitted.length > 0) section.appendChild(omissionsNote("map", omitted));
  return section;
}

// ---------------------------------------------------- concepts (what)

function barChart(title: string, rows: { label: string; count: number }[]): HTMLElement {
  const block = el("div", "bar-chart");
  block.appendChild(el("h4", "chart-title", title));
  if (rows.length === 0) {
    block.appendChild(noData("Nothing to rank."));
    return block;
  }
  const max = Math.max(...rows.map((r) => r.count));
  for (const row of rows) {
    const line = el("div", "bar-row");
    line.appendChild(el("span", "bar-label", row.label));
    const bar = el("div", "bar");
    bar.style.width = `${(row.count / max) * 100}%`;
    line.appendChild(bar);
    line.appendChild(el("span", "bar-count", String(row.count)));
    block.appendChild(line);
  }
  return block;
}

function wordCloud(title: string, rows: { label: string; count: number }[]): HTMLElement {
  const cloud = el("div", "word-cloud");
  cloud.appendChild(el("h4", "chart-title", title));
  if (rows.length === 0) {
    cloud.appendChild(noData("Nothing to show."));
    return cloud;
  }
  const max = Math.max(...rows.map((r) => r.count));
  for (const row of rows) {
    const word = el("span", "cloud-word", row.label);
    word.style.fontSize = `${0.8 + (row.count / max) * 1.6}rem`;
    word.title = `${row.label}: ${row.count}`;
    cloud.appendChild(word);
    cloud.appendChild(document.createTextNode(" "));
  }
  return cloud;
}

function heatmapTable(cells: HeatmapCell[]): HTMLElement {
  const wrap = el("div", "heatmap");
  wrap.appendChild(el("h4", "chart-title", "Cited passages, by book and line range"));
  if (cells.length === 0) {
    wrap.appendChild(noData("No parsed line range to chart."));
    return wrap;
  }

  const books = [...new Set(cells.map((c) => c.book === null ? "none" : String(c.book)))];
  const buckets = [...new Set(cells.map((c) => c.bucket_start))].sort((a, b) => a - b);
  const byKey = new Map<string, HeatmapCell>();
  for (const cell of cells) {
    byKey.set(`${cell.book ?? "none"}:${cell.bucket_start}`, cell);
  }
  const max = Math.max(...cells.map((c) => c.count));

  const detail = el("div", "heatmap-detail");
  detail.appendChild(el("p", "hint", "Select a cell."));

  const table = el("table", "heatmap-table");
  const head = el("tr");
  head.appendChild(el("th", "corner", "book \\ lines"));
  for (const bucket of buckets) {
    const cell = cells.find((c) => c.bucket_start === bucket);
    head.appendChild(el("th", undefined, `${bucket}-${cell ? cell.bucket_end : bucket}`));
  }
  table.appendChild(head);

  for (const book of books) {
    const row = el("tr");
    row.appendChild(el("th", undefined, book === "none" ? "(no book)" : book));
    for (const bucket of buckets) {
      const cell = byKey.get(`${book}:${bucket}`);
      const td = el("td", "heatmap-cell", cell ? String(cell.count) : "");
      td.dataset.book = book;
      td.dataset.bucketStart = String(bucket);
      if (cell) {
        td.dataset.count = String(cell.count);
        td.style.opacity = String(0.35 + (cell.count / max) * 0.65);
        td.classList.add("nonzero");
        td.addEventListener("click", () => {
          detail.textContent = "";
          const where = cell.book === null ? "no book" : `book ${cell.book}`;
          detail.appendChild(
            el(
              "p",
              "cell-summary",
              `${where}, lines ${cell.bucket_start}-${cell.bucket_end}: ` +
                `${cell.count} citation(s), themes: ${cell.themes.join(", ")}`,
            ),
          );
        });
      }
      row.appendChild(td);
    }
    table.appendChild(row);
  }

  const scroller = el("div", "heatmap-scroll");
  scroller.appendChild(table);
  wrap.appendChild(scroller);
  wrap.appendChild(detail);
  return wrap;
}

export function renderWhat(bundle: StorytellingBundle): HTMLElement {
  const section = el("section", "tab-panel what-panel");
  section.appendChild(el("h3", "panel-heading", "What"));
  section.appendChild(
    wordCloud("Themes", bundle.themes.map((t) => ({ label: t.theme, count: t.count }))),
  );
  section.appendChild(
    wordCloud("Keywords", bundle.keywords.map((k) => ({ label: k.keyword, count: k.count }))),
  );
  section.appendChild(
    barChart("Top themes", bundle.top10_themes.map((t) => ({ label: t.theme, count: t.count }))),
  );
  section.appendChild(
    barChart(
      "Top keywords",
      bundle.top10_keywords.map((k) => ({ label: k.keyword, count: k.count })),
    ),
  );
  section.appendChild(heatmapTable(bundle.heatmap));
  return section;
}

// ------------------------------------------------------ networks (who)

interface LayoutNode {
  id: string;
  x: number;
  y: number;
}

/* Tiny deterministic force layout: positions seeded from a string hash
 * of the node id, then a fixed number of repulsion/spring steps. Same
 * input, same picture. */
export function forceLayout(network: Network, iterations = 120): Map<string, LayoutNode> {
  const hash = (s: string) => {
    let h = 2166136261;
    for (let i = 0; i < s.length; i++) {
      h ^= s.charCodeAt(i);
      h = Math.imul(h, 16777619);
    }
    return (h >>> 0) / 4294967295;
  };

  const nodes: LayoutNode[] = network.nodes.map((n) => ({
    id: n.id,
    x: 100 + hash(n.id) * 300,
    y: 100 + hash(`${n.id}#y`) * 200,
  }));
  const byId = new Map(nodes.map((n) => [n.id, n]));

  for (let step = 0; step < iterations; step++) {
    for (const a of nodes) {
      for (const b of nodes) {
        if (a === b) continue;
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const d2 = Math.max(25, dx * dx + dy * dy);
        const push = 600 / d2;
        a.x += dx * push * 0.01;
        a.y += dy * push * 0.01;
      }
    }
    for (const edge of network.edges) {
      const a = byId.get(edge.source);
      const b = byId.get(edge.target);
      if (!a || !b) continue;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const d = Math.max(1, Math.hypot(dx, dy));
      const pull = (d - 80) * 0.002;
      a.x += dx * pull;
      a.y += dy * pull;
      b.x -= dx * pull;
      b.y -= dy * pull;
    }
  }
  return byId;
}

export function renderNetwork(network: Network, title: string): HTMLElement {
  const block = el("div", "network");
  block.appendChild(el("h4", "chart-title", title));
  if (network.nodes.length === 0) {
    block.appendChild(noData("No network to draw."));
    return block;
  }

  const layout = forceLayout(network);
  const xs = [...layout.values()].map((n) => n.x);
  const ys = [...layout.values()].map((n) => n.y);
  const pad = 30;
  const box = {
    x: Math.min(...xs) - pad,
    y: Math.min(...ys) - pad,
    w: Math.max(...xs) - Math.min(...xs) + 2 * pad,
    h: Math.max(...ys) - Math.min(...ys) + 2 * pad,
  };

  let scale = 1;
  const svg = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("class", "network-canvas");
  const applyView = () => {
    const w = box.w / scale;
    const h = box.h / scale;
    svg.setAttribute(
      "viewBox",
      `${box.x + (box.w - w) / 2} ${box.y + (box.h - h) / 2} ${w} ${h}`,
    );
  };
  applyView();

  for (const edge of network.edges) {
    const a = layout.get(edge.source);
    const b = layout.get(edge.target);
    if (!a || !b) continue;
    svg.appendChild(
      svgEl("line", { x1: a.x, y1: a.y, x2: b.x, y2: b.y, class: "network-edge" }),
    );
  }
  for (const node of network.nodes) {
    const pos = layout.get(node.id);
    if (!pos) continue;
    const group = svgEl("g", {
      class: `network-node kind-${node.kind}`,
      transform: `translate(${pos.x},${pos.y})`,
    });
    group.appendChild(svgEl("circle", { r: node.kind === "theme" ? 10 : 6 }));
    const label = svgEl("text", { class: "node-label", dy: -12, "text-anchor": "middle" });
    label.textContent = node.label;
    group.appendChild(label);
    svg.appendChild(group);
  }

  svg.addEventListener("wheel", (event) => {
    event.preventDefault();
    scale = Math.min(8, Math.max(0.5, scale * (event.deltaY < 0 ? 1.2 : 1 / 1.2)));
    applyView();
  });
  const controls = el("div", "network-controls");
  const zoomIn = el("button", "zoom-in", "+");
  zoomIn.type = "button";
  zoomIn.addEventListener("click", () => {
    scale = Math.min(8, scale * 1.2);
    applyView();
  });
  const zoomOut = el("button", "zoom-out", "-");
  zoomOut.type = "button";
  zoomOut.addEventListener("click", () => {
    scale = Math.max(0.5, scale / 1.2);
    applyView();
  });
  controls.appendChild(zoomIn);
  controls.appendChild(zoomOut);
  block.appendChild(controls);
  block.appendChild(svg);
  return block;
}

export function renderWho(bundle: StorytellingBundle): HTMLElement {
  const section = el("section", "tab-panel who-panel");
  section.appendChild(el("h3", "panel-heading", "Who"));
  section.appendChild(renderNetwork(bundle.work_network, "Works and shared themes"));
  section.appendChild(renderNetwork(bundle.artist_network, "Artists and depicted themes"));
  return section;
}

// -------------------------------------------------------------- tabs

export const TAB_ORDER: [string, (bundle: StorytellingBundle, options: MapOptions) => HTMLElement][] = [
  ["When", (bundle) => renderTimeline(bundle)],
  ["Where", (bundle, options) => renderMap(bundle, options)],
  ["What", (bundle) => renderWhat(bundle)],
  ["Who", (bundle) => renderWho(bundle)],
];

export function renderStorytelling(
  root: HTMLElement,
  bundle: StorytellingBundle,
  options: MapOptions = {},
): void {
  root.textContent = "";
  root.className = "storytelling-view";
  root.appendChild(el("h2", "work-heading", bundle.work.label));

  const bar = el("div", "tab-bar");
  const host = el("div", "tab-host");
  const panels = TAB_ORDER.map(([, build]) => build(bundle, options));

  TAB_ORDER.forEach(([name], index) => {
    const tab = el("button", "tab");
    tab.type = "button";
    tab.textContent = name;
    tab.addEventListener("click", () => {
      host.textContent = "";
      const panel = panels[index];
      if (panel) host.appendChild(panel);
      for (const other of bar.querySelectorAll(".tab")) other.classList.remove("active");
      tab.classList.add("active");
    });
    if (index === 0) tab.classList.add("active");
    bar.appendChild(tab);
  });

  const first = panels[0];
  if (first) host.appendChild(first);
  root.appendChild(bar);
  root.appendChild(host);
}
