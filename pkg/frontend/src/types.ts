/* Shapes of the three exported bundles the app consumes, plus the
 * schema-version gate. The UI never derives domain data beyond pure
 * aggregation of what these files already contain. */

export const SCHEMA_VERSION = 1;

export interface PersonRef {
  label: string;
  viaf?: string;
}

export interface Collocation {
  institution: string | null;
  city: string | null;
  country: string | null;
}

export interface Period {
  label: string;
  years: { begin: string; end: string };
}

export interface FactualBlock {
  title: string | null;
  author: PersonRef | null;
  keywords: string[];
  typology: string[];
  collocation: Collocation;
  period: Period | null;
  description: string | null;
  image: string | null;
  see_also: string | null;
}

export interface CanonicalCitation {
  label: string;
  perseus_url: string | null;
}

export interface GeneralReference {
  label: string;
  type: string | null;
  author: PersonRef | null;
  related_work: string | null;
}

export interface AssertionBlock {
  categories: string[];
  canonical_citations: CanonicalCitation[];
  general_references: GeneralReference[];
}

export interface ProvenanceBlock {
  interpretation_type: string | null;
  interpretation_criterion: string | null;
  performer: string | null;
}

export interface Card {
  item_id: string;
  factual: FactualBlock;
  assertion: AssertionBlock;
  provenance: ProvenanceBlock;
  facet_values: Record<string, string[]>;
}

export interface CatalogBundle {
  schema: number;
  cards: Card[];
}

export interface FacetValue {
  value_label: string;
  value_id: string;
  count: number;
  item_ids: string[];
}

export interface FacetsBundle {
  schema: number;
  levels: Record<string, string[]>;
  facets: Record<string, FacetValue[]>;
}

export interface TimelineEntry {
  item_id: string;
  title: string | null;
  begin: string;
  end: string;
  image: string | null;
  author: string | null;
}

export interface MapPoint {
  item_id: string;
  lat: number;
  lon: number;
  institution: string | null;
  title: string | null;
}

export interface RankedTheme {
  theme: string;
  count: number;
}

export interface RankedKeyword {
  keyword: string;
  count: number;
}

export interface HeatmapCell {
  book: number | null;
  bucket_start: number;
  bucket_end: number;
  count: number;
  themes: string[];
}

export interface NetworkNode {
  id: string;
  label: string;
  kind: string;
}

export interface NetworkEdge {
  source: string;
  target: string;
}

export interface Network {
  nodes: NetworkNode[];
  edges: NetworkEdge[];
}

export interface StorytellingBundle {
  schema: number;
  work: { slug: string; label: string };
  timeline: TimelineEntry[];
  map_points: MapPoint[];
  themes: RankedTheme[];
  keywords: RankedKeyword[];
  top10_themes: RankedTheme[];
  top10_keywords: RankedKeyword[];
  heatmap: HeatmapCell[];
  work_network: Network;
  artist_network: Network;
  omissions: Record<string, string[]>;
}

export class SchemaMismatch extends Error {
  constructor(bundleName: string, found: unknown) {
    super(
      `${bundleName} carries schema version ${String(found)}, ` +
        `this viewer understands version ${SCHEMA_VERSION}`,
    );
    this.name = "SchemaMismatch";
  }
}

/* Gate every bundle before rendering anything from it. */
export function checkSchema(bundle: { schema?: unknown }, bundleName: string): void {
  if (bundle.schema !== SCHEMA_VERSION) {
    throw new SchemaMismatch(bundleName, bundle.schema);
  }
}
