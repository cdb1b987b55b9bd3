/** Atlas schema (version "1") and the viewer's state types. */

export interface AtlasPoint {
  id: string;
  title: string;
  authors: string;
  journal: string;
  url: string;
  x: number;
  y: number;
  cluster: number;
}

export interface AtlasCluster {
  id: number;
  size: number;
  top_terms: string[];
}

export interface Atlas {
  schema_version: string;
  points: AtlasPoint[];
  clusters: AtlasCluster[];
  provenance: Record<string, unknown>;
}

/** Viewport in data coordinates: what the canvas center shows and how big. */
export interface Viewport {
  centerX: number;
  centerY: number;
  /** pixels per data unit */
  zoom: number;
}

export interface ViewState {
  viewport: Viewport;
  /** cluster ids currently drawn */
  visibleClusters: Set<number>;
  /** point index into atlas.points, or null */
  hoveredPoint: number | null;
  /** point indices selected by box select */
  selection: Set<number>;
  searchQuery: string;
}

export interface RectSelection {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}
