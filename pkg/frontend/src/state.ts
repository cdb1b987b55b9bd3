/** Pure ViewState transitions: every interaction maps (state, event) to a
 * new state, so behavior is snapshot-testable without a DOM. */

import { Atlas, RectSelection, ViewState, Viewport } from './types.js';

export function initialViewState(atlas: Atlas, width: number, height: number): ViewState {
  return {
    viewport: fitViewport(atlas, width, height),
    visibleClusters: new Set(atlas.clusters.map((c) => c.id)),
    hoveredPoint: null,
    selection: new Set(),
    searchQuery: '',
  };
}

/** Viewport containing every point with a 5% margin, centered. */
export function fitViewport(atlas: Atlas, width: number, height: number): Viewport {
  if (atlas.points.length === 0) {
    return { centerX: 0, centerY: 0, zoom: 1 };
  }
  let xmin = Infinity, xmax = -Infinity, ymin = Infinity, ymax = -Infinity;
  for (const p of atlas.points) {
    if (p.x < xmin) xmin = p.x;
    if (p.x > xmax) xmax = p.x;
    if (p.y < ymin) ymin = p.y;
    if (p.y > ymax) ymax = p.y;
  }
  const spanX = Math.max(xmax - xmin, 1e-9);
  const spanY = Math.max(ymax - ymin, 1e-9);
  const zoom = 0.9 * Math.min(width / spanX, height / spanY);
  return { centerX: (xmin + xmax) / 2, centerY: (ymin + ymax) / 2, zoom };
}

export function dataToScreen(vp: Viewport, width: number, height: number, x: number, y: number): [number, number] {
  return [(x - vp.centerX) * vp.zoom + width / 2, (y - vp.centerY) * vp.zoom + height / 2];
}

export function screenToData(vp: Viewport, width: number, height: number, sx: number, sy: number): [number, number] {
  return [(sx - width / 2) / vp.zoom + vp.centerX, (sy - height / 2) / vp.zoom + vp.centerY];
}

export function panBy(state: ViewState, dxPixels: number, dyPixels: number): ViewState {
  const vp = state.viewport;
  return {
    ...state,
    viewport: {
      ...vp,
      centerX: vp.centerX - dxPixels / vp.zoom,
      centerY: vp.centerY - dyPixels / vp.zoom,
    },
  };
}

/** Zoom by `factor` keeping the data point under (sx, sy) fixed on screen. */
export function zoomAt(
  state: ViewState,
  factor: number,
  sx: number,
  sy: number,
  width: number,
  height: number
): ViewState {
  const vp = state.viewport;
  const zoom = Math.min(Math.max(vp.zoom * factor, 1e-6), 1e9);
  const scale = vp.zoom / zoom;
  const [dx, dy] = screenToData(vp, width, height, sx, sy);
  return {
    ...state,
    viewport: {
      zoom,
      centerX: dx - (dx - vp.centerX) * scale,
      centerY: dy - (dy - vp.centerY) * scale,
    },
  };
}

export function toggleCluster(state: ViewState, clusterId: number): ViewState {
  const visible = new Set(state.visibleClusters);
  if (visible.has(clusterId)) visible.delete(clusterId);
  else visible.add(clusterId);
  // hide the hovered point along with its cluster
  return { ...state, visibleClusters: visible };
}

export function setHover(state: ViewState, pointIndex: number | null): ViewState {
  if (state.hoveredPoint === pointIndex) return state;
  return { ...state, hoveredPoint: pointIndex };
}

export function setSearch(state: ViewState, query: string): ViewState {
  return { ...state, searchQuery: query };
}

/** Replace the selection with the visible points inside a data-space rect. */
export function selectRect(state: ViewState, atlas: Atlas, rect: RectSelection): ViewState {
  const xmin = Math.min(rect.x0, rect.x1);
  const xmax = Math.max(rect.x0, rect.x1);
  const ymin = Math.min(rect.y0, rect.y1);
  const ymax = Math.max(rect.y0, rect.y1);
  const selection = new Set<number>();
  atlas.points.forEach((p, i) => {
    if (
      state.visibleClusters.has(p.cluster) &&
      p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax
    ) {
      selection.add(i);
    }
  });
  return { ...state, selection };
}

export function clearSelection(state: ViewState): ViewState {
  if (state.selection.size === 0) return state;
  return { ...state, selection: new Set() };
}

/** Indices of points whose title contains the query (case-insensitive). */
export function searchMatches(atlas: Atlas, query: string): Set<number> {
  const matches = new Set<number>();
  const needle = query.trim().toLowerCase();
  if (!needle) return matches;
  atlas.points.forEach((p, i) => {
    if (p.title.toLowerCase().includes(needle)) matches.add(i);
  });
  return matches;
}

/** URL a click on this point should open, or null for a no-op. */
export function clickUrl(atlas: Atlas, pointIndex: number | null): string | null {
  if (pointIndex === null) return null;
  return atlas.points[pointIndex].url || null;
}

/** How many points render under this state (the partition invariant). */
export function visiblePointCount(atlas: Atlas, state: ViewState): number {
  let count = 0;
  for (const c of atlas.clusters) {
    if (state.visibleClusters.has(c.id)) count += c.size;
  }
  return count;
}
