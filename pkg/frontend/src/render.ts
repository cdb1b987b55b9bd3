/** Canvas drawing. Works against a minimal 2D-context interface so tests
 * can count draw calls without a real canvas. */

import { colorForCluster } from './color.js';
import { dataToScreen, searchMatches } from './state.js';
import { Atlas, ViewState } from './types.js';

/** The subset of CanvasRenderingContext2D the renderer touches. */
export interface Canvas2DLike {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  globalAlpha: number;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  stroke(): void;
}

export const POINT_SIZE = 4; // css pixels, squares centered on the point

export interface DrawStats {
  drawn: number;
  highlighted: number;
}

/**
 * Draw every visible point, then search highlights, hover ring and
 * selection marks. Returns how many points were drawn.
 */
export function drawAtlas(
  ctx: Canvas2DLike,
  atlas: Atlas,
  state: ViewState,
  width: number,
  height: number
): DrawStats {
  ctx.clearRect(0, 0, width, height);
  const vp = state.viewport;
  const half = POINT_SIZE / 2;
  const matches = searchMatches(atlas, state.searchQuery);
  const dimOthers = matches.size > 0;
  let drawn = 0;

  // base pass: points colored by cluster, dimmed when a search is active
  ctx.globalAlpha = 1;
  for (let i = 0; i < atlas.points.length; i++) {
    const p = atlas.points[i];
    if (!state.visibleClusters.has(p.cluster)) continue;
    const [sx, sy] = dataToScreen(vp, width, height, p.x, p.y);
    ctx.globalAlpha = dimOthers && !matches.has(i) ? 0.15 : 1;
    ctx.fillStyle = colorForCluster(p.cluster);
    ctx.fillRect(sx - half, sy - half, POINT_SIZE, POINT_SIZE);
    drawn++;
  }
  ctx.globalAlpha = 1;

  // search highlight ring
  let highlighted = 0;
  if (dimOthers) {
    ctx.strokeStyle = '#111';
    ctx.lineWidth = 1.5;
    for (const i of matches) {
      const p = atlas.points[i];
      if (!state.visibleClusters.has(p.cluster)) continue;
      const [sx, sy] = dataToScreen(vp, width, height, p.x, p.y);
      ctx.beginPath();
      ctx.arc(sx, sy, POINT_SIZE, 0, 2 * Math.PI);
      ctx.stroke();
      highlighted++;
    }
  }

  // selection marks
  if (state.selection.size > 0) {
    ctx.strokeStyle = '#d62728';
    ctx.lineWidth = 1;
    for (const i of state.selection) {
      const p = atlas.points[i];
      if (!state.visibleClusters.has(p.cluster)) continue;
      const [sx, sy] = dataToScreen(vp, width, height, p.x, p.y);
      ctx.strokeRect(sx - half - 2, sy - half - 2, POINT_SIZE + 4, POINT_SIZE + 4);
    }
  }

  // hover ring
  if (state.hoveredPoint !== null) {
    const p = atlas.points[state.hoveredPoint];
    if (state.visibleClusters.has(p.cluster)) {
      const [sx, sy] = dataToScreen(vp, width, height, p.x, p.y);
      ctx.strokeStyle = '#000';
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.arc(sx, sy, POINT_SIZE + 2, 0, 2 * Math.PI);
      ctx.stroke();
    }
  }

  return { drawn, highlighted };
}

/** Tooltip lines for a hovered point: title, authors, journal, top terms. */
export function tooltipLines(atlas: Atlas, pointIndex: number): string[] {
  const p = atlas.points[pointIndex];
  const cluster = atlas.clusters.find((c) => c.id === p.cluster);
  const lines = [p.title];
  if (p.authors) lines.push(p.authors);
  if (p.journal) lines.push(p.journal);
  if (cluster && cluster.top_terms.length > 0) {
    lines.push(`cluster ${cluster.id}: ${cluster.top_terms.join(', ')}`);
  }
  lines.push(p.url ? p.url : 'no link');
  return lines;
}
