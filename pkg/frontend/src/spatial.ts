/** Uniform grid over data space for constant-time hover hit-tests. */

import { Atlas } from './types.js';

export interface GridIndex {
  xmin: number;
  ymin: number;
  cellSize: number;
  cols: number;
  rows: number;
  /** point indices per cell, row-major */
  cells: number[][];
}

/** Bucket all points into roughly sqrt(n) x sqrt(n) cells. */
export function buildGrid(atlas: Atlas): GridIndex {
  const n = atlas.points.length;
  const side = Math.max(1, Math.ceil(Math.sqrt(n / 2)));
  let xmin = Infinity, xmax = -Infinity, ymin = Infinity, ymax = -Infinity;
  for (const p of atlas.points) {
    if (p.x < xmin) xmin = p.x;
    if (p.x > xmax) xmax = p.x;
    if (p.y < ymin) ymin = p.y;
    if (p.y > ymax) ymax = p.y;
  }
  if (n === 0) {
    return { xmin: 0, ymin: 0, cellSize: 1, cols: 1, rows: 1, cells: [[]] };
  }
  const span = Math.max(xmax - xmin, ymax - ymin, 1e-9);
  const cellSize = span / side;
  const cols = Math.floor((xmax - xmin) / cellSize) + 1;
  const rows = Math.floor((ymax - ymin) / cellSize) + 1;
  const cells: number[][] = Array.from({ length: cols * rows }, () => []);
  atlas.points.forEach((p, i) => {
    const cx = Math.floor((p.x - xmin) / cellSize);
    const cy = Math.floor((p.y - ymin) / cellSize);
    cells[cy * cols + cx].push(i);
  });
  return { xmin, ymin, cellSize, cols, rows, cells };
}

/**
 * Nearest visible point within `radius` (data units) of (x, y), or null.
 * Ties break toward the smaller point index via strict < on distance.
 */
export function hitTest(
  grid: GridIndex,
  atlas: Atlas,
  visibleClusters: Set<number>,
  x: number,
  y: number,
  radius: number
): number | null {
  const r2 = radius * radius;
  const c0 = Math.floor((x - radius - grid.xmin) / grid.cellSize);
  const c1 = Math.floor((x + radius - grid.xmin) / grid.cellSize);
  const r0 = Math.floor((y - radius - grid.ymin) / grid.cellSize);
  const r1 = Math.floor((y + radius - grid.ymin) / grid.cellSize);
  let best: number | null = null;
  let bestD2 = Infinity;
  for (let row = Math.max(r0, 0); row <= Math.min(r1, grid.rows - 1); row++) {
    for (let col = Math.max(c0, 0); col <= Math.min(c1, grid.cols - 1); col++) {
      for (const i of grid.cells[row * grid.cols + col]) {
        const p = atlas.points[i];
        if (!visibleClusters.has(p.cluster)) continue;
        const dx = p.x - x;
        const dy = p.y - y;
        const d2 = dx * dx + dy * dy;
        if (d2 <= r2 && d2 < bestD2) {
          best = i;
          bestD2 = d2;
        }
      }
    }
  }
  return best;
}
