/** DOM wiring for the static viewer page. All interaction logic lives in
 * the pure modules; this file owns the canvas, events and panels. */

import { AtlasFormatError, parseAtlasJson } from './atlas.js';
import { colorForCluster } from './color.js';
import { drawAtlas, tooltipLines, POINT_SIZE } from './render.js';
import { buildGrid, GridIndex, hitTest } from './spatial.js';
import {
  clearSelection,
  clickUrl,
  initialViewState,
  panBy,
  screenToData,
  searchMatches,
  selectRect,
  setHover,
  setSearch,
  toggleCluster,
  visiblePointCount,
  zoomAt,
} from './state.js';
import { Atlas, ViewState } from './types.js';

const canvas = document.getElementById('plot') as HTMLCanvasElement;
const ctx = canvas.getContext('2d') as CanvasRenderingContext2D;
const banner = document.getElementById('banner') as HTMLDivElement;
const notice = document.getElementById('notice') as HTMLDivElement;
const tooltip = document.getElementById('tooltip') as HTMLDivElement;
const legend = document.getElementById('legend') as HTMLDivElement;
const sidePanel = document.getElementById('side-panel') as HTMLDivElement;
const statusBar = document.getElementById('status') as HTMLDivElement;
const searchBox = document.getElementById('search') as HTMLInputElement;
const filePicker = document.getElementById('file-picker') as HTMLInputElement;

let atlas: Atlas | null = null;
let grid: GridIndex | null = null;
let state: ViewState | null = null;

function cssSize(): [number, number] {
  return [canvas.clientWidth, canvas.clientHeight];
}

function resizeCanvas(): void {
  const ratio = window.devicePixelRatio || 1;
  canvas.width = Math.round(canvas.clientWidth * ratio);
  canvas.height = Math.round(canvas.clientHeight * ratio);
  ctx.setTransform(ratio, 0, 0, ratio, 0, 0);
  redraw();
}

function showBanner(message: string): void {
  banner.textContent = message;
  banner.style.display = 'block';
}

function redraw(): void {
  if (!atlas || !state) return;
  const [w, h] = cssSize();
  const stats = drawAtlas(ctx, atlas, state, w, h);
  const total = visiblePointCount(atlas, state);
  statusBar.textContent =
    `${stats.drawn} of ${atlas.points.length} points shown` +
    (state.searchQuery.trim() ? `, ${stats.highlighted} matching "${state.searchQuery.trim()}"` : '') +
    (state.selection.size ? `, ${state.selection.size} selected` : '');
  if (stats.drawn !== total) {
    // partition invariant: drawn points must equal the visible cluster sizes
    showBanner(`internal error: drew ${stats.drawn} points, expected ${total}`);
  }
}

function update(next: ViewState): void {
  if (next === state) return;
  state = next;
  redraw();
}

function buildLegend(): void {
  if (!atlas || !state) return;
  legend.replaceChildren();
  for (const cluster of atlas.clusters) {
    const row = document.createElement('div');
    row.className = 'legend-row';
    const swatch = document.createElement('span');
    swatch.className = 'swatch';
    swatch.style.background = colorForCluster(cluster.id);
    const label = document.createElement('span');
    label.textContent = `cluster ${cluster.id} (${cluster.size})`;
    const terms = document.createElement('div');
    terms.className = 'terms';
    terms.textContent = cluster.top_terms.join(', ');
    row.append(swatch, label, terms);
    row.classList.toggle('hidden-cluster', !state.visibleClusters.has(cluster.id));
    row.addEventListener('click', () => {
      if (!state) return;
      update(toggleCluster(state, cluster.id));
      row.classList.toggle('hidden-cluster', !state.visibleClusters.has(cluster.id));
    });
    legend.appendChild(row);
  }
}

function renderSidePanel(): void {
  if (!atlas || !state) return;
  sidePanel.replaceChildren();
  if (state.selection.size === 0) {
    sidePanel.style.display = 'none';
    return;
  }
  sidePanel.style.display = 'block';
  const heading = document.createElement('h3');
  heading.textContent = `${state.selection.size} selected`;
  sidePanel.appendChild(heading);
  const list = document.createElement('ul');
  for (const i of [...state.selection].sort((a, b) => a - b)) {
    const p = atlas.points[i];
    const item = document.createElement('li');
    if (p.url) {
      const link = document.createElement('a');
      link.href = p.url;
      link.target = '_blank';
      link.rel = 'noopener';
      link.textContent = p.title;
      item.appendChild(link);
    } else {
      item.textContent = `${p.title} (no link)`;
    }
    list.appendChild(item);
  }
  sidePanel.appendChild(list);
}

function loadAtlasText(text: string): void {
  banner.style.display = 'none';
  notice.style.display = 'none';
  tooltip.style.display = 'none';
  sidePanel.style.display = 'none';
  try {
    atlas = parseAtlasJson(text);
  } catch (err) {
    atlas = null;
    state = null;
    grid = null;
    const [w, h] = cssSize();
    ctx.clearRect(0, 0, w, h);
    legend.replaceChildren();
    statusBar.textContent = '';
    showBanner(
      err instanceof AtlasFormatError ? `Cannot load atlas: ${err.message}` : String(err)
    );
    return;
  }
  grid = buildGrid(atlas);
  const [w, h] = cssSize();
  state = initialViewState(atlas, w, h);
  if (atlas.points.length === 0) {
    notice.textContent = 'no documents';
    notice.style.display = 'block';
  }
  buildLegend();
  redraw();
}

/** Hover radius in data units: a few pixels around the cursor. */
function hoverRadius(): number {
  return state ? (POINT_SIZE + 2) / state.viewport.zoom : 0;
}

function pointAt(sx: number, sy: number): number | null {
  if (!atlas || !grid || !state) return null;
  const [w, h] = cssSize();
  const [dx, dy] = screenToData(state.viewport, w, h, sx, sy);
  return hitTest(grid, atlas, state.visibleClusters, dx, dy, hoverRadius());
}

// -- pointer interaction ----------------------------------------------------

let dragging = false;
let selecting = false;
let lastX = 0;
let lastY = 0;
let selStartX = 0;
let selStartY = 0;

canvas.addEventListener('mousedown', (ev) => {
  lastX = ev.offsetX;
  lastY = ev.offsetY;
  if (ev.shiftKey) {
    selecting = true;
    selStartX = ev.offsetX;
    selStartY = ev.offsetY;
  } else {
    dragging = true;
  }
});

window.addEventListener('mouseup', (ev) => {
  if (selecting && atlas && state) {
    const [w, h] = cssSize();
    const rect = canvas.getBoundingClientRect();
    const [x0, y0] = screenToData(state.viewport, w, h, selStartX, selStartY);
    const [x1, y1] = screenToData(state.viewport, w, h, ev.clientX - rect.left, ev.clientY - rect.top);
    update(selectRect(state, atlas, { x0, y0, x1, y1 }));
    renderSidePanel();
  }
  dragging = false;
  selecting = false;
});

canvas.addEventListener('mousemove', (ev) => {
  if (!atlas || !state) return;
  if (dragging) {
    update(panBy(state, ev.offsetX - lastX, ev.offsetY - lastY));
    lastX = ev.offsetX;
    lastY = ev.offsetY;
    return;
  }
  if (selecting) return;
  const hit = pointAt(ev.offsetX, ev.offsetY);
  update(setHover(state, hit));
  if (hit === null) {
    tooltip.style.display = 'none';
    canvas.style.cursor = 'grab';
    return;
  }
  canvas.style.cursor = 'pointer';
  tooltip.replaceChildren();
  for (const line of tooltipLines(atlas, hit)) {
    const div = document.createElement('div');
    div.textContent = line;
    tooltip.appendChild(div);
  }
  tooltip.style.display = 'block';
  tooltip.style.left = `${ev.offsetX + 14}px`;
  tooltip.style.top = `${ev.offsetY + 14}px`;
});

canvas.addEventListener('mouseleave', () => {
  tooltip.style.display = 'none';
  if (state) update(setHover(state, null));
});

canvas.addEventListener('click', (ev) => {
  if (ev.shiftKey || !atlas) return;
  const url = clickUrl(atlas, pointAt(ev.offsetX, ev.offsetY));
  if (url) window.open(url, '_blank', 'noopener');
});

canvas.addEventListener('wheel', (ev) => {
  ev.preventDefault();
  if (!state) return;
  const [w, h] = cssSize();
  const factor = Math.exp(-ev.deltaY * 0.0015);
  update(zoomAt(state, factor, ev.offsetX, ev.offsetY, w, h));
});

searchBox.addEventListener('input', () => {
  if (!atlas || !state) return;
  update(setSearch(state, searchBox.value));
  const matches = searchMatches(atlas, searchBox.value);
  if (searchBox.value.trim() && matches.size === 0) {
    statusBar.textContent = `no titles match "${searchBox.value.trim()}"`;
  }
});

window.addEventListener('keydown', (ev) => {
  if (ev.key === 'Escape' && state) {
    update(clearSelection(state));
    renderSidePanel();
  }
});

filePicker.addEventListener('change', async () => {
  const file = filePicker.files?.[0];
  if (file) loadAtlasText(await file.text());
});

window.addEventListener('resize', resizeCanvas);

// -- startup -----------------------------------------------------------------

async function start(): Promise<void> {
  resizeCanvas();
  const params = new URLSearchParams(window.location.search);
  const source = params.get('atlas');
  if (!source) return;
  try {
    const response = await fetch(source);
    if (!response.ok) throw new Error(`HTTP ${response.status}`);
    loadAtlasText(await response.text());
  } catch (err) {
    showBanner(`Cannot fetch ${source}: ${(err as Error).message}`);
  }
}

void start();
