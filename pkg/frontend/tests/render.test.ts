import { describe, expect, it } from 'vitest';

import { drawAtlas, tooltipLines } from '../src/render.js';
import { initialViewState, setSearch, toggleCluster, visiblePointCount } from '../src/state.js';
import { makeAtlas, stubContext } from './fixtures.js';

const W = 800;
const H = 600;

describe('drawAtlas', () => {
  const atlas = makeAtlas(120, 5);

  it('draws exactly the visible points, no more, no less', () => {
    const ctx = stubContext();
    const state = initialViewState(atlas, W, H);
    const stats = drawAtlas(ctx, atlas, state, W, H);
    expect(stats.drawn).toBe(120);
    expect(ctx.calls.filter((c) => c.op === 'fillRect')).toHaveLength(120);
  });

  it('toggling one cluster removes exactly its size from the draw count', () => {
    const state = toggleCluster(initialViewState(atlas, W, H), 3);
    const stats = drawAtlas(stubContext(), atlas, state, W, H);
    expect(stats.drawn).toBe(120 - atlas.clusters[3].size);
    expect(stats.drawn).toBe(visiblePointCount(atlas, state));
  });

  it('search highlights exactly the matching visible titles', () => {
    const state = setSearch(initialViewState(atlas, W, H), 'topic 1');
    const stats = drawAtlas(stubContext(), atlas, state, W, H);
    const expected = atlas.points.filter((p) =>
      p.title.toLowerCase().includes('topic 1')
    ).length;
    expect(stats.highlighted).toBe(expected);
    expect(expected).toBeGreaterThan(0);
  });

  it('hover ring is drawn for a visible hovered point only', () => {
    const base = initialViewState(atlas, W, H);
    const ctx1 = stubContext();
    drawAtlas(ctx1, atlas, { ...base, hoveredPoint: 4 }, W, H);
    expect(ctx1.calls.some((c) => c.op === 'arc')).toBe(true);

    const hiddenCluster = atlas.points[4].cluster;
    const ctx2 = stubContext();
    drawAtlas(ctx2, atlas, { ...toggleCluster(base, hiddenCluster), hoveredPoint: 4 }, W, H);
    expect(ctx2.calls.some((c) => c.op === 'arc')).toBe(false);
  });

  it('selection marks visible selected points', () => {
    const base = initialViewState(atlas, W, H);
    const ctx = stubContext();
    drawAtlas(ctx, atlas, { ...base, selection: new Set([0, 1, 2]) }, W, H);
    expect(ctx.calls.filter((c) => c.op === 'strokeRect')).toHaveLength(3);
  });

  it('clears the canvas before drawing', () => {
    const ctx = stubContext();
    drawAtlas(ctx, atlas, initialViewState(atlas, W, H), W, H);
    expect(ctx.calls[0].op).toBe('clearRect');
  });

  it('empty atlas draws nothing', () => {
    const empty = makeAtlas(0, 0);
    const stats = drawAtlas(stubContext(), empty, initialViewState(empty, W, H), W, H);
    expect(stats.drawn).toBe(0);
  });
});

describe('tooltipLines', () => {
  const atlas = makeAtlas(30, 3);

  it('starts with the title and includes authors, journal and cluster terms', () => {
    const lines = tooltipLines(atlas, 5);
    const p = atlas.points[5];
    expect(lines[0]).toBe(p.title);
    expect(lines).toContain(p.authors);
    expect(lines).toContain(p.journal);
    expect(lines.some((l) => l.includes(`cluster ${p.cluster}`))).toBe(true);
  });

  it('notes missing links', () => {
    const i = atlas.points.findIndex((p) => p.url === '');
    expect(tooltipLines(atlas, i)).toContain('no link');
  });

  it('shows the url when present', () => {
    const i = atlas.points.findIndex((p) => p.url !== '');
    expect(tooltipLines(atlas, i)).toContain(atlas.points[i].url);
  });
});
