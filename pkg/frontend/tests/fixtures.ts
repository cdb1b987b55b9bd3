/** Deterministic atlas generators for tests (no dependencies). */

import { Atlas, AtlasPoint } from '../src/types.js';

/** mulberry32: tiny seeded PRNG, plenty for fixtures. */
export function rng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function makeAtlas(nPoints: number, nClusters: number, seed = 1): Atlas {
  const rand = rng(seed);
  const points: AtlasPoint[] = [];
  const sizes = new Array<number>(nClusters).fill(0);
  for (let i = 0; i < nPoints; i++) {
    const cluster = i % nClusters;
    sizes[cluster]++;
    points.push({
      id: `p${i}`,
      title: `Paper ${i} about topic ${cluster}`,
      authors: `Author ${i % 7}, Author ${(i + 1) % 7} et al.`,
      journal: `Journal ${i % 3}`,
      url: i % 5 === 4 ? '' : `https://example.org/paper/${i}`,
      x: rand() * 200 - 100 + 30 * Math.cos((2 * Math.PI * cluster) / nClusters),
      y: rand() * 200 - 100 + 30 * Math.sin((2 * Math.PI * cluster) / nClusters),
      cluster,
    });
  }
  return {
    schema_version: '1',
    points,
    clusters: Array.from({ length: nClusters }, (_, id) => ({
      id,
      size: sizes[id],
      top_terms: [`term${id}a`, `term${id}b`, `term${id}c`],
    })),
    provenance: { config_hash: 'fixture', chosen_k: nClusters },
  };
}

export interface StubCall {
  op: string;
  args: number[];
}

/** Records draw operations; satisfies the renderer's Canvas2DLike. */
export function stubContext() {
  const calls: StubCall[] = [];
  return {
    calls,
    fillStyle: '' as string,
    strokeStyle: '' as string,
    lineWidth: 1,
    globalAlpha: 1,
    clearRect: (...args: number[]) => void calls.push({ op: 'clearRect', args }),
    fillRect: (...args: number[]) => void calls.push({ op: 'fillRect', args }),
    strokeRect: (...args: number[]) => void calls.push({ op: 'strokeRect', args }),
    beginPath: () => void calls.push({ op: 'beginPath', args: [] }),
    arc: (...args: number[]) => void calls.push({ op: 'arc', args }),
    fill: () => void calls.push({ op: 'fill', args: [] }),
    stroke: () => void calls.push({ op: 'stroke', args: [] }),
  };
}
