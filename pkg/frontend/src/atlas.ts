/** Atlas parsing and validation. Rejects anything that is not schema "1". */

import { Atlas, AtlasCluster, AtlasPoint } from './types.js';

export const SCHEMA_VERSION = '1';

export class AtlasFormatError extends Error {}

function fail(message: string): never {
  throw new AtlasFormatError(message);
}

function isObject(v: unknown): v is Record<string, unknown> {
  return typeof v === 'object' && v !== null && !Array.isArray(v);
}

function asString(v: unknown, where: string): string {
  if (typeof v !== 'string') fail(`${where} must be a string`);
  return v;
}

function asFiniteNumber(v: unknown, where: string): number {
  if (typeof v !== 'number' || !Number.isFinite(v)) fail(`${where} must be a finite number`);
  return v;
}

function parsePoint(v: unknown, i: number): AtlasPoint {
  if (!isObject(v)) fail(`points[${i}] must be an object`);
  return {
    id: asString(v.id, `points[${i}].id`),
    title: asString(v.title ?? '', `points[${i}].title`),
    authors: asString(v.authors ?? '', `points[${i}].authors`),
    journal: asString(v.journal ?? '', `points[${i}].journal`),
    url: asString(v.url ?? '', `points[${i}].url`),
    x: asFiniteNumber(v.x, `points[${i}].x`),
    y: asFiniteNumber(v.y, `points[${i}].y`),
    cluster: asFiniteNumber(v.cluster, `points[${i}].cluster`),
  };
}

function parseCluster(v: unknown, i: number): AtlasCluster {
  if (!isObject(v)) fail(`clusters[${i}] must be an object`);
  const terms = v.top_terms;
  if (!Array.isArray(terms)) fail(`clusters[${i}].top_terms must be an array`);
  return {
    id: asFiniteNumber(v.id, `clusters[${i}].id`),
    size: asFiniteNumber(v.size, `clusters[${i}].size`),
    top_terms: terms.map((t, j) => asString(t, `clusters[${i}].top_terms[${j}]`)),
  };
}

/**
 * Validate a parsed JSON document against atlas schema "1".
 * Throws AtlasFormatError with a readable message on any mismatch, so the
 * UI can show a banner and draw nothing.
 */
export function parseAtlas(doc: unknown): Atlas {
  if (!isObject(doc)) fail('atlas must be a JSON object');
  if (doc.schema_version !== SCHEMA_VERSION) {
    fail(`unsupported schema_version ${JSON.stringify(doc.schema_version)}; expected "${SCHEMA_VERSION}"`);
  }
  if (!Array.isArray(doc.points)) fail('points must be an array');
  if (!Array.isArray(doc.clusters)) fail('clusters must be an array');
  const points = doc.points.map(parsePoint);
  const clusters = doc.clusters.map(parseCluster);
  const clusterIds = new Set(clusters.map((c) => c.id));
  for (const [i, p] of points.entries()) {
    if (!clusterIds.has(p.cluster)) fail(`points[${i}] references unknown cluster ${p.cluster}`);
  }
  return {
    schema_version: SCHEMA_VERSION,
    points,
    clusters,
    provenance: isObject(doc.provenance) ? doc.provenance : {},
  };
}

export function parseAtlasJson(text: string): Atlas {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    fail(`not valid JSON: ${(err as Error).message}`);
  }
  return parseAtlas(doc);
}
