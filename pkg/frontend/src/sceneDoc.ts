/** Hierarchy-document helpers: parse snapshots, flatten for rendering,
 * and build the tree view model that mirrors the document nesting. */

import type { EntityDoc, Snapshot } from './types.js';

export interface FlatEntity {
  name: string;
  shape: string;
  position: [number, number, number];
  rotation: [number, number, number];
  scale: [number, number, number];
  color: string;
  hasHandlers: boolean;
  behaviors: EntityDoc['behaviors'];
  depth: number;
  parent: string | null;
}

export function parseHierarchy(snapshot: Snapshot): EntityDoc[] {
  return JSON.parse(snapshot.hierarchy) as EntityDoc[];
}

export function flatten(doc: EntityDoc[]): FlatEntity[] {
  const out: FlatEntity[] = [];
  const walk = (node: EntityDoc, depth: number, parent: string | null) => {
    out.push({
      name: node.name,
      shape: node.shape,
      position: node.position,
      rotation: node.rotation,
      scale: node.scale,
      color: node.color,
      hasHandlers: node.handlers.length > 0,
      behaviors: node.behaviors,
      depth,
      parent,
    });
    for (const child of node.children) walk(child, depth + 1, node.name);
  };
  for (const root of doc) walk(root, 0, null);
  return out;
}

export interface TreeRow {
  name: string;
  shape: string;
  depth: number;
  clickable: boolean;
}

/** Rows in document order with depth, exactly mirroring the nesting. */
export function treeRows(doc: EntityDoc[]): TreeRow[] {
  return flatten(doc).map((e) => ({
    name: e.name,
    shape: e.shape,
    depth: e.depth,
    clickable: e.hasHandlers,
  }));
}
