/** Hierarchy parsing and the tree view model. */

import { describe, expect, it } from 'vitest';

import { flatten, parseHierarchy, treeRows } from '../src/sceneDoc.js';
import type { Snapshot } from '../src/types.js';
import { loadFixture } from './mockServer.js';

const fixture = loadFixture();

const nested: Snapshot = {
  hierarchy: JSON.stringify([
    {
      name: 'table', shape: 'cube', position: [0, 0, 0], rotation: [0, 0, 0], scale: [1, 1, 1],
      color: '#FFFFFF', behaviors: [], handlers: [],
      children: [
        {
          name: 'apple', shape: 'sphere', position: [0, 1, 0], rotation: [0, 0, 0],
          scale: [0.3, 0.3, 0.3], color: '#FF0000', behaviors: [], handlers: ['set self color=#00FF00'],
          children: [],
        },
      ],
    },
    {
      name: 'lamp', shape: 'cylinder', position: [2, 0, 0], rotation: [0, 0, 0], scale: [1, 1, 1],
      color: '#FFFF00', behaviors: [], handlers: [], children: [],
    },
  ]),
  clock: 0,
  scene_hash: 'x',
};

describe('sceneDoc', () => {
  it('tree rows mirror the document nesting exactly', () => {
    const rows = treeRows(parseHierarchy(nested));
    expect(rows.map((r) => [r.name, r.depth])).toEqual([
      ['table', 0],
      ['apple', 1],
      ['lamp', 0],
    ]);
    expect(rows[1]!.clickable).toBe(true);
    expect(rows[0]!.clickable).toBe(false);
  });

  it('empty snapshot flattens to nothing', () => {
    expect(flatten(parseHierarchy({ hierarchy: '[]', clock: 0, scene_hash: 'x' }))).toEqual([]);
  });

  it('parses the recorded final snapshot', () => {
    const flat = flatten(parseHierarchy(fixture.snapshot_final));
    const crimson = flat.find((e) => e.name === 'crimson');
    expect(crimson).toBeDefined();
    expect(crimson!.color).toBe('#FF0000');
    expect(crimson!.hasHandlers).toBe(true);
  });

  it('records parent names', () => {
    const flat = flatten(parseHierarchy(nested));
    expect(flat.find((e) => e.name === 'apple')!.parent).toBe('table');
    expect(flat.find((e) => e.name === 'table')!.parent).toBeNull();
  });
});
