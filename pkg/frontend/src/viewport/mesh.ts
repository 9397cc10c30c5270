/** Unit meshes for the five primitive shapes, as convex face lists.
 * Unknown shapes render as a labeled diamond placeholder, never a crash. */

import type { Vec3 } from './math.js';

export interface Face {
  vertices: Vec3[]; // convex, counter-clockwise seen from outside
}

export interface Mesh {
  faces: Face[];
  placeholder: boolean;
}

function quad(a: Vec3, b: Vec3, c: Vec3, d: Vec3): Face {
  return { vertices: [a, b, c, d] };
}

function cube(): Face[] {
  const s = 0.5;
  return [
    quad([-s, -s, s], [s, -s, s], [s, s, s], [-s, s, s]),
    quad([s, -s, -s], [-s, -s, -s], [-s, s, -s], [s, s, -s]),
    quad([s, -s, s], [s, -s, -s], [s, s, -s], [s, s, s]),
    quad([-s, -s, -s], [-s, -s, s], [-s, s, s], [-s, s, -s]),
    quad([-s, s, s], [s, s, s], [s, s, -s], [-s, s, -s]),
    quad([-s, -s, -s], [s, -s, -s], [s, -s, s], [-s, -s, s]),
  ];
}

function plane(): Face[] {
  const s = 0.5;
  return [
    quad([-s, 0, s], [s, 0, s], [s, 0, -s], [-s, 0, -s]),
    quad([-s, 0, -s], [s, 0, -s], [s, 0, s], [-s, 0, s]), // underside
  ];
}

function latLong(
  radialSegments: number,
  rings: number,
  radiusAt: (t: number) => number,
  yAt: (t: number) => number,
): Face[] {
  const faces: Face[] = [];
  const point = (ring: number, seg: number): Vec3 => {
    const t = ring / rings;
    const a = (seg / radialSegments) * Math.PI * 2;
    const r = radiusAt(t);
    return [r * Math.cos(a), yAt(t), r * Math.sin(a)];
  };
  for (let ring = 0; ring < rings; ring++) {
    for (let seg = 0; seg < radialSegments; seg++) {
      const p1 = point(ring, seg);
      const p2 = point(ring, seg + 1);
      const p3 = point(ring + 1, seg + 1);
      const p4 = point(ring + 1, seg);
      faces.push({ vertices: [p1, p2, p3, p4] });
    }
  }
  return faces;
}

function sphere(): Face[] {
  return latLong(
    10,
    8,
    (t) => 0.5 * Math.sin(Math.PI * t),
    (t) => 0.5 * Math.cos(Math.PI * t),
  );
}

function cylinder(): Face[] {
  const sides = 12;
  const faces = latLong(sides, 1, () => 0.5, (t) => 0.5 - t);
  const top: Vec3[] = [];
  const bottom: Vec3[] = [];
  for (let seg = 0; seg < sides; seg++) {
    const a = (seg / sides) * Math.PI * 2;
    top.push([0.5 * Math.cos(a), 0.5, 0.5 * Math.sin(a)]);
    bottom.push([0.5 * Math.cos(-a), -0.5, 0.5 * Math.sin(-a)]);
  }
  faces.push({ vertices: top.reverse() }, { vertices: bottom });
  return faces;
}

function capsule(): Face[] {
  // Cylinder body with hemispherical ends, all within the unit box.
  return latLong(10, 8, (t) => {
    if (t < 0.25) return 0.25 * Math.sin((t / 0.25) * (Math.PI / 2));
    if (t > 0.75) return 0.25 * Math.sin(((1 - t) / 0.25) * (Math.PI / 2));
    return 0.25;
  }, (t) => 0.5 - t);
}

function placeholderDiamond(): Face[] {
  const top: Vec3 = [0, 0.5, 0];
  const bottom: Vec3 = [0, -0.5, 0];
  const ring: Vec3[] = [
    [0.35, 0, 0],
    [0, 0, 0.35],
    [-0.35, 0, 0],
    [0, 0, -0.35],
  ];
  const faces: Face[] = [];
  for (let i = 0; i < 4; i++) {
    const a = ring[i]!;
    const b = ring[(i + 1) % 4]!;
    faces.push({ vertices: [top, b, a] }, { vertices: [bottom, a, b] });
  }
  return faces;
}

const MESHES: Record<string, Face[]> = {
  cube: cube(),
  sphere: sphere(),
  cylinder: cylinder(),
  plane: plane(),
  capsule: capsule(),
};

export function meshFor(shape: string): Mesh {
  const faces = MESHES[shape];
  if (faces) return { faces, placeholder: false };
  return { faces: placeholderDiamond(), placeholder: true };
}
