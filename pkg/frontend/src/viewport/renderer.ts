/** Flat-shaded painter's-algorithm renderer over canvas 2D, with picking.
 * Deliberately lo-fi: primitives, one directional light, no textures. */

import type { FlatEntity } from '../sceneDoc.js';
import {
  add,
  axisAngle,
  cross,
  dot,
  eulerMatrix,
  matMul,
  matVec,
  normalize,
  type Mat3,
  type OrbitCamera,
  pointInPolygon,
  project,
  scale as vscale,
  sub,
  type Vec3,
} from './math.js';
import { meshFor } from './mesh.js';

export interface RenderEntity {
  name: string;
  shape: string;
  position: Vec3;
  rotation: Mat3;
  scale: Vec3;
  color: string;
  clickable: boolean;
  placeholderLabel: string | null;
}

export interface ScreenPolygon {
  name: string;
  points: Array<[number, number]>;
  depth: number;
  fill: string;
  clickable: boolean;
}

const LIGHT = normalize([0.4, 0.8, 0.45] as Vec3);

export function toRenderEntities(entities: FlatEntity[]): RenderEntity[] {
  return entities.map((e) => {
    const mesh = meshFor(e.shape);
    return {
      name: e.name,
      shape: e.shape,
      position: e.position as Vec3,
      rotation: eulerMatrix(e.rotation as Vec3),
      scale: e.scale as Vec3,
      color: e.color,
      clickable: e.hasHandlers,
      placeholderLabel: mesh.placeholder ? `${e.name} (${e.shape}?)` : null,
    };
  });
}

/** Advance motion client-side for display between authoritative snapshots.
 * Mirrors the runtime's behavior semantics; purely cosmetic. */
export function interpolate(entities: FlatEntity[], dt: number, clock: number): RenderEntity[] {
  const byName = new Map(entities.map((e) => [e.name, e]));
  return entities.map((e) => {
    let position = e.position as Vec3;
    let rotation = eulerMatrix(e.rotation as Vec3);
    for (const behavior of e.behaviors) {
      const p = behavior as Record<string, any>;
      if (behavior.kind === 'spin' && Array.isArray(p.axis)) {
        rotation = matMul(axisAngle(p.axis as Vec3, Number(p.speed ?? 0) * dt), rotation);
      } else if (behavior.kind === 'orbit') {
        const center = byName.get(String(p.center));
        if (center) {
          const angle = ((Number(p.angle ?? 0) + Number(p.speed ?? 0) * dt) * Math.PI) / 180;
          const r = Number(p.radius ?? 0);
          position = [
            center.position[0] + r * Math.cos(angle),
            position[1],
            center.position[2] + r * Math.sin(angle),
          ];
        }
      } else if (behavior.kind === 'oscillate' && Array.isArray(p.origin) && Array.isArray(p.axis)) {
        const offset =
          Number(p.amplitude ?? 0) * Math.sin((2 * Math.PI * (clock + dt)) / Number(p.period ?? 1));
        position = add(p.origin as Vec3, vscale(p.axis as Vec3, offset));
      } else if (behavior.kind === 'follow') {
        const target = byName.get(String(p.target));
        if (target) {
          const delta = sub(target.position as Vec3, position);
          const dist = Math.hypot(...delta);
          if (dist > 0) {
            const step = Math.min(Number(p.speed ?? 0) * dt, dist);
            position = add(position, vscale(delta, step / dist));
          }
        }
      }
    }
    const mesh = meshFor(e.shape);
    return {
      name: e.name,
      shape: e.shape,
      position,
      rotation,
      scale: e.scale as Vec3,
      color: e.color,
      clickable: e.hasHandlers,
      placeholderLabel: mesh.placeholder ? `${e.name} (${e.shape}?)` : null,
    };
  });
}

function shade(hex: string, factor: number): string {
  const r = parseInt(hex.slice(1, 3), 16);
  const g = parseInt(hex.slice(3, 5), 16);
  const b = parseInt(hex.slice(5, 7), 16);
  const f = Math.max(0.25, Math.min(1, factor));
  const c = (v: number) => Math.round(v * f).toString(16).padStart(2, '0');
  return `#${c(r)}${c(g)}${c(b)}`;
}

/** Transform, cull, project, and depth-sort the scene into 2D polygons. */
export function buildScreenPolygons(
  entities: RenderEntity[],
  cam: OrbitCamera,
  width: number,
  height: number,
  selected: string | null,
): ScreenPolygon[] {
  const polys: ScreenPolygon[] = [];
  for (const entity of entities) {
    const mesh = meshFor(entity.shape);
    for (const face of mesh.faces) {
      const world = face.vertices.map((v) => {
        const scaled: Vec3 = [v[0] * entity.scale[0], v[1] * entity.scale[1], v[2] * entity.scale[2]];
        return add(matVec(entity.rotation, scaled), entity.position);
      });
      const projected = world.map((p) => project(cam, width, height, p));
      if (projected.some((p) => p === null)) continue;
      const points = projected.map((p) => [p!.x, p!.y] as [number, number]);
      const depth = projected.reduce((acc, p) => acc + p!.depth, 0) / projected.length;
      const a = world[0]!, b = world[1]!, c = world[2]!;
      const normal = normalize(cross(sub(b, a), sub(c, a)));
      const brightness = 0.55 + 0.45 * Math.abs(dot(normal, LIGHT));
      const baseColor = entity.placeholderLabel ? '#888888' : entity.color;
      const fill = entity.name === selected ? shade('#FFB347', brightness) : shade(baseColor, brightness);
      polys.push({ name: entity.name, points, depth, fill, clickable: entity.clickable });
    }
  }
  polys.sort((a, b) => b.depth - a.depth);
  return polys;
}

/** Topmost entity under a screen point, or null. */
export function pick(polys: ScreenPolygon[], x: number, y: number): string | null {
  for (let i = polys.length - 1; i >= 0; i--) {
    const poly = polys[i]!;
    if (pointInPolygon(x, y, poly.points)) return poly.name;
  }
  return null;
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  entities: RenderEntity[],
  cam: OrbitCamera,
  width: number,
  height: number,
  selected: string | null,
): ScreenPolygon[] {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = '#16181d';
  ctx.fillRect(0, 0, width, height);
  drawGrid(ctx, cam, width, height);
  const polys = buildScreenPolygons(entities, cam, width, height, selected);
  for (const poly of polys) {
    ctx.beginPath();
    const [first, ...rest] = poly.points;
    if (!first) continue;
    ctx.moveTo(first[0], first[1]);
    for (const [x, y] of rest) ctx.lineTo(x, y);
    ctx.closePath();
    ctx.fillStyle = poly.fill;
    ctx.fill();
    ctx.strokeStyle = 'rgba(0,0,0,0.25)';
    ctx.stroke();
  }
  for (const entity of entities) {
    if (entity.placeholderLabel) {
      const p = project(cam, width, height, entity.position);
      if (p) {
        ctx.fillStyle = '#dddddd';
        ctx.font = '11px sans-serif';
        ctx.fillText(entity.placeholderLabel, p.x + 6, p.y - 6);
      }
    }
  }
  return polys;
}

function drawGrid(
  ctx: CanvasRenderingContext2D,
  cam: OrbitCamera,
  width: number,
  height: number,
): void {
  ctx.strokeStyle = 'rgba(255,255,255,0.08)';
  for (let i = -5; i <= 5; i++) {
    const a = project(cam, width, height, [i, 0, -5]);
    const b = project(cam, width, height, [i, 0, 5]);
    const c = project(cam, width, height, [-5, 0, i]);
    const d = project(cam, width, height, [5, 0, i]);
    if (a && b) line(ctx, a.x, a.y, b.x, b.y);
    if (c && d) line(ctx, c.x, c.y, d.x, d.y);
  }
}

function line(ctx: CanvasRenderingContext2D, x1: number, y1: number, x2: number, y2: number) {
  ctx.beginPath();
  ctx.moveTo(x1, y1);
  ctx.lineTo(x2, y2);
  ctx.stroke();
}
