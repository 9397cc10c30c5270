/** Minimal 3D math for the lo-fi viewport. Rotation convention matches
 * the runtime: Euler degrees applied Z, then X, then Y (world axes). */

export type Vec3 = [number, number, number];
export type Mat3 = [Vec3, Vec3, Vec3];

export const add = (a: Vec3, b: Vec3): Vec3 => [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
export const sub = (a: Vec3, b: Vec3): Vec3 => [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
export const scale = (a: Vec3, k: number): Vec3 => [a[0] * k, a[1] * k, a[2] * k];
export const dot = (a: Vec3, b: Vec3): number => a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
export const norm = (a: Vec3): number => Math.sqrt(dot(a, a));

export function normalize(a: Vec3): Vec3 {
  const n = norm(a);
  return n === 0 ? [0, 0, 0] : [a[0] / n, a[1] / n, a[2] / n];
}

export function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

export function matMul(a: Mat3, b: Mat3): Mat3 {
  const out: number[][] = [[0, 0, 0], [0, 0, 0], [0, 0, 0]];
  for (let i = 0; i < 3; i++)
    for (let j = 0; j < 3; j++)
      for (let k = 0; k < 3; k++) out[i]![j]! += a[i]![k]! * b[k]![j]!;
  return out as Mat3;
}

export function matVec(m: Mat3, v: Vec3): Vec3 {
  return [dot(m[0], v), dot(m[1], v), dot(m[2], v)];
}

const rad = (deg: number) => (deg * Math.PI) / 180;

export function rotX(deg: number): Mat3 {
  const c = Math.cos(rad(deg)), s = Math.sin(rad(deg));
  return [[1, 0, 0], [0, c, -s], [0, s, c]];
}

export function rotY(deg: number): Mat3 {
  const c = Math.cos(rad(deg)), s = Math.sin(rad(deg));
  return [[c, 0, s], [0, 1, 0], [-s, 0, c]];
}

export function rotZ(deg: number): Mat3 {
  const c = Math.cos(rad(deg)), s = Math.sin(rad(deg));
  return [[c, -s, 0], [s, c, 0], [0, 0, 1]];
}

/** Euler (degrees, Z-then-X-then-Y) to rotation matrix. */
export function eulerMatrix(euler: Vec3): Mat3 {
  return matMul(rotY(euler[1]), matMul(rotX(euler[0]), rotZ(euler[2])));
}

/** Rodrigues rotation about a unit axis. */
export function axisAngle(axis: Vec3, deg: number): Mat3 {
  const [x, y, z] = normalize(axis);
  const c = Math.cos(rad(deg)), s = Math.sin(rad(deg)), t = 1 - c;
  return [
    [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
    [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
    [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
  ];
}

export interface OrbitCamera {
  target: Vec3;
  distance: number;
  yawDeg: number; // around Y
  pitchDeg: number; // above the horizon
  fov: number; // vertical, degrees
}

export function defaultCamera(): OrbitCamera {
  return { target: [0, 1, 0], distance: 10, yawDeg: 35, pitchDeg: 22, fov: 55 };
}

export function cameraEye(cam: OrbitCamera): Vec3 {
  const yaw = rad(cam.yawDeg), pitch = rad(cam.pitchDeg);
  const r = cam.distance * Math.cos(pitch);
  return [
    cam.target[0] + r * Math.sin(yaw),
    cam.target[1] + cam.distance * Math.sin(pitch),
    cam.target[2] + r * Math.cos(yaw),
  ];
}

export interface Projected {
  x: number;
  y: number;
  depth: number; // camera-space distance along the view axis
}

/** World point to screen coordinates; null when behind the camera. */
export function project(
  cam: OrbitCamera,
  width: number,
  height: number,
  point: Vec3,
): Projected | null {
  const eye = cameraEye(cam);
  const forward = normalize(sub(cam.target, eye));
  const right = normalize(cross(forward, [0, 1, 0]));
  const up = cross(right, forward);
  const rel = sub(point, eye);
  const zc = dot(rel, forward);
  if (zc <= 0.05) return null;
  const xc = dot(rel, right);
  const yc = dot(rel, up);
  const f = (height / 2) / Math.tan(rad(cam.fov) / 2);
  return { x: width / 2 + (f * xc) / zc, y: height / 2 - (f * yc) / zc, depth: zc };
}

export function pointInPolygon(px: number, py: number, poly: Array<[number, number]>): boolean {
  let inside = false;
  for (let i = 0, j = poly.length - 1; i < poly.length; j = i++) {
    const [xi, yi] = poly[i]!;
    const [xj, yj] = poly[j]!;
    const crosses = yi > py !== yj > py && px < ((xj - xi) * (py - yi)) / (yj - yi) + xi;
    if (crosses) inside = !inside;
  }
  return inside;
}
