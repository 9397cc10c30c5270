/** Canvas viewport: orbit camera, flat-shaded primitives, click-to-interact.
 * State derives solely from snapshots plus cosmetic tick interpolation. */

import { flatten, parseHierarchy } from '../sceneDoc.js';
import type { SessionStore } from '../sessionStore.js';
import { defaultCamera, type OrbitCamera } from '../viewport/math.js';
import { drawScene, interpolate, pick, type ScreenPolygon } from '../viewport/renderer.js';

export class ViewportPanel {
  readonly root: HTMLElement;
  readonly canvas: HTMLCanvasElement;
  readonly camera: OrbitCamera = defaultCamera();
  private polys: ScreenPolygon[] = [];
  private snapshotTime = 0;
  private dragging = false;
  private lastX = 0;
  private lastY = 0;
  private raf: number | null = null;

  constructor(
    private readonly store: SessionStore,
    doc: Document = document,
    private readonly animate: boolean = true,
  ) {
    this.root = doc.createElement('section');
    this.root.className = 'viewport-panel';
    this.canvas = doc.createElement('canvas');
    this.canvas.width = 800;
    this.canvas.height = 520;
    this.root.append(this.canvas);

    this.canvas.addEventListener('mousedown', (e) => {
      this.dragging = true;
      this.lastX = e.offsetX;
      this.lastY = e.offsetY;
    });
    this.canvas.addEventListener('mouseup', (e) => {
      const moved = Math.hypot(e.offsetX - this.lastX, e.offsetY - this.lastY);
      this.dragging = false;
      if (moved < 3) this.click(e.offsetX, e.offsetY);
    });
    this.canvas.addEventListener('mousemove', (e) => {
      if (!this.dragging) return;
      this.camera.yawDeg -= (e.offsetX - this.lastX) * 0.4;
      this.camera.pitchDeg = Math.max(
        -80,
        Math.min(80, this.camera.pitchDeg + (e.offsetY - this.lastY) * 0.3),
      );
      this.lastX = e.offsetX;
      this.lastY = e.offsetY;
      this.draw();
    });
    this.canvas.addEventListener('wheel', (e) => {
      this.camera.distance = Math.max(2, Math.min(60, this.camera.distance + e.deltaY * 0.01));
      this.draw();
    });

    store.subscribe(() => {
      this.snapshotTime = Date.now() / 1000;
      this.draw();
    });
    if (this.animate) this.loop();
  }

  private loop(): void {
    this.draw();
    this.raf = requestAnimationFrame(() => this.loop());
  }

  stop(): void {
    if (this.raf !== null) cancelAnimationFrame(this.raf);
  }

  private click(x: number, y: number): void {
    const name = pick(this.polys, x, y);
    this.store.select(name);
    if (name !== null) void this.store.interact(name);
  }

  draw(): void {
    const { snapshot, selection } = this.store.state;
    const ctx = this.canvas.getContext('2d');
    if (ctx === null || snapshot === null) return;
    const flat = flatten(parseHierarchy(snapshot));
    const dt = this.animate ? Math.max(0, Date.now() / 1000 - this.snapshotTime) : 0;
    const entities = interpolate(flat, dt, snapshot.clock);
    this.polys = drawScene(ctx, entities, this.camera, this.canvas.width, this.canvas.height, selection);
  }

  /** Test hook: what entity would a click at (x, y) hit? */
  pickAt(x: number, y: number): string | null {
    return pick(this.polys, x, y);
  }
}
