/**
 * Shared pan/zoom viewport. In compare mode both panes render through the
 * same viewport object, so zooming one pane moves the other identically.
 */

export interface Viewport {
  scale: number;
  x: number;
  y: number;
}

export function initialViewport(): Viewport {
  return { scale: 1, x: 0, y: 0 };
}

/** Zoom by `factor` keeping the content point under (cx, cy) fixed. */
export function zoomAt(vp: Viewport, factor: number, cx: number, cy: number): Viewport {
  const scale = Math.min(Math.max(vp.scale * factor, 0.25), 32);
  const applied = scale / vp.scale;
  return {
    scale,
    x: cx - (cx - vp.x) * applied,
    y: cy - (cy - vp.y) * applied,
  };
}

export function panBy(vp: Viewport, dx: number, dy: number): Viewport {
  return { scale: vp.scale, x: vp.x + dx, y: vp.y + dy };
}

export function cssTransform(vp: Viewport): string {
  return `translate(${vp.x}px, ${vp.y}px) scale(${vp.scale})`;
}

/** Bind pointer + wheel events on panes that share one viewport. */
export function bindPanZoom(
  panes: HTMLElement[],
  onChange: (vp: Viewport) => void,
  vp: Viewport = initialViewport(),
): () => Viewport {
  let viewport = vp;
  let dragging = false;
  let lastX = 0;
  let lastY = 0;

  const apply = () => onChange(viewport);
  for (const pane of panes) {
    pane.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      const rect = pane.getBoundingClientRect();
      const factor = ev.deltaY < 0 ? 1.2 : 1 / 1.2;
      viewport = zoomAt(viewport, factor,
                        ev.clientX - rect.left, ev.clientY - rect.top);
      apply();
    }, { passive: false });
    pane.addEventListener("pointerdown", (ev) => {
      dragging = true;
      lastX = ev.clientX;
      lastY = ev.clientY;
      pane.setPointerCapture(ev.pointerId);
    });
    pane.addEventListener("pointermove", (ev) => {
      if (!dragging) return;
      viewport = panBy(viewport, ev.clientX - lastX, ev.clientY - lastY);
      lastX = ev.clientX;
      lastY = ev.clientY;
      apply();
    });
    pane.addEventListener("pointerup", () => {
      dragging = false;
    });
  }
  apply();
  return () => viewport;
}
