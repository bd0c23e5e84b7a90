/** Scatter-plot widget: one circle per result, positivity on the x-axis and
 * negativity on the y-axis. Dragging a rectangle filters to the circles
 * inside it; a zero-area click clears the filter. */

import type { Hit, SentimentRect } from "../types.js";
import { fullRect } from "../rect.js";
import {
  alphaFor,
  categoryColor,
  HIGHLIGHT_STROKE,
  HIGHLIGHT_STROKE_WIDTH,
} from "../marks.js";
import {
  BrushCallback,
  DEFAULT_FRAME,
  FilterWidget,
  Frame,
  clearChildren,
  pixelToValue,
  svgElement,
  valueToPixel,
} from "./base.js";

const MARK_RADIUS = 5;
const CLICK_TOLERANCE_PX = 3;

export class ScatterWidget implements FilterWidget {
  readonly el: SVGSVGElement;
  private readonly marks: SVGGElement;
  private readonly overlay: SVGRectElement;
  private readonly frame: Frame;
  private brushCallback: BrushCallback | null = null;
  private highlighted: string | null = null;
  private dragStart: { x: number; y: number } | null = null;
  private dragCurrent: { x: number; y: number } | null = null;

  constructor(doc: Document, frame: Frame = DEFAULT_FRAME) {
    this.frame = frame;
    this.el = svgElement(doc, "svg", {
      width: frame.width,
      height: frame.height,
      class: "widget scatter-widget",
      "data-widget": "scatter",
    });
    this.el.appendChild(this.axes(doc));
    this.marks = svgElement(doc, "g", { class: "marks" });
    this.el.appendChild(this.marks);
    this.overlay = svgElement(doc, "rect", {
      class: "brush-overlay",
      fill: "rgba(60, 90, 200, 0.12)",
      stroke: "#3c5ac8",
      "stroke-dasharray": "4 3",
      visibility: "hidden",
    });
    this.el.appendChild(this.overlay);
    this.bindMouse();
  }

  private get plotWidth(): number {
    return this.frame.width - 2 * this.frame.margin;
  }

  private get plotHeight(): number {
    return this.frame.height - 2 * this.frame.margin;
  }

  private xPixel(positivity: number): number {
    return this.frame.margin + valueToPixel(positivity, this.plotWidth);
  }

  /** negativity 1 sits at the bottom edge, 5 at the top. */
  private yPixel(negativity: number): number {
    return this.frame.margin + this.plotHeight - valueToPixel(negativity, this.plotHeight);
  }

  private axes(doc: Document): SVGGElement {
    const g = svgElement(doc, "g", { class: "axes" });
    const { margin } = this.frame;
    const x0 = margin;
    const y0 = margin;
    const y1 = margin + this.plotHeight;
    g.appendChild(svgElement(doc, "rect", {
      x: x0, y: y0, width: this.plotWidth, height: this.plotHeight,
      fill: "none", stroke: "#888",
    }));
    for (let tick = 1; tick <= 5; tick++) {
      const tx = this.xPixel(tick);
      const ty = this.yPixel(tick);
      const xLabel = svgElement(doc, "text", {
        x: tx, y: y1 + 14, "text-anchor": "middle", "font-size": 10, fill: "#444",
      });
      xLabel.textContent = String(tick);
      g.appendChild(xLabel);
      const yLabel = svgElement(doc, "text", {
        x: x0 - 6, y: ty + 3, "text-anchor": "end", "font-size": 10, fill: "#444",
      });
      yLabel.textContent = String(tick);
      g.appendChild(yLabel);
    }
    const xTitle = svgElement(doc, "text", {
      x: x0 + this.plotWidth / 2, y: y1 + 28,
      "text-anchor": "middle", "font-size": 11, fill: "#222",
    });
    xTitle.textContent = "positivity";
    g.appendChild(xTitle);
    const yTitle = svgElement(doc, "text", {
      x: 10, y: y0 + this.plotHeight / 2,
      "text-anchor": "middle", "font-size": 11, fill: "#222",
      transform: `rotate(-90 10 ${y0 + this.plotHeight / 2})`,
    });
    yTitle.textContent = "negativity";
    g.appendChild(yTitle);
    return g;
  }

  onBrush(callback: BrushCallback): void {
    this.brushCallback = callback;
  }

  render(hits: Hit[], rect: SentimentRect): void {
    void rect; // focus state arrives precomputed on each hit
    const doc = this.el.ownerDocument;
    clearChildren(this.marks);
    for (const hit of hits) {
      const circle = svgElement(doc, "circle", {
        cx: this.xPixel(hit.positivity),
        cy: this.yPixel(hit.negativity),
        r: MARK_RADIUS,
        fill: categoryColor(hit.display_category),
        "fill-opacity": alphaFor(hit.in_focus),
        "data-doc-id": hit.doc_id,
        "data-focus": String(hit.in_focus),
      });
      this.marks.appendChild(circle);
    }
    this.applyHighlight();
  }

  highlight(docId: string | null): void {
    this.highlighted = docId;
    this.applyHighlight();
  }

  private applyHighlight(): void {
    for (const mark of Array.from(this.marks.children)) {
      const isTarget =
        this.highlighted !== null &&
        mark.getAttribute("data-doc-id") === this.highlighted;
      if (isTarget) {
        mark.setAttribute("stroke", HIGHLIGHT_STROKE);
        mark.setAttribute("stroke-width", String(HIGHLIGHT_STROKE_WIDTH));
        mark.setAttribute("data-highlight", "true");
      } else {
        mark.removeAttribute("stroke");
        mark.removeAttribute("stroke-width");
        mark.removeAttribute("data-highlight");
      }
    }
  }

  /** Programmatic equivalent of a drag gesture; null means the zero-area
   * clear-filter click. */
  applyBrushRect(rect: SentimentRect | null): void {
    this.brushCallback?.(rect ?? fullRect());
  }

  private localPoint(event: MouseEvent): { x: number; y: number } {
    const bounds = this.el.getBoundingClientRect();
    return { x: event.clientX - bounds.left, y: event.clientY - bounds.top };
  }

  private bindMouse(): void {
    this.el.addEventListener("mousedown", (event) => {
      this.dragStart = this.localPoint(event as MouseEvent);
      this.dragCurrent = this.dragStart;
    });
    this.el.addEventListener("mousemove", (event) => {
      if (!this.dragStart) {
        return;
      }
      this.dragCurrent = this.localPoint(event as MouseEvent);
      this.drawOverlay();
    });
    this.el.addEventListener("mouseup", (event) => {
      if (!this.dragStart) {
        return;
      }
      const end = this.localPoint(event as MouseEvent);
      const start = this.dragStart;
      this.dragStart = null;
      this.dragCurrent = null;
      this.overlay.setAttribute("visibility", "hidden");
      if (
        Math.abs(end.x - start.x) <= CLICK_TOLERANCE_PX &&
        Math.abs(end.y - start.y) <= CLICK_TOLERANCE_PX
      ) {
        this.applyBrushRect(null); // zero-area gesture clears the filter
        return;
      }
      this.applyBrushRect(this.pixelsToRect(start, end));
    });
  }

  private pixelsToRect(
    a: { x: number; y: number },
    b: { x: number; y: number },
  ): SentimentRect {
    const { margin } = this.frame;
    const posA = pixelToValue(Math.min(a.x, b.x) - margin, this.plotWidth);
    const posB = pixelToValue(Math.max(a.x, b.x) - margin, this.plotWidth);
    // y is inverted: smaller pixel y means higher negativity
    const negA = pixelToValue(
      this.plotHeight - (Math.max(a.y, b.y) - margin), this.plotHeight,
    );
    const negB = pixelToValue(
      this.plotHeight - (Math.min(a.y, b.y) - margin), this.plotHeight,
    );
    return { pos_min: posA, pos_max: posB, neg_min: negA, neg_max: negB };
  }

  private drawOverlay(): void {
    if (!this.dragStart || !this.dragCurrent) {
      return;
    }
    const x = Math.min(this.dragStart.x, this.dragCurrent.x);
    const y = Math.min(this.dragStart.y, this.dragCurrent.y);
    this.overlay.setAttribute("x", String(x));
    this.overlay.setAttribute("y", String(y));
    this.overlay.setAttribute("width", String(Math.abs(this.dragCurrent.x - this.dragStart.x)));
    this.overlay.setAttribute("height", String(Math.abs(this.dragCurrent.y - this.dragStart.y)));
    this.overlay.setAttribute("visibility", "visible");
  }
}
