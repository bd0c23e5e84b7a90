/** Parallel-coordinates widget: negativity on the left axis, positivity on
 * the right, one line per result. Dragging along an axis keeps only the lines
 * whose endpoint on that axis falls inside the dragged range; a zero-length
 * drag resets that axis. A clear button resets both axes. */

import type { Hit, SentimentRect } from "../types.js";
import { axisBrushToRect, fullRect } from "../rect.js";
import type { Axis } from "../rect.js";
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

const LINE_WIDTH = 2;
const AXIS_GRAB_PX = 18;
const CLICK_TOLERANCE_PX = 3;

export class ParallelWidget implements FilterWidget {
  readonly el: HTMLElement;
  readonly svg: SVGSVGElement;
  readonly clearButton: HTMLButtonElement;
  private readonly marks: SVGGElement;
  private readonly frame: Frame;
  private brushCallback: BrushCallback | null = null;
  private highlighted: string | null = null;
  private currentRect: SentimentRect = fullRect();
  private drag: { axis: Axis; startY: number } | null = null;

  constructor(doc: Document, frame: Frame = DEFAULT_FRAME) {
    this.frame = frame;
    this.el = doc.createElement("div");
    this.el.className = "widget parallel-widget";
    this.el.setAttribute("data-widget", "parallel");
    this.svg = svgElement(doc, "svg", { width: frame.width, height: frame.height });
    this.el.appendChild(this.svg);
    this.svg.appendChild(this.axes(doc));
    this.marks = svgElement(doc, "g", { class: "marks" });
    this.svg.appendChild(this.marks);
    this.clearButton = doc.createElement("button");
    this.clearButton.type = "button";
    this.clearButton.textContent = "clear filter";
    this.clearButton.setAttribute("data-action", "clear-filter");
    this.clearButton.addEventListener("click", () => this.clearFilter());
    this.el.appendChild(this.clearButton);
    this.bindMouse();
  }

  private get plotHeight(): number {
    return this.frame.height - 2 * this.frame.margin;
  }

  private get leftX(): number {
    return this.frame.margin;
  }

  private get rightX(): number {
    return this.frame.width - this.frame.margin;
  }

  /** value 1 sits at the bottom of each axis, 5 at the top. */
  private yPixel(value: number): number {
    return this.frame.margin + this.plotHeight - valueToPixel(value, this.plotHeight);
  }

  private axes(doc: Document): SVGGElement {
    const g = svgElement(doc, "g", { class: "axes" });
    for (const [x, label] of [
      [this.leftX, "negativity"],
      [this.rightX, "positivity"],
    ] as const) {
      g.appendChild(svgElement(doc, "line", {
        x1: x, y1: this.frame.margin,
        x2: x, y2: this.frame.margin + this.plotHeight,
        stroke: "#888", "stroke-width": 1,
      }));
      for (let tick = 1; tick <= 5; tick++) {
        const text = svgElement(doc, "text", {
          x: x === this.leftX ? x - 6 : x + 6,
          y: this.yPixel(tick) + 3,
          "text-anchor": x === this.leftX ? "end" : "start",
          "font-size": 10,
          fill: "#444",
        });
        text.textContent = String(tick);
        g.appendChild(text);
      }
      const title = svgElement(doc, "text", {
        x, y: this.frame.margin - 10,
        "text-anchor": "middle", "font-size": 11, fill: "#222",
      });
      title.textContent = label;
      g.appendChild(title);
    }
    return g;
  }

  onBrush(callback: BrushCallback): void {
    this.brushCallback = callback;
  }

  render(hits: Hit[], rect: SentimentRect): void {
    this.currentRect = rect;
    const doc = this.svg.ownerDocument;
    clearChildren(this.marks);
    for (const hit of hits) {
      const line = svgElement(doc, "line", {
        x1: this.leftX,
        y1: this.yPixel(hit.negativity),
        x2: this.rightX,
        y2: this.yPixel(hit.positivity),
        stroke: categoryColor(hit.display_category),
        "stroke-width": LINE_WIDTH,
        "stroke-opacity": alphaFor(hit.in_focus),
        "data-doc-id": hit.doc_id,
        "data-focus": String(hit.in_focus),
      });
      this.marks.appendChild(line);
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
        const hit = mark.getAttribute("data-doc-id");
        void hit;
        mark.setAttribute("stroke-width", String(LINE_WIDTH));
        mark.removeAttribute("data-highlight");
      }
    }
  }

  /** Programmatic equivalent of an axis drag. */
  applyAxisBrush(axis: Axis, lo: number, hi: number): void {
    const rect = axisBrushToRect(axis, lo, hi, this.currentRect);
    this.currentRect = rect;
    this.brushCallback?.(rect);
  }

  clearFilter(): void {
    this.currentRect = fullRect();
    this.brushCallback?.(this.currentRect);
  }

  private axisAt(x: number): Axis | null {
    if (Math.abs(x - this.leftX) <= AXIS_GRAB_PX) {
      return "negativity";
    }
    if (Math.abs(x - this.rightX) <= AXIS_GRAB_PX) {
      return "positivity";
    }
    return null;
  }

  private bindMouse(): void {
    this.svg.addEventListener("mousedown", (event) => {
      const bounds = this.svg.getBoundingClientRect();
      const x = (event as MouseEvent).clientX - bounds.left;
      const y = (event as MouseEvent).clientY - bounds.top;
      const axis = this.axisAt(x);
      if (axis) {
        this.drag = { axis, startY: y };
      }
    });
    this.svg.addEventListener("mouseup", (event) => {
      if (!this.drag) {
        return;
      }
      const bounds = this.svg.getBoundingClientRect();
      const endY = (event as MouseEvent).clientY - bounds.top;
      const { axis, startY } = this.drag;
      this.drag = null;
      if (Math.abs(endY - startY) <= CLICK_TOLERANCE_PX) {
        this.applyAxisBrush(axis, 1, 5); // zero-length drag resets this axis
        return;
      }
      const valueA = this.pixelToAxisValue(startY);
      const valueB = this.pixelToAxisValue(endY);
      this.applyAxisBrush(axis, Math.min(valueA, valueB), Math.max(valueA, valueB));
    });
  }

  private pixelToAxisValue(y: number): number {
    return pixelToValue(this.plotHeight - (y - this.frame.margin), this.plotHeight);
  }
}
