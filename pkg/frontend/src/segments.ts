/**
 * URL segmentation for the which-part-is-phishing picker.
 *
 * The server sends each component with its byte span into the UTF-8
 * encoding of the URL. The picker must render the URL exactly as sent and
 * map a click on a segment back to the server's ComponentRef, so segments
 * are built from the spans — component stretches become clickable pieces,
 * the delimiter bytes between them become inert filler pieces.
 */

import type { ComponentRef, WormPayload } from "./protocol.js";

export interface UiSegment {
  /** Server component identity; null for delimiter filler. */
  componentId: ComponentRef | null;
  text: string;
  start: number;
  end: number;
}

const encoder = new TextEncoder();
const decoder = new TextDecoder();

/**
 * Split the worm URL into an ordered, gap-free list of segments.
 * Concatenating the texts reproduces the URL exactly.
 */
export function buildSegments(worm: WormPayload): UiSegment[] {
  const bytes = encoder.encode(worm.url);
  const segments: UiSegment[] = [];
  let pos = 0;
  for (const component of worm.components) {
    const { start, end } = component.span;
    if (start < pos || end > bytes.length) {
      throw new Error(`component span [${start}, ${end}) out of order`);
    }
    if (start > pos) {
      segments.push({
        componentId: null,
        text: decoder.decode(bytes.subarray(pos, start)),
        start: pos,
        end: start,
      });
    }
    segments.push({
      componentId: component.id,
      text: component.text,
      start,
      end,
    });
    pos = end;
  }
  if (pos < bytes.length) {
    segments.push({
      componentId: null,
      text: decoder.decode(bytes.subarray(pos)),
      start: pos,
      end: bytes.length,
    });
  }
  return segments;
}

/** The locate action body a click on this segment submits, or null. */
export function actionForSegment(segment: UiSegment):
  | { type: "locate"; component: ComponentRef }
  | null {
  if (segment.componentId === null) {
    return null;
  }
  return { type: "locate", component: segment.componentId };
}
