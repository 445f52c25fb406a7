/**
 * Span layout for the annotation viewer: one color band per annotation
 * type, annotations placed into lanes so overlapping spans of the same type
 * never collide visually.
 */

import type { AnnotationData, DocumentData } from "./types.js";

/** Display order: base layer at the bottom, rule postings on top. */
const LAYER_ORDER = [
  "TokenVn",
  "Token",
  "Noun",
  "Verb",
  "Preps",
  "NounPhrase",
  "QuestionPhrase",
  "Relation",
];

const PALETTE = [
  "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462",
  "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
];

export interface LaidSpan {
  annotation: AnnotationData;
  lane: number;
  tooltip: string;
}

export interface Layer {
  type: string;
  color: string;
  lanes: number;
  spans: LaidSpan[];
}

export function featureTooltip(annotation: AnnotationData): string {
  const features = Object.entries(annotation.features)
    .map(([name, value]) => `${name}=${value}`)
    .join(", ");
  return features ? `${annotation.type}(${features})` : annotation.type;
}

function sortSpans(spans: AnnotationData[]): AnnotationData[] {
  return [...spans].sort((a, b) =>
    a.start === b.start ? b.end - a.end || a.id - b.id : a.start - b.start,
  );
}

/** Greedy lane assignment: a span takes the first lane it does not touch. */
function assignLanes(spans: AnnotationData[]): LaidSpan[] {
  const laneEnds: number[] = [];
  const laid: LaidSpan[] = [];
  for (const annotation of sortSpans(spans)) {
    let lane = laneEnds.findIndex((end) => end <= annotation.start);
    if (lane === -1) {
      lane = laneEnds.length;
      laneEnds.push(0);
    }
    laneEnds[lane] = Math.max(annotation.end, annotation.start + 1);
    laid.push({ annotation, lane, tooltip: featureTooltip(annotation) });
  }
  return laid;
}

export function layerOrder(types: Iterable<string>): string[] {
  const present = new Set(types);
  const ordered = LAYER_ORDER.filter((t) => present.has(t));
  const rest = [...present].filter((t) => !LAYER_ORDER.includes(t)).sort();
  return [...ordered, ...rest];
}

/** Group a document's annotations into renderable color-banded layers. */
export function buildLayers(document: DocumentData): Layer[] {
  const byType = new Map<string, AnnotationData[]>();
  for (const annotation of document.annotations) {
    const bucket = byType.get(annotation.type) ?? [];
    bucket.push(annotation);
    byType.set(annotation.type, bucket);
  }
  return layerOrder(byType.keys()).map((type, index) => {
    const spans = assignLanes(byType.get(type) ?? []);
    const lanes = spans.reduce((max, s) => Math.max(max, s.lane + 1), 1);
    return { type, color: PALETTE[index % PALETTE.length]!, lanes, spans };
  });
}
