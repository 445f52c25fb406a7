/**
 * HTML renderers for the workbench panels. Everything renders from service
 * data via the pure layout helpers; no analysis happens here.
 */

import { buildLayers } from "./spans.js";
import { diffIr, formatIr } from "./irdiff.js";
import { layoutTree } from "./tree.js";
import type {
  AnalyzeResponse,
  DocumentData,
  ExceptionReport,
  IrData,
  KbTreeData,
} from "./types.js";

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function renderAnnotatedText(document: DocumentData): string {
  const width = document.text.length || 1;
  const rows = buildLayers(document).map((layer) => {
    const spans = layer.spans
      .map(({ annotation, lane, tooltip }) => {
        const left = (annotation.start / width) * 100;
        const right = (Math.max(annotation.end, annotation.start + 1) / width) * 100;
        const covered = document.text.slice(annotation.start, annotation.end);
        return `<span class="span" style="left:${left}%;width:${right - left}%;` +
          `top:${lane * 1.4}em;background:${layer.color}" ` +
          `title="${escapeHtml(tooltip)}">${escapeHtml(covered) || "·"}</span>`;
      })
      .join("");
    return `<div class="layer"><span class="layer-name">${escapeHtml(layer.type)}</span>` +
      `<div class="layer-track" style="height:${layer.lanes * 1.4}em">${spans}</div></div>`;
  });
  return `<div class="question-text">${escapeHtml(document.text)}</div>${rows.join("")}`;
}

export function renderTree(
  tree: KbTreeData,
  path: number[] = [],
  lastFired: number | null = null,
): string {
  const layout = layoutTree(tree, path, lastFired);
  const cell = 86;
  const rowHeight = 64;
  const nodes = layout.nodes
    .map((laid) => {
      const classes = ["node"];
      if (laid.onPath) classes.push("on-path");
      if (laid.lastFired) classes.push("last-fired");
      const title = laid.node.rule_text ?? "default rule: if True then null";
      return `<div class="${classes.join(" ")}" data-node="${laid.node.id}" ` +
        `style="left:${laid.column * cell}px;top:${laid.row * rowHeight}px" ` +
        `title="${escapeHtml(title)}">(${laid.node.id})</div>`;
    })
    .join("");
  const positions = new Map(
    layout.nodes.map((laid) => [laid.node.id, laid] as const),
  );
  const edges = layout.edges
    .map((edge) => {
      const from = positions.get(edge.from);
      const to = positions.get(edge.to);
      if (!from || !to) return "";
      const x1 = from.column * cell + 24;
      const y1 = from.row * rowHeight + 20;
      const x2 = to.column * cell + 24;
      const y2 = to.row * rowHeight + 20;
      const classes = `edge ${edge.kind}${edge.onPath ? " on-path" : ""}`;
      return `<line class="${classes}" x1="${x1}" y1="${y1}" x2="${x2}" y2="${y2}"></line>`;
    })
    .join("");
  const widthPx = layout.columns * cell + 60;
  const heightPx = layout.rows * rowHeight + 48;
  return `<div class="tree" style="width:${widthPx}px;height:${heightPx}px">` +
    `<svg width="${widthPx}" height="${heightPx}">${edges}</svg>${nodes}</div>`;
}

export function renderIr(ir: IrData | null): string {
  return `<code>${escapeHtml(formatIr(ir))}</code>`;
}

export function renderAnalysis(analysis: AnalyzeResponse): string {
  const pathText = analysis.path.map((n) => `(${n})`).join("-");
  const banner = analysis.unanalyzed
    ? '<p class="warn">No rule concluded — author an exception rule below.</p>'
    : "";
  return `${banner}<p>path ${escapeHtml(pathText)}, last fired (${analysis.last_fired})</p>` +
    `<p>${renderIr(analysis.ir)}</p>`;
}

export function renderDiff(report: ExceptionReport): string {
  const rows = diffIr(report.before, report.after)
    .map((row) => {
      const cls = row.changed ? ' class="changed"' : "";
      return `<tr${cls}><td>${escapeHtml(row.field)}</td>` +
        `<td>${escapeHtml(row.before)}</td><td>${escapeHtml(row.after)}</td></tr>`;
    })
    .join("");
  const stones = report.cornerstones
    .map((c) => `<li>node ${c.node} still concludes at (${c.last_fired}): ` +
      `${escapeHtml(c.question)}</li>`)
    .join("");
  return `<table class="diff"><thead><tr><th>slot</th><th>before</th><th>after</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>` +
    `<h4>cornerstone checks</h4><ul>${stones || "<li>none stored yet</li>"}</ul>`;
}
