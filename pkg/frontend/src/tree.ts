/**
 * Knowledge-base tree layout. Rendering is a pure function of the /kb
 * response plus an optional evaluation path: except children grow downward,
 * false children to the right, each node placed on a column/row grid.
 */

import type { KbNodeData, KbTreeData } from "./types.js";

export interface LaidNode {
  node: KbNodeData;
  row: number;
  column: number;
  onPath: boolean;
  lastFired: boolean;
}

export interface TreeEdge {
  from: number;
  to: number;
  kind: "except" | "false";
  onPath: boolean;
}

export interface TreeLayout {
  nodes: LaidNode[];
  edges: TreeEdge[];
  rows: number;
  columns: number;
}

export function layoutTree(
  tree: KbTreeData,
  path: number[] = [],
  lastFired: number | null = null,
): TreeLayout {
  const byId = new Map(tree.nodes.map((node) => [node.id, node]));
  const onPath = new Set(path);
  const pathEdges = new Set<string>();
  for (let i = 0; i + 1 < path.length; i += 1) {
    pathEdges.add(`${path[i]}->${path[i + 1]}`);
  }

  const nodes: LaidNode[] = [];
  const edges: TreeEdge[] = [];
  let nextColumn = 0;

  // except = one row down, same column subtree; false = next free column
  const place = (id: number, row: number): void => {
    const node = byId.get(id);
    if (node === undefined) return;
    const column = nextColumn;
    nodes.push({
      node,
      row,
      column,
      onPath: onPath.has(id),
      lastFired: id === lastFired,
    });
    if (node.except !== null) {
      edges.push({
        from: id,
        to: node.except,
        kind: "except",
        onPath: pathEdges.has(`${id}->${node.except}`),
      });
      place(node.except, row + 1);
    }
    if (node.false !== null) {
      edges.push({
        from: id,
        to: node.false,
        kind: "false",
        onPath: pathEdges.has(`${id}->${node.false}`),
      });
      nextColumn = Math.max(nextColumn, column + 1);
      place(node.false, row);
    }
  };

  place(tree.root, 0);

  const rows = nodes.reduce((max, n) => Math.max(max, n.row + 1), 0);
  const columns = nodes.reduce((max, n) => Math.max(max, n.column + 1), 0);
  return { nodes, edges, rows, columns };
}

/** Node-by-node animation order for teaching except/false traversal. */
export function pathAnimationFrames(path: number[]): number[][] {
  return path.map((_, index) => path.slice(0, index + 1));
}
