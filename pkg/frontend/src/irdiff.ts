/**
 * Before/after diff of two intermediate representations, rendered when a
 * rule dry run or commit changes a question's analysis.
 */

import type { IrData, QueryTupleData } from "./types.js";

export interface DiffRow {
  field: string;
  before: string;
  after: string;
  changed: boolean;
}

const SLOTS: (keyof QueryTupleData)[] = ["sub", "cat", "t1", "rel", "t2", "t3"];

function show(value: string | null | undefined): string {
  return value === null || value === undefined || value === "" ? "?" : value;
}

export function diffIr(before: IrData | null, after: IrData | null): DiffRow[] {
  const rows: DiffRow[] = [];
  const push = (field: string, b: string, a: string) =>
    rows.push({ field, before: b, after: a, changed: b !== a });

  push("structure", show(before?.structure ?? null), show(after?.structure ?? null));
  const count = Math.max(before?.tuples.length ?? 0, after?.tuples.length ?? 0);
  for (let i = 0; i < count; i += 1) {
    for (const slot of SLOTS) {
      push(
        `tuple ${i + 1} ${slot}`,
        show(before?.tuples[i]?.[slot]),
        show(after?.tuples[i]?.[slot]),
      );
    }
  }
  return rows;
}

export function formatTuple(tuple: QueryTupleData): string {
  return `(${SLOTS.map((slot) => show(tuple[slot])).join(", ")})`;
}

export function formatIr(ir: IrData | null): string {
  if (ir === null) return "(unanalyzed)";
  return `${ir.structure}: ${ir.tuples.map(formatTuple).join(" and ")}`;
}
