/**
 * Sweep-table CSV, byte-identical to the CLI's `--format csv` output so a
 * download from the chart and a scripted run can be diffed directly.
 */

import { csvCell } from './format.js';
import type { SweepResult } from './types.js';

export function sweepToCsv(sweep: SweepResult): string {
  const header = 'beta,theta,payment_usd_per_month,surplus_usd_per_month,deal';
  const lines = sweep.rows.map((row) =>
    [
      csvCell(row.beta),
      csvCell(row.theta),
      csvCell(row.payment_usd_per_month),
      csvCell(row.surplus_usd_per_month),
      csvCell(row.deal),
    ].join(','),
  );
  return [header, ...lines].join('\n') + '\n';
}
