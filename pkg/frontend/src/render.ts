/**
 * DOM rendering: a pure projection of the controller snapshot.
 *
 * The right-hand panel shows only API-provided numbers; the debug panel at
 * the bottom exposes the raw result payload so every displayed figure can be
 * traced to a response field.
 */

import { renderBars, renderLine } from './charts.js';
import { formatCustomers, formatGbps, formatMoney } from './format.js';
import type { Snapshot, TimingBadge } from './controller.js';
import type { RunResult, SweepResult } from './types.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function must(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing container: ${id}`);
  return node;
}

function renderArrow(container: HTMLElement, run: RunResult): void {
  container.textContent = '';
  const payment = run.settlement.payment_usd_per_month;
  const magnitude = formatMoney(Math.abs(payment));
  const wrapper = el('div', 'arrow-row');
  if (!run.settlement.deal) {
    wrapper.appendChild(el('span', 'badge badge-nodeal', 'no deal'));
    wrapper.appendChild(el('span', 'arrow-note', 'negative joint surplus: peering makes no sense'));
  } else if (payment === 0) {
    wrapper.appendChild(el('span', 'badge badge-deal', 'deal'));
    wrapper.appendChild(el('span', 'arrow-note', 'no transfer'));
  } else {
    const csp = run.focal.csp;
    const isp = run.focal.isp;
    const [from, to] = payment > 0 ? [csp, isp] : [isp, csp];
    wrapper.appendChild(el('span', 'badge badge-deal', 'deal'));
    wrapper.appendChild(el('span', 'party', from));
    const arrow = el('span', 'arrow', `— ${magnitude}/month →`);
    arrow.id = 'payment-amount';
    arrow.dataset.paymentUsd = String(payment);
    wrapper.appendChild(arrow);
    wrapper.appendChild(el('span', 'party', to));
  }
  container.appendChild(wrapper);
  const surplus = el(
    'div',
    'surplus',
    `joint surplus ${formatMoney(run.settlement.surplus_usd_per_month)}/month, ` +
      `split evenly between the two parties`,
  );
  container.appendChild(surplus);
}

function renderPerService(container: HTMLElement, run: RunResult): void {
  container.textContent = '';
  renderBars(
    container,
    run.per_service.map((row) => ({
      label: row.service,
      value: row.price_defined ? row.bandwidth_price_usd_per_gbps_month : null,
      title:
        `${row.service}: ${row.bandwidth_price_usd_per_gbps_month === null ? 'undefined' :
          formatMoney(row.bandwidth_price_usd_per_gbps_month)}/Gbps/month ` +
        `(payment ${formatMoney(row.payment_usd_per_month)}, ` +
        `${formatGbps(row.pre_gbps)} → ${formatGbps(row.post_gbps)})`,
    })),
  );
}

function renderChurn(container: HTMLElement, run: RunResult): void {
  container.textContent = '';
  const list = el('ul', 'churn-list');
  for (const event of run.events) {
    const item = el(
      'li',
      undefined,
      `${event.isp} ↔ ${event.csp}: ` +
        `${formatCustomers(event.phase1_total)} customers switched ISP, ` +
        `${formatCustomers(event.phase2_total)} switched provider`,
    );
    list.appendChild(item);
  }
  container.appendChild(list);
  const settlement = run.settlement;
  container.appendChild(
    el(
      'div',
      'population',
      `${settlement.isp}: ${formatCustomers(settlement.isp_population_before)} → ` +
        `${formatCustomers(settlement.isp_population_after)} subscribers`,
    ),
  );
}

function renderTimingBadge(container: HTMLElement, badge: TimingBadge | null): void {
  container.textContent = '';
  if (!badge) return;
  const delta = badge.profitNow - badge.profitIfFirst;
  const badgeEl = el('span', 'badge', '');
  badgeEl.id = 'timing-badge';
  badgeEl.dataset.profitDeltaUsd = String(delta);
  if (badge.focalPosition === 0 || Math.abs(delta) < 0.005) {
    badgeEl.classList.add('badge-deal');
    badgeEl.textContent = 'first mover';
  } else {
    badgeEl.classList.add('badge-late');
    badgeEl.textContent =
      `position ${badge.focalPosition + 1}: ${formatMoney(delta)}/month vs moving first ` +
      `(payment ${formatMoney(badge.paymentNow)} vs ${formatMoney(badge.paymentIfFirst)})`;
  }
  container.appendChild(badgeEl);
}

function renderSweep(container: HTMLElement, sweep: SweepResult | null): void {
  container.textContent = '';
  if (!sweep) return;
  renderLine(
    container,
    sweep.rows.map((row) => ({
      x: row.theta ?? 0,
      y: row.payment_usd_per_month,
      title: `theta ${row.theta}: ${formatMoney(row.payment_usd_per_month)}/month`,
    })),
    'CSP loyalty (theta)',
  );
}

/** Render one controller snapshot into the static page skeleton. */
export function renderSnapshot(snapshot: Snapshot): void {
  must('status-line').textContent = snapshot.pending
    ? 'evaluating…'
    : snapshot.error
      ? `error: ${snapshot.error}`
      : 'up to date';
  must('status-line').className = snapshot.error ? 'status error' : 'status';

  const run = snapshot.result;
  if (!run) return;
  renderArrow(must('payment-arrow'), run);
  renderPerService(must('price-bars'), run);
  renderChurn(must('churn-summary'), run);
  renderTimingBadge(must('timing-slot'), snapshot.timing);
  renderSweep(must('sweep-chart'), snapshot.sweep);
  must('debug-json').textContent = JSON.stringify(run, null, 2);
}
