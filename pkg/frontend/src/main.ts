/**
 * Bootstrap: fetch the dataset, build the lever panel, wire events to the
 * controller, and keep the results panel in sync.
 */

import { ApiClient, resolveApiBase } from './api.js';
import { ExplorerController } from './controller.js';
import { sweepToCsv } from './csv.js';
import { renderSnapshot } from './render.js';
import {
  addRivalEvent,
  defaultEventOrder,
  initialState,
  moveEvent,
  offeredServices,
  removeEvent,
  setBeta,
  setCdn,
  setFocal,
  setTheta,
  setUplift,
  toggleService,
  type ExplorerState,
  type UpliftName,
} from './state.js';
import type { DatasetInfo, PairRef } from './types.js';

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element: ${id}`);
  return node as T;
}

function option(value: string): HTMLOptionElement {
  const node = document.createElement('option');
  node.value = value;
  node.textContent = value;
  return node;
}

function renderLeverValues(state: ExplorerState): void {
  byId<HTMLInputElement>('beta-slider').value = String(state.beta);
  byId('beta-value').textContent = state.beta.toFixed(2);
  byId<HTMLInputElement>('theta-slider').value = String(state.theta);
  byId('theta-value').textContent = state.theta.toFixed(2);
  byId<HTMLInputElement>('cdn-toggle').checked = state.cdnEnabled;
  for (const input of document.querySelectorAll<HTMLInputElement>('input[name=uplift]')) {
    input.checked = input.value === state.uplift;
  }
}

function renderServiceBoxes(
  dataset: DatasetInfo,
  state: ExplorerState,
  onToggle: (serviceId: string) => void,
): void {
  const container = byId('service-boxes');
  container.textContent = '';
  for (const serviceId of offeredServices(dataset, state.focal.csp)) {
    const label = document.createElement('label');
    const input = document.createElement('input');
    input.type = 'checkbox';
    input.checked = state.services.includes(serviceId);
    input.addEventListener('change', () => onToggle(serviceId));
    label.appendChild(input);
    label.appendChild(document.createTextNode(` ${serviceId}`));
    container.appendChild(label);
  }
}

function renderEventList(
  state: ExplorerState,
  onMove: (from: number, to: number) => void,
  onRemove: (index: number) => void,
): void {
  const list = byId('event-list');
  list.textContent = '';
  let dragFrom: number | null = null;
  state.eventOrder.forEach((pair, index) => {
    const item = document.createElement('li');
    item.draggable = true;
    const isFocal = pair.isp === state.focal.isp && pair.csp === state.focal.csp;
    item.textContent = `${index + 1}. ${pair.isp} ↔ ${pair.csp}${isFocal ? ' (focal)' : ''}`;
    item.addEventListener('dragstart', () => {
      dragFrom = index;
    });
    item.addEventListener('dragover', (event) => event.preventDefault());
    item.addEventListener('drop', () => {
      if (dragFrom !== null) onMove(dragFrom, index);
      dragFrom = null;
    });
    const controls = document.createElement('span');
    controls.className = 'event-controls';
    const up = document.createElement('button');
    up.textContent = '↑';
    up.disabled = index === 0;
    up.addEventListener('click', () => onMove(index, index - 1));
    const down = document.createElement('button');
    down.textContent = '↓';
    down.disabled = index === state.eventOrder.length - 1;
    down.addEventListener('click', () => onMove(index, index + 1));
    controls.appendChild(up);
    controls.appendChild(down);
    if (!isFocal) {
      const drop = document.createElement('button');
      drop.textContent = '×';
      drop.addEventListener('click', () => onRemove(index));
      controls.appendChild(drop);
    }
    item.appendChild(controls);
    list.appendChild(item);
  });
}

async function bootstrap(): Promise<void> {
  const api = new ApiClient(resolveApiBase());
  const datasets = await api.listDatasets();
  const datasetId = datasets[0] ?? 'us2013';
  const dataset = await api.getDataset(datasetId);

  const isps = dataset.isps.filter((i) => i.can_peer).map((i) => i.id);
  const csps = dataset.csps.map((c) => c.id);
  const focal: PairRef = {
    isp: isps.includes('comcast') ? 'comcast' : isps[0]!,
    csp: csps.includes('google') ? 'google' : csps[0]!,
  };

  const ispSelect = byId<HTMLSelectElement>('isp-select');
  const cspSelect = byId<HTMLSelectElement>('csp-select');
  isps.forEach((id) => ispSelect.appendChild(option(id)));
  csps.forEach((id) => cspSelect.appendChild(option(id)));
  ispSelect.value = focal.isp;
  cspSelect.value = focal.csp;
  byId('dataset-name').textContent = datasetId;

  const controller = new ExplorerController(api, initialState(dataset, focal));

  const refreshLevers = () => {
    const state = controller.currentState();
    renderLeverValues(state);
    renderServiceBoxes(dataset, state, (serviceId) =>
      void controller.apply((s) => toggleService(s, dataset, serviceId)),
    );
    renderEventList(
      state,
      (from, to) => void controller.apply((s) => moveEvent(s, from, to)),
      (index) => void controller.apply((s) => removeEvent(s, index)),
    );
  };

  controller.subscribe((snapshot) => {
    renderSnapshot(snapshot);
    refreshLevers();
  });

  const focalChanged = () =>
    void controller.apply((s) =>
      setFocal(s, dataset, { isp: ispSelect.value, csp: cspSelect.value }),
    );
  ispSelect.addEventListener('change', focalChanged);
  cspSelect.addEventListener('change', focalChanged);

  byId<HTMLInputElement>('beta-slider').addEventListener('change', (event) =>
    void controller.apply((s) => setBeta(s, Number((event.target as HTMLInputElement).value))),
  );
  byId<HTMLInputElement>('theta-slider').addEventListener('change', (event) =>
    void controller.apply((s) => setTheta(s, Number((event.target as HTMLInputElement).value))),
  );
  for (const preset of document.querySelectorAll<HTMLButtonElement>('button[data-beta]')) {
    preset.addEventListener('click', () =>
      void controller.apply((s) => setBeta(s, Number(preset.dataset.beta))),
    );
  }
  for (const preset of document.querySelectorAll<HTMLButtonElement>('button[data-theta]')) {
    preset.addEventListener('click', () =>
      void controller.apply((s) => setTheta(s, Number(preset.dataset.theta))),
    );
  }
  for (const input of document.querySelectorAll<HTMLInputElement>('input[name=uplift]')) {
    input.addEventListener('change', () =>
      void controller.apply((s) => setUplift(s, input.value as UpliftName)),
    );
  }
  byId<HTMLInputElement>('cdn-toggle').addEventListener('change', (event) =>
    void controller.apply((s) => setCdn(s, (event.target as HTMLInputElement).checked)),
  );
  byId<HTMLButtonElement>('add-rivals').addEventListener('click', () =>
    void controller.apply((s) =>
      defaultEventOrder(dataset, s.focal).reduce((acc, pair) => addRivalEvent(acc, pair), s),
    ),
  );
  byId<HTMLButtonElement>('download-csv').addEventListener('click', () => {
    const sweep = controller.snapshot().sweep;
    if (!sweep) return;
    const blob = new Blob([sweepToCsv(sweep)], { type: 'text/csv' });
    const link = document.createElement('a');
    link.href = URL.createObjectURL(blob);
    link.download = 'sweep.csv';
    link.click();
    URL.revokeObjectURL(link.href);
  });
  byId<HTMLButtonElement>('toggle-debug').addEventListener('click', () => {
    byId('debug-json').classList.toggle('hidden');
  });

  await controller.evaluate();
}

bootstrap().catch((err) => {
  const status = document.getElementById('status-line');
  if (status) {
    status.textContent = `failed to reach the API: ${err instanceof Error ? err.message : err}`;
    status.className = 'status error';
  }
});
