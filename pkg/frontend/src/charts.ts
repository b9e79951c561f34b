/** Dependency-free SVG helpers: price bars and the payment-vs-loyalty line. */

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export interface Bar {
  label: string;
  value: number | null;
  title: string;
}

/** Log-scale horizontal bars; service prices span several orders of magnitude. */
export function renderBars(container: HTMLElement, bars: Bar[]): void {
  container.textContent = '';
  const width = 360;
  const rowHeight = 26;
  const svg = svgElement('svg', {
    width,
    height: bars.length * rowHeight + 4,
    viewBox: `0 0 ${width} ${bars.length * rowHeight + 4}`,
  });
  const magnitudes = bars
    .filter((b) => b.value !== null && b.value !== 0)
    .map((b) => Math.abs(b.value!));
  const maxLog = Math.max(1, ...magnitudes.map((m) => Math.log10(m) + 1));
  bars.forEach((bar, row) => {
    const y = row * rowHeight + 2;
    svg.appendChild(
      Object.assign(svgElement('text', { x: 4, y: y + 15, 'font-size': 12 }), {
        textContent: bar.label,
      }),
    );
    if (bar.value === null) {
      svg.appendChild(
        Object.assign(
          svgElement('text', { x: 150, y: y + 15, 'font-size': 11, fill: '#888' }),
          { textContent: 'undefined (no extra volume)' },
        ),
      );
      return;
    }
    const magnitude = Math.abs(bar.value);
    const scaled = magnitude === 0 ? 0 : (Math.log10(magnitude) + 1) / maxLog;
    const length = Math.max(2, scaled * 200);
    const rect = svgElement('rect', {
      x: 150,
      y,
      width: length,
      height: rowHeight - 8,
      rx: 2,
      fill: bar.value >= 0 ? '#2a7ae2' : '#d9534f',
    });
    rect.appendChild(Object.assign(svgElement('title', {}), { textContent: bar.title }));
    svg.appendChild(rect);
  });
  container.appendChild(svg);
}

export interface LinePoint {
  x: number;
  y: number;
  title: string;
}

export function renderLine(container: HTMLElement, points: LinePoint[], xLabel: string): void {
  container.textContent = '';
  if (!points.length) {
    container.textContent = 'no sweep data';
    return;
  }
  const width = 360;
  const height = 160;
  const pad = 30;
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(0, ...ys);
  const yMax = Math.max(0, ...ys);
  const xScale = (x: number) =>
    pad + ((x - xMin) / Math.max(1e-12, xMax - xMin)) * (width - 2 * pad);
  const yScale = (y: number) =>
    height - pad - ((y - yMin) / Math.max(1e-12, yMax - yMin)) * (height - 2 * pad);

  const svg = svgElement('svg', { width, height, viewBox: `0 0 ${width} ${height}` });
  svg.appendChild(
    svgElement('line', {
      x1: pad, y1: yScale(0), x2: width - pad, y2: yScale(0),
      stroke: '#bbb', 'stroke-dasharray': '4 3',
    }),
  );
  const path = points
    .map((p, i) => `${i === 0 ? 'M' : 'L'}${xScale(p.x).toFixed(1)},${yScale(p.y).toFixed(1)}`)
    .join(' ');
  svg.appendChild(svgElement('path', { d: path, fill: 'none', stroke: '#2a7ae2', 'stroke-width': 2 }));
  for (const point of points) {
    const dot = svgElement('circle', {
      cx: xScale(point.x), cy: yScale(point.y), r: 4, fill: '#2a7ae2',
    });
    dot.appendChild(Object.assign(svgElement('title', {}), { textContent: point.title }));
    svg.appendChild(dot);
  }
  svg.appendChild(
    Object.assign(
      svgElement('text', { x: width / 2, y: height - 6, 'font-size': 11, 'text-anchor': 'middle' }),
      { textContent: xLabel },
    ),
  );
  container.appendChild(svg);
}
