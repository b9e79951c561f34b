/** Number formatting helpers; all display strings funnel through here. */

/** USD to the cent, e.g. 179264.187 -> "$179,264.19"; sign kept explicit. */
export function formatMoney(usd: number): string {
  const sign = usd < 0 ? '-' : '';
  const cents = Math.round(Math.abs(usd) * 100);
  const whole = Math.floor(cents / 100);
  const fraction = (cents % 100).toString().padStart(2, '0');
  return `${sign}$${whole.toLocaleString('en-US')}.${fraction}`;
}

export function formatCustomers(count: number): string {
  return Math.round(count).toLocaleString('en-US');
}

export function formatGbps(gbps: number): string {
  return `${gbps.toFixed(gbps >= 100 ? 0 : 2)} Gbps`;
}

/**
 * Shortest round-trip float text matching the reference CSV emitter, so the
 * downloadable CSV is byte-identical to the CLI's: exponents are padded to
 * two digits ("1e-07") and integral floats keep their ".0".
 */
export function pyFloatRepr(value: number): string {
  if (Number.isInteger(value) && Math.abs(value) < 1e16) {
    return `${value.toFixed(1)}`;
  }
  let text = value.toString();
  const match = text.match(/^(-?\d(?:\.\d+)?)e([+-])(\d+)$/);
  if (match) {
    const exponent = match[3]!.padStart(2, '0');
    text = `${match[1]}e${match[2]}${exponent}`;
  }
  return text;
}

export function csvCell(value: number | boolean | string | null): string {
  if (value === null) return '';
  if (typeof value === 'boolean') return value ? 'true' : 'false';
  if (typeof value === 'number') return pyFloatRepr(value);
  return value;
}
