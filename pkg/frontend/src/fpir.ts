/** Finger threshold to false-positive identification rate, and its display
 * form. The matcher's impostor score is uniform on [0, MAXINT), so the rate
 * is exactly threshold / MAXINT. */

export const MAXINT = 2147483647;

export function expectedFpir(fingerThreshold: number): number {
  if (fingerThreshold < 0 || fingerThreshold >= MAXINT) {
    throw new RangeError(`finger threshold ${fingerThreshold} outside [0, MAXINT)`);
  }
  return fingerThreshold / MAXINT;
}

/** Render a rate the way the vendor sheets print it: one significant digit,
 * no leading zero below 1% (".001%" for 1e-5). */
export function formatFpirPercent(rate: number): string {
  const percent = rate * 100;
  if (percent === 0) {
    return "0%";
  }
  let exponent = Math.floor(Math.log10(percent));
  let mantissa = Math.round(percent / Math.pow(10, exponent));
  if (mantissa === 10) {
    mantissa = 1;
    exponent += 1;
  }
  const decimals = Math.max(0, -exponent);
  const text = (mantissa * Math.pow(10, exponent)).toFixed(decimals);
  return (text.startsWith("0.") ? text.slice(1) : text) + "%";
}
