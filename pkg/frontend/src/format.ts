/**
 * Numeric rendering identical to the CLI's 6-significant-digit rule
 * (Python's %.6g). Byte equality with CLI output and sweep CSV cells is
 * pinned by fixture tests, so keep the two implementations in lockstep.
 *
 * Caveat: on exact decimal rounding ties JS rounds half-up while CPython
 * rounds half-even; model outputs never land on exact ties.
 */
export function sig6(x: number): string {
  if (Number.isNaN(x)) return "nan";
  if (!Number.isFinite(x)) return x > 0 ? "inf" : "-inf";
  if (x === 0) return Object.is(x, -0) ? "-0" : "0";
  const neg = x < 0;
  const [mantissa, expPart] = Math.abs(x).toExponential(5).split("e");
  const e = parseInt(expPart, 10);
  const digits = mantissa.replace(".", ""); // exactly 6 digits
  let out: string;
  if (e < -4 || e >= 6) {
    const frac = digits.slice(1).replace(/0+$/, "");
    const head = frac ? `${digits[0]}.${frac}` : digits[0];
    const sign = e < 0 ? "-" : "+";
    out = `${head}e${sign}${String(Math.abs(e)).padStart(2, "0")}`;
  } else if (e >= 0) {
    const intPart = digits.slice(0, e + 1);
    const frac = digits.slice(e + 1).replace(/0+$/, "");
    out = frac ? `${intPart}.${frac}` : intPart;
  } else {
    const frac = ("0".repeat(-e - 1) + digits).replace(/0+$/, "");
    out = `0.${frac}`;
  }
  return neg ? `-${out}` : out;
}
