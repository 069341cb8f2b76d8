/** The one level-to-color mapping; markers and chart both read from here. */

export const LEVEL_COLORS: Record<number, string> = {
  1: "#2ecc40",
  2: "#ffdc00",
  3: "#ff851b",
  4: "#ff4136",
};

export const LEVEL_NAMES: Record<number, string> = {
  1: "clear with margin",
  2: "marginal",
  3: "near grade",
  4: "hang-up",
};

export function colorForLevel(level: number): string {
  const color = LEVEL_COLORS[level];
  if (!color) throw new Error(`no color for level ${level}`);
  return color;
}
