/** Component palette; mirrors the server-side SVG renderer so batch figures
 * and the live canvas agree. */

export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
  "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#dbdb8d",
];

export function componentColor(component: number): string {
  return PALETTE[component % PALETTE.length];
}
