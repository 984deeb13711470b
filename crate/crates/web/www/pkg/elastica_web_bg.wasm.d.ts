/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curve_free: (a: number, b: number) => void;
export const curve_bbar: (a: number) => number;
export const curve_bound: (a: number) => number;
export const curve_closed: (a: number) => number;
export const curve_converged: (a: number) => number;
export const curve_iterations: (a: number) => number;
export const curve_multiplicity: (a: number) => number;
export const curve_xs: (a: number) => [number, number];
export const curve_ys: (a: number) => [number, number];
export const curve_zs: (a: number) => [number, number];
export const leafed: (a: number, b: number, c: number) => [number, number, number];
export const m_star: () => number;
export const minimize_loop: (a: number, b: bigint, c: number) => [number, number, number];
export const sample_planar: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const varpi_star: () => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
