/* tslint:disable */
/* eslint-disable */

/**
 * A polyline with a few numbers to show next to it.
 */
export class Curve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Normalized bending energy `L·B`.
     */
    readonly bbar: number;
    /**
     * `ϖ* r²` for closed curves with `r ≥ 2`, else `4π²` (0 when open).
     */
    readonly bound: number;
    readonly closed: boolean;
    readonly converged: boolean;
    readonly iterations: number;
    /**
     * Detected multiplicity; 0 for open curves.
     */
    readonly multiplicity: number;
    readonly xs: Float64Array;
    readonly ys: Float64Array;
    readonly zs: Float64Array;
}

/**
 * The closed curve of `r` leaves, in the plane (`dim = 2`, even `r`) or in
 * space (`dim = 3`).
 */
export function leafed(r: number, dim: number, n_per_leaf: number): Curve;

export function m_star(): number;

/**
 * Minimizes bending energy over curves of length 1 from the origin back to
 * the origin, starting from a randomly perturbed circle.
 */
export function minimize_loop(n: number, seed: bigint, perturbation: number): Curve;

/**
 * Samples `periods` curvature periods of a planar elastica with `n` edges.
 * `family` is one of `wavelike`, `orbitlike`, `borderline`, `circular`.
 */
export function sample_planar(family: string, m: number, periods: number, n: number): Curve;

export function varpi_star(): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curve_free: (a: number, b: number) => void;
    readonly curve_bbar: (a: number) => number;
    readonly curve_bound: (a: number) => number;
    readonly curve_closed: (a: number) => number;
    readonly curve_converged: (a: number) => number;
    readonly curve_iterations: (a: number) => number;
    readonly curve_multiplicity: (a: number) => number;
    readonly curve_xs: (a: number) => [number, number];
    readonly curve_ys: (a: number) => [number, number];
    readonly curve_zs: (a: number) => [number, number];
    readonly leafed: (a: number, b: number, c: number) => [number, number, number];
    readonly m_star: () => number;
    readonly minimize_loop: (a: number, b: bigint, c: number) => [number, number, number];
    readonly sample_planar: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly varpi_star: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
