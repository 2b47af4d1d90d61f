/* tslint:disable */
/* eslint-disable */

/**
 * Real part of `χ(x₁, 0, x₂, 0)` on an `n x n` grid over `[-extent, extent]²`,
 * row-major with `x₁` along rows.
 */
export function cf_slice(kind: string, r: number, delta: number, extent: number, n: number): Float64Array;

/**
 * Optimized fidelity at `points` evenly spaced `r₁₂ ∈ [0, r_max]`; NaN where
 * the optimization fails.
 */
export function fidelity_curve(input: string, resource: string, r34: number, lossy: boolean, r_max: number, points: number): Float64Array;

/**
 * Full optimization report as JSON.
 */
export function optimize_json(input: string, resource: string, r12: number, r34: number, lossy: boolean): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly cf_slice: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly fidelity_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly optimize_json: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
