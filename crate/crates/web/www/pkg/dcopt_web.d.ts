/* tslint:disable */
/* eslint-disable */

/**
 * Pack random weights whole and by halves with `nfd`, `ffd` or `bfd`.
 */
export function bpp_demo(alg: string, n: number, seed: number): string;

/**
 * Split a random knapsack instance by efficiency and solve both halves
 * exactly.
 */
export function dkp_demo(n: number, d: number, tightness: number, seed: number): string;

/**
 * Split a random TSP instance, solve both halves and merge the tours.
 */
export function tsp_demo(_case: string, n: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly bpp_demo: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly dkp_demo: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly tsp_demo: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __externref_table_alloc: () => number;
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
