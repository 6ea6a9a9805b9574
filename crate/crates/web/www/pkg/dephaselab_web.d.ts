/* tslint:disable */
/* eslint-disable */

/**
 * Rows `[s, Δ_S(t, s), I_SE_a(s), I_SE_b(s)]`.
 */
export function bound(r: number, c: number, d: number, t: number, points: number): Float64Array;

/**
 * Rows `[t, C_a, C_b]`: concurrence of the zero-discord and entangled models.
 */
export function concurrence(c: number, d: number, g: number, t_max: number, points: number): Float64Array;

/**
 * Rows `[s, Δ_a, Δ_b, env_a, corr1_a, corr2_a, env_b, corr1_b, corr2_b]`.
 */
export function contributions(r: number, c: number, d: number, t: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly bound: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly concurrence: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly contributions: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
