/* tslint:disable */
/* eslint-disable */

/**
 * One row of `H⁻¹` against its geometric lower bound.
 */
export function inverse_decay(alpha: number, beta: number, horizon: number): string;

/**
 * Regret of RHGD, RHAG and MPC for `W = 0..=max_w`, with upper bounds.
 */
export function regret_sweep(beta: number, max_w: number): string;

/**
 * Minimizers, offline optimum and the online trajectories at window `w`.
 */
export function trajectories(beta: number, w: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly inverse_decay: (a: number, b: number, c: number) => [number, number, number, number];
    readonly regret_sweep: (a: number, b: number) => [number, number, number, number];
    readonly trajectories: (a: number, b: number) => [number, number, number, number];
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
