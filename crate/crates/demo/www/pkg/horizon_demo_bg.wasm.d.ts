/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const inverse_decay: (a: number, b: number, c: number) => [number, number, number, number];
export const regret_sweep: (a: number, b: number) => [number, number, number, number];
export const trajectories: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
