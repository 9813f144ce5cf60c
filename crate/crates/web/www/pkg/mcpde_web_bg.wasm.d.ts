/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const demo_clean_rgba: (a: number) => [number, number];
export const demo_denoise: (a: number, b: number, c: number) => [number, number, number];
export const demo_describe: (a: number) => [number, number];
export const demo_estimate_rgba: (a: number) => [number, number];
export const demo_new: (a: number, b: number, c: bigint, d: bigint, e: number) => [number, number, number];
export const demo_res: (a: number) => number;
export const demo_solve: (a: number, b: number, c: bigint) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
