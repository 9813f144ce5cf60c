/* tslint:disable */
/* eslint-disable */

/**
 * One instance with its ground truth and latest estimate.
 */
export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * RGBA pixels of the ground truth.
     */
    clean_rgba(): Uint8Array;
    /**
     * Denoises the current estimate in place; returns the new PSNR.
     */
    denoise(method: string): number;
    /**
     * Case id, family, parameter and expression, one per line.
     */
    describe(): string;
    /**
     * RGBA pixels of the current estimate, on the ground truth's colour scale.
     */
    estimate_rgba(): Uint8Array;
    /**
     * Draws case `index` of `family` (laplace, poisson or yukawa) at `res`².
     */
    constructor(family: string, seed: bigint, index: bigint, res: number);
    /**
     * Runs `budget` walks per pixel; returns the PSNR in dB.
     */
    solve(budget: number, seed: bigint): number;
    readonly res: number;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_clean_rgba: (a: number) => [number, number];
    readonly demo_denoise: (a: number, b: number, c: number) => [number, number, number];
    readonly demo_describe: (a: number) => [number, number];
    readonly demo_estimate_rgba: (a: number) => [number, number];
    readonly demo_new: (a: number, b: number, c: bigint, d: bigint, e: number) => [number, number, number];
    readonly demo_res: (a: number) => number;
    readonly demo_solve: (a: number, b: number, c: bigint) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
