/* tslint:disable */
/* eslint-disable */

/**
 * Generates a hard batch partial sum trace and plays the verification game at `split`.
 *
 * `corrupt` is empty for the truthful message, or one of `flip:k`, `truncate:k`, `extend:k`.
 */
export function comm_game(k: number, b: bigint, p: bigint, seed: bigint, split: string, corrupt: string): string;

/**
 * Replays an interval script on the segment tree and the bitmap side by side.
 */
export function interval_union(n: bigint, script: string): string;

/**
 * Union area of rectangles given as `x1,x2,y1,y2` CSV rows.
 */
export function klee(csv: string): string;

/**
 * A random rectangle set in the CSV format [`klee`] reads.
 */
export function random_rects_csv(count: number, max: bigint, seed: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly comm_game: (a: number, b: bigint, c: bigint, d: bigint, e: number, f: number, g: number, h: number) => [number, number];
    readonly interval_union: (a: bigint, b: number, c: number) => [number, number];
    readonly klee: (a: number, b: number) => [number, number];
    readonly random_rects_csv: (a: number, b: bigint, c: bigint) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
