/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const comm_game: (a: number, b: bigint, c: bigint, d: bigint, e: number, f: number, g: number, h: number) => [number, number];
export const interval_union: (a: bigint, b: number, c: number) => [number, number];
export const klee: (a: number, b: number) => [number, number];
export const random_rects_csv: (a: number, b: bigint, c: bigint) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
